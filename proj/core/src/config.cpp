#include "acqregret/config.hpp"

#include "acqregret/errors.hpp"
#include "acqregret/format.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace acqregret {
namespace {

std::string Trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) {
    throw ConfigError("invalid value for " + key + ": '" + text + "'");
  }
  return value;
}

bool ParseBool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw ConfigError("invalid boolean for " + key + ": '" + text + "'");
}

std::vector<int> ParseIntList(const std::string& key, const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(ParseNumber<int>(key, Trim(item)));
  if (out.empty()) throw ConfigError(key + " must not be empty");
  return out;
}

}  // namespace

const std::vector<std::string>& SettingKeys() {
  static const std::vector<std::string> keys = {
      "version",          "benchmark",         "dim",
      "kernel",           "acquisition",       "ucb_alpha",
      "rounds",           "n_init",            "repeats",
      "start_counts",     "moving_avg_window", "seed",
      "gp_restarts",      "gp_noise",          "observation_noise",
      "optimizer",        "n_starts",          "direct_max_evals",
      "direct_max_depth", "direct_epsilon",    "direct_max_time_s",
      "local_eps_opt",    "local_max_iters",   "local_memory",
      "local_wolfe_c1",   "local_wolfe_c2",    "coincidence_tol",
      "cluster_tol",      "basins",            "basin_probes",
      "timing"};
  return keys;
}

Settings Settings::Parse(std::istream& in, std::string_view source) {
  Settings settings;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = Trim(std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) +
                        ": expected key = value");
    }
    try {
      settings.Set(Trim(std::string_view(body).substr(0, eq)),
                   Trim(std::string_view(body).substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(std::string(source) + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return settings;
}

Settings Settings::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  return Parse(in, path);
}

void Settings::Set(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override must be key=value: '" + std::string(assignment) + "'");
  }
  Set(Trim(assignment.substr(0, eq)), Trim(assignment.substr(eq + 1)));
}

void Settings::Set(const std::string& key, const std::string& value) {
  const auto& keys = SettingKeys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw ConfigError("unknown config key: '" + key + "'");
  }
  values_[key] = value;
}

const std::string& Settings::Get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing config key: " + key);
  return it->second;
}

ExperimentConfig ExperimentFromSettings(const Settings& settings) {
  ExperimentConfig cfg;
  BoConfig& bo = cfg.bo;
  for (const auto& [key, value] : settings.values()) {
    if (key == "version") {
      continue;
    } else if (key == "benchmark") {
      bo.benchmark = value;
    } else if (key == "dim") {
      if (value == "default") {
        bo.dim.reset();
      } else {
        bo.dim = ParseNumber<int>(key, value);
      }
    } else if (key == "kernel") {
      bo.kernel = ParseKernelFamily(value);
    } else if (key == "acquisition") {
      bo.acquisition = ParseAcquisitionKind(value);
    } else if (key == "ucb_alpha") {
      bo.ucb_alpha = ParseNumber<double>(key, value);
    } else if (key == "rounds") {
      bo.rounds = ParseNumber<int>(key, value);
    } else if (key == "n_init") {
      bo.n_init = ParseNumber<int>(key, value);
    } else if (key == "repeats") {
      cfg.repeats = ParseNumber<int>(key, value);
    } else if (key == "start_counts") {
      cfg.start_counts = ParseIntList(key, value);
    } else if (key == "moving_avg_window") {
      cfg.moving_avg_window = ParseNumber<int>(key, value);
    } else if (key == "seed") {
      cfg.seed = ParseNumber<std::uint64_t>(key, value);
      bo.seed = cfg.seed;
    } else if (key == "gp_restarts") {
      bo.gp_restarts = ParseNumber<int>(key, value);
    } else if (key == "gp_noise") {
      if (value == "fitted") {
        bo.gp_fixed_noise.reset();
      } else {
        bo.gp_fixed_noise = ParseNumber<double>(key, value);
      }
    } else if (key == "observation_noise") {
      bo.observation_noise = ParseNumber<double>(key, value);
    } else if (key == "optimizer") {
      if (value == "direct") {
        bo.optimizer.kind = AcqOptimizerKind::kDirect;
      } else if (value == "multilocal") {
        bo.optimizer.kind = AcqOptimizerKind::kMultiLocal;
      } else {
        throw ConfigError("optimizer must be direct or multilocal, got '" + value + "'");
      }
    } else if (key == "n_starts") {
      bo.optimizer.n_starts = ParseNumber<int>(key, value);
    } else if (key == "direct_max_evals") {
      bo.optimizer.direct.max_evals = ParseNumber<int>(key, value);
    } else if (key == "direct_max_depth") {
      bo.optimizer.direct.max_depth = ParseNumber<int>(key, value);
    } else if (key == "direct_epsilon") {
      bo.optimizer.direct.epsilon_po = ParseNumber<double>(key, value);
    } else if (key == "direct_max_time_s") {
      bo.optimizer.direct.max_wall_time_s = ParseNumber<double>(key, value);
    } else if (key == "local_eps_opt") {
      bo.optimizer.local.eps_opt = ParseNumber<double>(key, value);
    } else if (key == "local_max_iters") {
      bo.optimizer.local.max_iters = ParseNumber<int>(key, value);
    } else if (key == "local_memory") {
      bo.optimizer.local.memory = ParseNumber<int>(key, value);
    } else if (key == "local_wolfe_c1") {
      bo.optimizer.local.wolfe_c1 = ParseNumber<double>(key, value);
    } else if (key == "local_wolfe_c2") {
      bo.optimizer.local.wolfe_c2 = ParseNumber<double>(key, value);
    } else if (key == "coincidence_tol") {
      cfg.coincidence_tol = ParseNumber<double>(key, value);
    } else if (key == "cluster_tol") {
      cfg.cluster_tol = ParseNumber<double>(key, value);
    } else if (key == "basins") {
      cfg.basins = ParseBool(key, value);
    } else if (key == "basin_probes") {
      cfg.basin_probes = ParseNumber<int>(key, value);
    } else if (key == "timing") {
      cfg.timing = ParseBool(key, value);
    }
  }
  cfg.Validate();
  return cfg;
}

Settings ExperimentToSettings(const ExperimentConfig& cfg) {
  const BoConfig& bo = cfg.bo;
  Settings s;
  s.Set("version", ACQREGRET_VERSION);
  s.Set("benchmark", bo.benchmark);
  s.Set("dim", bo.dim ? std::to_string(*bo.dim) : "default");
  s.Set("kernel", std::string(ToString(bo.kernel)));
  s.Set("acquisition", std::string(ToString(bo.acquisition)));
  s.Set("ucb_alpha", FormatDouble(bo.ucb_alpha));
  s.Set("rounds", std::to_string(bo.rounds));
  s.Set("n_init", std::to_string(bo.n_init));
  s.Set("repeats", std::to_string(cfg.repeats));
  std::string counts;
  for (std::size_t i = 0; i < cfg.start_counts.size(); ++i) {
    counts += (i ? "," : "") + std::to_string(cfg.start_counts[i]);
  }
  s.Set("start_counts", counts);
  s.Set("moving_avg_window", std::to_string(cfg.moving_avg_window));
  s.Set("seed", std::to_string(cfg.seed));
  s.Set("gp_restarts", std::to_string(bo.gp_restarts));
  s.Set("gp_noise", bo.gp_fixed_noise ? FormatDouble(*bo.gp_fixed_noise) : "fitted");
  s.Set("observation_noise", FormatDouble(bo.observation_noise));
  s.Set("optimizer", bo.optimizer.kind == AcqOptimizerKind::kDirect ? "direct" : "multilocal");
  s.Set("n_starts", std::to_string(bo.optimizer.n_starts));
  s.Set("direct_max_evals", std::to_string(bo.optimizer.direct.max_evals));
  s.Set("direct_max_depth", std::to_string(bo.optimizer.direct.max_depth));
  s.Set("direct_epsilon", FormatDouble(bo.optimizer.direct.epsilon_po));
  s.Set("direct_max_time_s", FormatDouble(bo.optimizer.direct.max_wall_time_s));
  s.Set("local_eps_opt", FormatDouble(bo.optimizer.local.eps_opt));
  s.Set("local_max_iters", std::to_string(bo.optimizer.local.max_iters));
  s.Set("local_memory", std::to_string(bo.optimizer.local.memory));
  s.Set("local_wolfe_c1", FormatDouble(bo.optimizer.local.wolfe_c1));
  s.Set("local_wolfe_c2", FormatDouble(bo.optimizer.local.wolfe_c2));
  s.Set("coincidence_tol", FormatDouble(cfg.coincidence_tol));
  s.Set("cluster_tol", FormatDouble(cfg.cluster_tol));
  s.Set("basins", cfg.basins ? "true" : "false");
  s.Set("basin_probes", std::to_string(cfg.basin_probes));
  s.Set("timing", cfg.timing ? "true" : "false");
  return s;
}

void WriteSettings(std::ostream& out, const Settings& settings) {
  for (const std::string& key : SettingKeys()) {
    if (settings.Has(key)) out << key << " = " << settings.Get(key) << '\n';
  }
}

}  // namespace acqregret
