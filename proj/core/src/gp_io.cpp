#include "acqregret/errors.hpp"
#include "acqregret/format.hpp"
#include "acqregret/gp.hpp"

#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

namespace acqregret {
namespace {

std::string Join(const Vector& v) {
  std::string out;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += FormatDouble(v[i]);
  }
  return out;
}

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double ParseNumber(const std::string& text, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError("model file: key '" + key + "' has non-numeric value '" + text + "'");
  }
}

Vector ParseList(const std::string& text, const std::string& key) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) values.push_back(ParseNumber(Trim(item), key));
  return Eigen::Map<Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

}  // namespace

// Format (one "key = value" per line, '#' comments):
//   kernel, dim, n, signal_scale, lengthscales (comma list), noise,
//   x.<i> (comma list, one row per training point), y (comma list)
void WriteGpModel(std::ostream& out, const GpModel& model) {
  out << "# acqregret gp model\n";
  out << "kernel = " << ToString(model.kernel().family()) << '\n';
  out << "dim = " << model.dim() << '\n';
  out << "n = " << model.size() << '\n';
  out << "signal_scale = " << FormatDouble(model.kernel().signal_scale()) << '\n';
  out << "lengthscales = " << Join(model.kernel().lengthscales()) << '\n';
  out << "noise = " << FormatDouble(model.noise()) << '\n';
  for (int i = 0; i < model.size(); ++i) {
    out << "x." << i << " = " << Join(model.train_inputs().row(i).transpose()) << '\n';
  }
  out << "y = " << Join(model.train_targets()) << '\n';
}

GpModel ReadGpModel(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("model file: malformed line '" + line + "'");
    kv[Trim(line.substr(0, eq))] = Trim(line.substr(eq + 1));
  }
  auto get = [&](const std::string& key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw ConfigError("model file: missing key '" + key + "'");
    return it->second;
  };
  const int dim = static_cast<int>(ParseNumber(get("dim"), "dim"));
  const int n = static_cast<int>(ParseNumber(get("n"), "n"));
  if (dim < 1 || n < 1) throw ConfigError("model file: dim and n must be positive");
  Matrix inputs(n, dim);
  for (int i = 0; i < n; ++i) {
    const std::string key = "x." + std::to_string(i);
    const Vector row = ParseList(get(key), key);
    if (row.size() != dim) throw ConfigError("model file: row '" + key + "' has wrong length");
    inputs.row(i) = row.transpose();
  }
  const Vector targets = ParseList(get("y"), "y");
  if (targets.size() != n) throw ConfigError("model file: 'y' has wrong length");
  const Vector lengthscales = ParseList(get("lengthscales"), "lengthscales");
  Kernel kernel(ParseKernelFamily(get("kernel")), ParseNumber(get("signal_scale"), "signal_scale"),
                lengthscales);
  return GpModel::Build(std::move(kernel), ParseNumber(get("noise"), "noise"), std::move(inputs),
                        targets);
}

}  // namespace acqregret
