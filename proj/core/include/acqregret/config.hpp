#pragma once

#include "acqregret/regret.hpp"

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace acqregret {

/// Flat `key = value` settings. Blank lines and text after '#' are ignored.
class Settings {
 public:
  static Settings Parse(std::istream& in, std::string_view source = "<input>");
  static Settings Load(const std::string& path);

  /// Applies a single `key=value` override.
  void Set(std::string_view assignment);
  void Set(const std::string& key, const std::string& value);
  bool Has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& Get(const std::string& key) const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Every recognized key, in manifest order.
const std::vector<std::string>& SettingKeys();

/// Unknown keys and malformed values raise ConfigError.
ExperimentConfig ExperimentFromSettings(const Settings& settings);

/// Full resolved config, with the library version, in a form that
/// ExperimentFromSettings reads back to the same experiment.
Settings ExperimentToSettings(const ExperimentConfig& cfg);

void WriteSettings(std::ostream& out, const Settings& settings);

}  // namespace acqregret
