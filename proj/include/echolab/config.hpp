#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace echolab {

/// Flat INI-style experiment description: `[section]` headers followed by
/// `key = value` lines. Sections and keys keep their input order, values are
/// kept verbatim so the configuration echoes back unchanged.
class ExperimentConfig {
 public:
  using Section = std::vector<std::pair<std::string, std::string>>;

  /// Throws ConfigError on syntax errors, unknown sections or keys, and a
  /// missing or unknown experiment.kind.
  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig parse_string(const std::string& text);
  /// A file path, or "preset:<name>" for a shipped preset.
  static ExperimentConfig load(const std::string& source);

  std::string kind() const { return string("experiment", "kind"); }

  bool has(const std::string& section, const std::string& key) const;
  std::string string(const std::string& section, const std::string& key,
                     std::optional<std::string> fallback = std::nullopt) const;
  double number(const std::string& section, const std::string& key, std::optional<double> fallback = std::nullopt) const;
  long integer(const std::string& section, const std::string& key, std::optional<long> fallback = std::nullopt) const;
  bool flag(const std::string& section, const std::string& key, std::optional<bool> fallback = std::nullopt) const;
  std::vector<double> list(const std::string& section, const std::string& key,
                           std::optional<std::vector<double>> fallback = std::nullopt) const;

  /// Inserts or replaces a value (used for command-line overrides).
  void set(const std::string& section, const std::string& key, const std::string& value);

  const std::vector<std::pair<std::string, Section>>& sections() const { return sections_; }
  nlohmann::ordered_json echo() const;
  std::string to_ini() const;

 private:
  const std::string* find(const std::string& section, const std::string& key) const;
  std::vector<std::pair<std::string, Section>> sections_;
};

struct Preset {
  std::string name;
  std::string description;
  std::string ini;
};

const std::vector<Preset>& presets();

}  // namespace echolab
