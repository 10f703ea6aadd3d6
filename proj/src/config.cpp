#include "echolab/config.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "echolab/error.hpp"

namespace echolab {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"experiment", {"kind", "T", "seed", "threads"}},
      {"rotor", {"N", "K", "sigma", "epsilon", "symmetric", "order", "members", "region", "peres"}},
      {"classical", {"trajectories", "gamma", "lyapunov_trajectories", "lyapunov_steps"}},
      {"fit", {"t_min", "t_max", "input"}},
      {"saturation", {"t_min", "t_max"}},
      {"oscillator",
       {"omega0", "drive", "g0", "amplitudes", "phases", "pulse_width", "dt", "alpha_c", "weight", "delta", "i0",
        "width", "temperature", "tolerance", "hbar", "samples", "sigma", "epsilon", "ivr_samples", "chi2_t_min",
        "chi2_t_max", "early_T"}},
      {"glauber",
       {"weight", "delta", "i0", "width", "temperature", "omega0", "hbar", "n_max", "anharmonic", "tolerance",
        "table", "write_table"}},
      {"output", {"gnuplot"}},
  };
  return s;
}

const std::set<std::string>& kinds() {
  static const std::set<std::string> k = {"rotor-echo", "rotor-classical", "osc-correlation",
                                          "osc-fgr",    "osc-ivr",         "glauber-populations"};
  return k;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError(field, "expected a number, got '" + text + "'");
  }
  return v;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError("", std::string("syntax error: ") + e.message() + " at line " + std::to_string(e.line()));
  }
  ExperimentConfig cfg;
  for (const auto& [name, section] : tree) {
    const auto it = schema().find(name);
    if (section.empty() && !section.data().empty()) throw ConfigError(name, "key outside of any section");
    if (it == schema().end()) throw ConfigError(name, "unknown section");
    Section entries;
    for (const auto& [key, value] : section) {
      if (!it->second.count(key)) throw ConfigError(name + "." + key, "unknown key");
      entries.emplace_back(key, value.data());
    }
    cfg.sections_.emplace_back(name, std::move(entries));
  }
  if (!cfg.has("experiment", "kind")) throw ConfigError("experiment.kind", "missing");
  if (!kinds().count(cfg.kind())) throw ConfigError("experiment.kind", "unknown experiment '" + cfg.kind() + "'");
  return cfg;
}

ExperimentConfig ExperimentConfig::parse_string(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ExperimentConfig ExperimentConfig::load(const std::string& source) {
  const std::string prefix = "preset:";
  if (source.rfind(prefix, 0) == 0) {
    const std::string name = source.substr(prefix.size());
    for (const auto& p : presets()) {
      if (p.name == name) return parse_string(p.ini);
    }
    throw ConfigError("", "unknown preset '" + name + "'");
  }
  std::ifstream in(source);
  if (!in) throw ConfigError("", "cannot open config file '" + source + "'");
  return parse(in);
}

const std::string* ExperimentConfig::find(const std::string& section, const std::string& key) const {
  for (const auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (const auto& [k, v] : entries) {
      if (k == key) return &v;
    }
  }
  return nullptr;
}

bool ExperimentConfig::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string ExperimentConfig::string(const std::string& section, const std::string& key,
                                     std::optional<std::string> fallback) const {
  if (const auto* v = find(section, key)) return trim(*v);
  if (fallback) return *fallback;
  throw ConfigError(section + "." + key, "missing");
}

double ExperimentConfig::number(const std::string& section, const std::string& key,
                                std::optional<double> fallback) const {
  if (const auto* v = find(section, key)) return parse_double(section + "." + key, *v);
  if (fallback) return *fallback;
  throw ConfigError(section + "." + key, "missing");
}

long ExperimentConfig::integer(const std::string& section, const std::string& key,
                               std::optional<long> fallback) const {
  const std::string field = section + "." + key;
  if (const auto* v = find(section, key)) {
    const std::string t = trim(*v);
    long out = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), out);
    if (ec != std::errc() || ptr != t.data() + t.size()) throw ConfigError(field, "expected an integer, got '" + *v + "'");
    return out;
  }
  if (fallback) return *fallback;
  throw ConfigError(field, "missing");
}

bool ExperimentConfig::flag(const std::string& section, const std::string& key, std::optional<bool> fallback) const {
  if (const auto* v = find(section, key)) {
    std::string t = trim(*v);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "on" || t == "true" || t == "yes" || t == "1") return true;
    if (t == "off" || t == "false" || t == "no" || t == "0") return false;
    throw ConfigError(section + "." + key, "expected on/off, got '" + *v + "'");
  }
  if (fallback) return *fallback;
  throw ConfigError(section + "." + key, "missing");
}

std::vector<double> ExperimentConfig::list(const std::string& section, const std::string& key,
                                           std::optional<std::vector<double>> fallback) const {
  const std::string field = section + "." + key;
  if (const auto* v = find(section, key)) {
    std::vector<double> out;
    std::stringstream ss(*v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_double(field, item));
    if (out.empty()) throw ConfigError(field, "empty list");
    return out;
  }
  if (fallback) return *fallback;
  throw ConfigError(field, "missing");
}

void ExperimentConfig::set(const std::string& section, const std::string& key, const std::string& value) {
  const auto sit = schema().find(section);
  if (sit == schema().end() || !sit->second.count(key)) throw ConfigError(section + "." + key, "unknown key");
  for (auto& [name, entries] : sections_) {
    if (name != section) continue;
    for (auto& [k, v] : entries) {
      if (k == key) {
        v = value;
        return;
      }
    }
    entries.emplace_back(key, value);
    return;
  }
  sections_.emplace_back(section, Section{{key, value}});
}

nlohmann::ordered_json ExperimentConfig::echo() const {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, entries] : sections_) {
    nlohmann::ordered_json sec = nlohmann::ordered_json::object();
    for (const auto& [k, v] : entries) sec[k] = v;
    out[name] = std::move(sec);
  }
  return out;
}

std::string ExperimentConfig::to_ini() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, entries] : sections_) {
    if (!first) out << '\n';
    first = false;
    out << '[' << name << "]\n";
    for (const auto& [k, v] : entries) out << k << " = " << v << '\n';
  }
  return out.str();
}

const std::vector<Preset>& presets() {
  static const std::vector<Preset> list = [] {
    auto rotor = [](const std::string& n) {
      return "[experiment]\nkind = rotor-echo\nT = 14\nseed = 1\n\n"
             "[rotor]\nN = " +
             n +
             "\nK = 10\nsigma = 1.1\norder = drift-kick\nmembers = 64\nregion = 0.2,0.3,0.3,0.4\n\n"
             "[classical]\ntrajectories = 100000\ngamma = 2\n\n"
             "[fit]\nt_min = 2\nt_max = 8\n";
    };
    const std::string osc_common =
        "[oscillator]\nomega0 = 1\ndrive = kicked\ng0 = 1\nalpha_c = 0,0\nweight = gaussian\ndelta = 0.05\n";
    return std::vector<Preset>{
        {"fig1-coarse", "kicked rotor echo, K=10, eps/hbar=1.1, N=2^11", rotor("2048")},
        {"fig1-mid", "kicked rotor echo, K=10, eps/hbar=1.1, N=2^13", rotor("8192")},
        {"fig1-fine", "kicked rotor echo, K=10, eps/hbar=1.1, N=2^15 (slow)", rotor("32768")},
        {"null", "unperturbed echo, all fidelities stay at one",
         "[experiment]\nkind = rotor-echo\nT = 50\nseed = 1\n\n"
         "[rotor]\nN = 2048\nK = 10\nsigma = 0\nmembers = 64\n\n[fit]\nt_min = 2\nt_max = 8\n"},
        {"saturation", "long rotor run at N=2^11 with plateau estimates",
         "[experiment]\nkind = rotor-echo\nT = 30\nseed = 1\n\n"
         "[rotor]\nN = 2048\nK = 10\nsigma = 1.1\nmembers = 64\nperes = off\n\n"
         "[fit]\nt_min = 2\nt_max = 8\n\n[saturation]\nt_min = 15\nt_max = 30\n"},
        {"rotor-classical", "classical angular correlation and Lyapunov exponent, K=10",
         "[experiment]\nkind = rotor-classical\nT = 14\nseed = 1\n\n[rotor]\nK = 10\n\n"
         "[classical]\ntrajectories = 100000\ngamma = 2\nlyapunov_trajectories = 200\nlyapunov_steps = 2000\n\n"
         "[fit]\nt_min = 1\nt_max = 6\n"},
        {"osc-correlation", "phase autocorrelation, action diffusion and chi2 of the kicked oscillator",
         "[experiment]\nkind = osc-correlation\nT = 20\nseed = 1\n\n" + osc_common +
             "samples = 10000\n\n[fit]\nt_min = 1\nt_max = 5\n"},
        {"osc-fgr", "classical mixed fidelity at several sigma against the golden-rule curve",
         "[experiment]\nkind = osc-fgr\nT = 30\nseed = 1\n\n" + osc_common +
             "samples = 10000\nsigma = 0.05,2,4\nchi2_t_min = 10\nchi2_t_max = 30\n\n[fit]\nt_min = 1\nt_max = 5\n"},
        {"osc-ivr", "semiclassical fidelity amplitude and early-time law",
         "[experiment]\nkind = osc-ivr\nT = 10\nseed = 1\n\n"
         "[oscillator]\nomega0 = 1\ndrive = kicked\ng0 = 1\nalpha_c = 1,0\nhbar = 0.01\nsigma = 1\n"
         "ivr_samples = 4000\nepsilon = 0.01\nearly_T = 6\n"},
        {"glauber-thermal", "number-state populations of the anharmonic thermal mixture",
         "[experiment]\nkind = glauber-populations\n\n"
         "[glauber]\nweight = thermal\ntemperature = 1\nomega0 = 1\nhbar = 0.1\ntolerance = 1e-3\n"},
        {"glauber-ring", "number-state populations of a narrow ring weight",
         "[experiment]\nkind = glauber-populations\n\n"
         "[glauber]\nweight = ring\ni0 = 0.4\nwidth = 4e-7\nhbar = 0.1\nn_max = 40\n"},
    };
  }();
  return list;
}

}  // namespace echolab
