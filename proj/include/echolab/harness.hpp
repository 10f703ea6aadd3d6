#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "echolab/config.hpp"
#include "echolab/decay.hpp"

namespace echolab {

inline constexpr int kSummarySchemaVersion = 1;
inline constexpr const char* kCodeVersion = "0.1.0";

struct NamedSeries {
  std::string name;  // file stem, e.g. "coherent"
  DecaySeries series;
};

struct ResultBundle {
  std::string kind;
  std::vector<NamedSeries> series;
  nlohmann::ordered_json summary;  // schema_version, experiment, config, results

  const NamedSeries* find(const std::string& name) const;
};

/// Runs the configured experiment. Module errors are rethrown with the
/// experiment name prepended, as InvalidArgument or NumericalError.
ResultBundle run(const ExperimentConfig& config);

/// Writes <name>.csv per series, summary.json and, if requested, plot.gp.
void write_bundle(const ResultBundle& bundle, const std::filesystem::path& dir, bool gnuplot = false);

/// "t,value,stderr" header and one %.12e row per time. Missing stderr is 0.
std::string format_csv(const DecaySeries& series);
DecaySeries read_csv(const std::filesystem::path& path);

/// Fit attached to a series as summary JSON (rate, stderr, intercept, residual, window, points).
nlohmann::ordered_json fit_json(const RateFit& fit);

struct RateReport {
  double quantum_rate = 0.0;
  double quantum_stderr = 0.0;
  double classical_rate = 0.0;
  double classical_stderr = 0.0;
  double ratio = 0.0;  // quantum / classical
  bool follows_classical = false;  // ratio within 20% of one
  double lyapunov = 0.0;           // ln(K/2)
  double quantum_minus_lyapunov = 0.0;
  bool distinct_from_lyapunov = false;  // gap larger than the quantum fit stderr
};

RateReport compare_rates(const RateFit& quantum, const RateFit& classical, double kick);
/// Uses the "coherent" and "classical" series fits of a rotor-echo bundle.
/// Throws Error when either is missing.
RateReport compare_rates(const ResultBundle& bundle);
nlohmann::ordered_json report_json(const RateReport& report);

/// Gnuplot script plotting every series of the bundle on a log scale.
std::string gnuplot_script(const ResultBundle& bundle);

}  // namespace echolab
