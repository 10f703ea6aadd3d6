#pragma once

#include <optional>
#include <span>
#include <vector>

namespace echolab {

struct FitWindow {
  double t_min = 2.0;
  double t_max = 8.0;
};

/// Exponential fit value ~ A exp(-rate t) over a window.
struct RateFit {
  double rate = 0.0;
  double rate_stderr = 0.0;
  double intercept = 0.0;  // fitted ln A
  double residual = 0.0;   // RMS of ln-residuals
  FitWindow window;
  std::size_t points = 0;
};

/// Time-indexed record of a decaying quantity. `stderr` is empty when the
/// series is exact (deterministic), otherwise one entry per time.
struct DecaySeries {
  std::vector<double> times;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::optional<RateFit> fit;

  std::size_t size() const { return times.size(); }
};

/// Least-squares line y = a + b x.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
  double rms_residual = 0.0;
};

/// Throws InsufficientData for fewer than 2 points or degenerate abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of -ln(value) vs t over the window. Throws InsufficientData if the
/// window holds fewer than 3 points and FitDomainError if any value there is
/// not positive.
RateFit fit_decay_rate(const DecaySeries& series, FitWindow window);

/// Mean of the values with times in [t_min, t_max]; used for saturation
/// plateaus. Throws InsufficientData on an empty window.
double window_mean(const DecaySeries& series, FitWindow window);

}  // namespace echolab
