#include "echolab/decay.hpp"

#include <cmath>
#include <string>

#include "echolab/error.hpp"

namespace echolab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw InvalidArgument("fit_line: length mismatch");
  const std::size_t n = x.size();
  if (n < 2) throw InsufficientData("line fit needs at least 2 points");

  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) throw InsufficientData("line fit abscissae are all equal");

  LineFit out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (out.intercept + out.slope * x[i]);
    ss += r * r;
  }
  out.rms_residual = std::sqrt(ss / n);
  out.slope_stderr = n > 2 ? std::sqrt(ss / (n - 2) / sxx) : 0.0;
  return out;
}

RateFit fit_decay_rate(const DecaySeries& series, FitWindow window) {
  std::vector<double> t, y;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double ti = series.times[i];
    if (ti < window.t_min - 1e-9 || ti > window.t_max + 1e-9) continue;
    const double v = series.values[i];
    if (!(v > 0.0)) {
      throw FitDomainError("non-positive value " + std::to_string(v) + " at t=" + std::to_string(ti) +
                           " inside fit window");
    }
    t.push_back(ti);
    y.push_back(-std::log(v));
  }
  if (t.size() < 3) {
    throw InsufficientData("fit window [" + std::to_string(window.t_min) + ", " +
                           std::to_string(window.t_max) + "] holds " + std::to_string(t.size()) +
                           " points, need 3");
  }
  const LineFit line = fit_line(t, y);
  RateFit fit;
  fit.rate = line.slope + 0.0;  // avoid printing -0 for flat series
  fit.rate_stderr = line.slope_stderr;
  fit.intercept = -line.intercept;
  fit.residual = line.rms_residual;
  fit.window = window;
  fit.points = t.size();
  return fit;
}

double window_mean(const DecaySeries& series, FitWindow window) {
  double s = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series.times[i] < window.t_min - 1e-9 || series.times[i] > window.t_max + 1e-9) continue;
    s += series.values[i];
    ++n;
  }
  if (n == 0) throw InsufficientData("empty averaging window");
  return s / n;
}

}  // namespace echolab
