#include "echolab/classical_rotor.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "echolab/error.hpp"
#include "echolab/parallel.hpp"

namespace echolab {

namespace {
constexpr std::size_t kBlock = 1024;
constexpr std::size_t kRenormEvery = 10;
constexpr double kChaosThreshold = 0.01;
}  // namespace

PhasePoint standard_map_step(PhasePoint point, double kick) {
  const double p = wrap_momentum(point.p + kick * std::sin(point.theta));
  return {wrap_angle(point.theta + p), p};
}

LyapunovEstimate lyapunov_exponent(double kick, std::size_t n_traj, std::size_t T, std::uint64_t seed) {
  if (T < 100) throw InvalidArgument("Lyapunov estimate needs T >= 100");
  if (n_traj == 0) throw EmptyEnsemble("Lyapunov estimate needs at least one trajectory");

  struct Start {
    PhasePoint x;
    double angle;
  };
  std::vector<Start> starts(n_traj);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto& s : starts) {
    s.x = {kTwoPi * u(rng), kTwoPi * u(rng) - kPi};
    s.angle = kTwoPi * u(rng);
  }

  std::vector<double> rates(n_traj);
  parallel_for(n_traj, [&](std::size_t i) {
    PhasePoint x = starts[i].x;
    double dth = std::cos(starts[i].angle), dp = std::sin(starts[i].angle);
    double log_growth = 0.0;
    for (std::size_t t = 1; t <= T; ++t) {
      // Tangent map evaluated at the pre-kick angle.
      dp += kick * std::cos(x.theta) * dth;
      dth += dp;
      x = standard_map_step(x, kick);
      if (t % kRenormEvery == 0 || t == T) {
        const double nrm = std::hypot(dth, dp);
        log_growth += std::log(nrm);
        dth /= nrm;
        dp /= nrm;
      }
    }
    rates[i] = log_growth / static_cast<double>(T);
  });

  CompensatedSum<double> sum;
  for (double r : rates) sum.add(r);
  const double mean = sum.value() / static_cast<double>(n_traj);
  double var = 0.0;
  for (double r : rates) var += (r - mean) * (r - mean);
  var = n_traj > 1 ? var / static_cast<double>(n_traj - 1) : 0.0;

  LyapunovEstimate est;
  est.exponent = mean;
  est.standard_error = std::sqrt(var / static_cast<double>(n_traj));
  est.chaotic = mean > kChaosThreshold;
  return est;
}

ClassicalEnsemble::ClassicalEnsemble(std::vector<PhasePoint> points, std::uint64_t seed)
    : points_(std::move(points)), seed_(seed) {
  for (auto& p : points_) p = {wrap_angle(p.theta), wrap_momentum(p.p)};
}

ClassicalEnsemble ClassicalEnsemble::uniform(const Region& region, std::size_t n, std::uint64_t seed) {
  region.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(region.theta_lo, region.theta_hi);
  std::uniform_real_distribution<double> up(region.p_lo, region.p_hi);
  std::vector<PhasePoint> pts(n);
  for (auto& p : pts) {
    const double th = ut(rng);
    p = {kTwoPi * th, kTwoPi * up(rng)};
  }
  return ClassicalEnsemble(std::move(pts), seed);
}

DecaySeries angular_correlation(const ClassicalEnsemble& ensemble, double gamma, double kick, int T,
                                KickOrder order) {
  if (ensemble.size() == 0) throw EmptyEnsemble("angular correlation of an empty ensemble");
  if (T < 0) throw InvalidArgument("number of kicks must be non-negative");
  const std::size_t steps = static_cast<std::size_t>(T) + 1;
  const std::size_t n = ensemble.size();
  const std::size_t blocks = (n + kBlock - 1) / kBlock;

  // Per-block partial sums, reduced in block order so the result does not
  // depend on the worker count.
  std::vector<std::vector<std::complex<double>>> partial(blocks, std::vector<std::complex<double>>(steps));
  parallel_for(blocks, [&](std::size_t b) {
    auto& acc = partial[b];
    const std::size_t lo = b * kBlock, hi = std::min(n, lo + kBlock);
    for (std::size_t i = lo; i < hi; ++i) {
      PhasePoint x = ensemble.points()[i];
      double lifted = 0.0;
      acc[0] += 1.0;
      for (std::size_t t = 1; t < steps; ++t) {
        if (order == KickOrder::kick_drift) {
          x = standard_map_step(x, kick);
          lifted += x.p;
        } else {
          lifted += x.p;
          const double th = x.theta + x.p;
          x = {wrap_angle(th), wrap_momentum(x.p + kick * std::sin(th))};
        }
        acc[t] += std::polar(1.0, gamma * lifted);
      }
    }
  });

  DecaySeries out;
  out.times.resize(steps);
  out.values.resize(steps);
  out.stderrs.resize(steps);
  const double nd = static_cast<double>(n);
  for (std::size_t t = 0; t < steps; ++t) {
    CompensatedSum<std::complex<double>> s;
    for (std::size_t b = 0; b < blocks; ++b) s.add(partial[b][t]);
    const std::complex<double> mean = s.value() / nd;
    const double c = std::norm(mean);
    const double var_mean = std::max(0.0, 1.0 - c) / nd;
    out.times[t] = static_cast<double>(t);
    out.values[t] = c;
    out.stderrs[t] = std::sqrt(2.0 * c * var_mean + var_mean * var_mean);
  }
  return out;
}

}  // namespace echolab
