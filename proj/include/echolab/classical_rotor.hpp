#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "echolab/decay.hpp"
#include "echolab/hilbert.hpp"
#include "echolab/qkr.hpp"

namespace echolab {

/// Standard map on the torus: p' = p + K sin(theta) wrapped into [-pi, pi),
/// theta' = theta + p' wrapped into [0, 2pi).
PhasePoint standard_map_step(PhasePoint point, double kick);

struct LyapunovEstimate {
  double exponent = 0.0;
  double standard_error = 0.0;  // across trajectories
  bool chaotic = false; // exponent above 0.01
};

/// Mean tangent-vector growth rate per step over `n_traj` random initial
/// points, renormalizing the tangent vector every 10 steps. Throws
/// InvalidArgument for T < 100 or n_traj == 0.
LyapunovEstimate lyapunov_exponent(double kick, std::size_t n_traj, std::size_t T, std::uint64_t seed);

/// Points on the torus, always kept inside the fundamental domain.
class ClassicalEnsemble {
 public:
  explicit ClassicalEnsemble(std::vector<PhasePoint> points, std::uint64_t seed = 0);
  static ClassicalEnsemble uniform(const Region& region, std::size_t n, std::uint64_t seed);

  const std::vector<PhasePoint>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  std::uint64_t seed() const { return seed_; }

 private:
  std::vector<PhasePoint> points_;
  std::uint64_t seed_;
};

/// C(t) = |<exp(i gamma [theta(t) - theta(0)])>|^2 over the ensemble, with
/// the angle lifted (accumulated without wrapping). `order` picks the
/// stroboscopic phase so the curve can be laid against a quantum echo run with
/// the same convention. stderr holds the delta-method error of C.
DecaySeries angular_correlation(const ClassicalEnsemble& ensemble, double gamma, double kick, int T,
                                KickOrder order = KickOrder::drift_kick);

}  // namespace echolab
