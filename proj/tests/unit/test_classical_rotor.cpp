#include <doctest.h>

#include <cmath>
#include <random>

#include "echolab/classical_rotor.hpp"
#include "echolab/error.hpp"

using namespace echolab;

namespace {

// Tangent-space growth by explicit Jacobian products, renormalized each step.
double reference_lyapunov(double kick, int n_traj, int steps, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, kTwoPi);
  double total = 0.0;
  for (int k = 0; k < n_traj; ++k) {
    double th = u(rng), p = u(rng) - kPi;
    double v0 = 1.0, v1 = 0.0, sum = 0.0;
    for (int t = 0; t < steps; ++t) {
      const double c = kick * std::cos(th);
      const double dp = c * v0 + v1;  // row (K cos, 1) acting on (dtheta, dp)
      const double dth = v0 + dp;
      p += kick * std::sin(th);
      th += p;
      const double n = std::hypot(dth, dp);
      sum += std::log(n);
      v0 = dth / n;
      v1 = dp / n;
    }
    total += sum / steps;
  }
  return total / n_traj;
}

}  // namespace

TEST_CASE("standard map single steps") {
  const auto a = standard_map_step({1.0, 0.5}, 0.0);
  CHECK(a.p == doctest::Approx(0.5));
  CHECK(a.theta == doctest::Approx(1.5));
  const auto b = standard_map_step({kPi / 2, 0.0}, 1.0);
  CHECK(b.p == doctest::Approx(1.0));
  CHECK(b.theta == doctest::Approx(kPi / 2 + 1.0));
  // Momentum wraps into [-pi, pi) and the angle into [0, 2pi).
  const auto c = standard_map_step({kPi / 2, 3.0}, 1.0);
  CHECK(c.p == doctest::Approx(4.0 - kTwoPi));
  CHECK(c.theta == doctest::Approx(wrap_angle(kPi / 2 + 4.0 - kTwoPi)));
  CHECK(c.p >= -kPi);
  CHECK(c.p < kPi);
}

TEST_CASE("standard map preserves area") {
  const double h = 1e-6;
  for (double kick : {0.5, 3.0, 10.0}) {
    const PhasePoint x{2.0, 0.3};
    const auto f = standard_map_step(x, kick);
    const auto ft = standard_map_step({x.theta + h, x.p}, kick);
    const auto fp = standard_map_step({x.theta, x.p + h}, kick);
    const double j11 = (ft.theta - f.theta) / h, j21 = (ft.p - f.p) / h;
    const double j12 = (fp.theta - f.theta) / h, j22 = (fp.p - f.p) / h;
    CHECK(j11 * j22 - j12 * j21 == doctest::Approx(1.0).epsilon(1e-6));
  }
}

TEST_CASE("lyapunov exponent against an explicit tangent map") {
  const auto est = lyapunov_exponent(10.0, 200, 2000, 11);
  const double ref = reference_lyapunov(10.0, 200, 2000, 99);
  CHECK(est.chaotic);
  CHECK(est.exponent == doctest::Approx(ref).epsilon(0.05));
  CHECK(est.standard_error > 0.0);
  const auto strong = lyapunov_exponent(100.0, 100, 2000, 3);
  CHECK(strong.exponent == doctest::Approx(reference_lyapunov(100.0, 100, 2000, 5)).epsilon(0.03));
  CHECK(strong.exponent == doctest::Approx(std::log(50.0)).epsilon(0.03));
}

TEST_CASE("integrable map has vanishing exponent") {
  const auto est = lyapunov_exponent(0.0, 20, 20000, 1);
  CHECK(std::abs(est.exponent) < 1e-3);
  CHECK_FALSE(est.chaotic);
}

TEST_CASE("lyapunov estimates agree across seeds") {
  const auto a = lyapunov_exponent(10.0, 200, 1000, 1);
  const auto b = lyapunov_exponent(10.0, 200, 1000, 2);
  CHECK(std::abs(a.exponent - b.exponent) < 4 * std::hypot(a.standard_error, b.standard_error) + 1e-3);
  CHECK_THROWS_AS(lyapunov_exponent(10.0, 0, 1000, 1), InvalidArgument);
  CHECK_THROWS_AS(lyapunov_exponent(10.0, 10, 99, 1), InvalidArgument);
}

TEST_CASE("free rotation correlation matches direct summation") {
  const auto ens = ClassicalEnsemble::uniform(Region{}, 500, 4);
  const double gamma = 2.0;
  const auto c = angular_correlation(ens, gamma, 0.0, 6);
  for (int t = 0; t <= 6; ++t) {
    cplx s = 0.0;
    for (const auto& pt : ens.points()) s += std::polar(1.0, gamma * pt.p * t);
    CHECK(c.values[t] == doctest::Approx(std::norm(s / 500.0)).epsilon(1e-9));
  }
}

TEST_CASE("zero coupling gives unit correlation") {
  const auto ens = ClassicalEnsemble::uniform(Region{}, 200, 1);
  const auto c = angular_correlation(ens, 0.0, 10.0, 10);
  for (double v : c.values) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("chaotic correlation decays to the 1/n floor") {
  const std::size_t n = 2000;
  const auto ens = ClassicalEnsemble::uniform(Region{}, n, 6);
  const auto c = angular_correlation(ens, 2.0, 10.0, 60);
  CHECK(c.values[0] == doctest::Approx(1.0));
  double plateau = 0.0;
  for (int t = 21; t <= 60; ++t) plateau += c.values[t] / 40.0;
  CHECK(plateau == doctest::Approx(1.0 / n).epsilon(0.4));
  CHECK(c.stderrs.size() == c.values.size());
}

TEST_CASE("ensembles stay in the fundamental domain") {
  const ClassicalEnsemble e({{7.0, 4.0}, {-1.0, -4.0}});
  for (const auto& pt : e.points()) {
    CHECK(pt.theta >= 0.0);
    CHECK(pt.theta < kTwoPi);
    CHECK(pt.p >= -kPi);
    CHECK(pt.p < kPi);
  }
  CHECK_THROWS_AS(angular_correlation(ClassicalEnsemble(std::vector<PhasePoint>{}), 2.0, 10.0, 3), EmptyEnsemble);
}
