#include <doctest.h>

#include <cmath>

#include "echolab/error.hpp"
#include "echolab/hilbert.hpp"

using namespace echolab;

TEST_CASE("grid spacing and momentum slots") {
  const auto g = TorusGrid::make(8);
  CHECK(g.hbar() == doctest::Approx(kTwoPi / 8));
  CHECK(g.theta(2) == doctest::Approx(kPi / 2));
  CHECK(g.momentum_index(0) == 0);
  CHECK(g.momentum_index(3) == 3);
  CHECK(g.momentum_index(4) == -4);
  CHECK(g.momentum_index(7) == -1);
  CHECK(TorusGrid::make(2048).hbar() == doctest::Approx(3.0679615757712823e-3));
  CHECK_THROWS_AS(TorusGrid::make(1), InvalidDimension);
  CHECK_THROWS_AS(TorusGrid::make(0), InvalidDimension);
}

TEST_CASE("packet is normalized with unit self-overlap") {
  const auto g = TorusGrid::make(1024);
  const auto psi = gaussian_packet(g, 1.3, -0.7);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-13));
  const cplx s = overlap(psi, psi);
  CHECK(std::abs(s - cplx(1.0)) < 1e-13);
}

TEST_CASE("well separated packets are orthogonal") {
  const auto g = TorusGrid::make(1024);
  const auto a = gaussian_packet(g, 1.0, 0.0);
  const auto b = gaussian_packet(g, 1.0 + kPi, 0.0);
  const auto c = gaussian_packet(g, 1.0, 2.0);
  CHECK(std::abs(overlap(a, b)) < 1e-6);
  CHECK(std::abs(overlap(a, c)) < 1e-6);
}

TEST_CASE("packet at the seam is periodized") {
  const auto g = TorusGrid::make(256);
  const auto psi = gaussian_packet(g, 0.0, 0.0);
  // Mirror symmetry around theta = 0 on the lattice.
  for (std::size_t j = 1; j < 20; ++j) CHECK(std::abs(psi[j] - psi[g.size() - j]) < 1e-14);
  const auto wrapped = gaussian_packet(g, kTwoPi, 0.0);
  CHECK(std::abs(overlap(psi, wrapped)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("packet widths are minimum uncertainty") {
  // Oracle: <(theta - theta0)^2> of |psi|^2 against hbar / 2.
  const auto g = TorusGrid::make(4096);
  const double theta0 = 2.0;
  const auto psi = gaussian_packet(g, theta0, 0.5);
  double m2 = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.theta(j) - theta0;
    m2 += x * x * std::norm(psi[j]);
  }
  CHECK(m2 == doctest::Approx(g.hbar() / 2).epsilon(1e-6));
}

TEST_CASE("momentum eigenstate is normalized") {
  const auto g = TorusGrid::make(64);
  const auto a = QuantumState::momentum_eigenstate(g, 3);
  const auto b = QuantumState::momentum_eigenstate(g, -5);
  CHECK(a.norm() == doctest::Approx(1.0));
  CHECK(std::abs(overlap(a, b)) < 1e-13);
}

TEST_CASE("state construction and overlap validate dimensions") {
  const auto g = TorusGrid::make(16);
  CHECK_THROWS_AS(QuantumState(g, std::vector<cplx>(15)), DimensionMismatch);
  QuantumState zero(g);
  CHECK_THROWS_AS(zero.normalize(), NumericalError);
  const auto a = gaussian_packet(g, 0, 0);
  const auto b = gaussian_packet(TorusGrid::make(32), 0, 0);
  CHECK_THROWS_AS(overlap(a, b), DimensionMismatch);
}

TEST_CASE("cell counts of the default region") {
  const Region r;
  CHECK(cell_count(TorusGrid::make(8192), r) == 82);
  CHECK(cell_count(TorusGrid::make(2048), r) == 20);
}

TEST_CASE("region validation") {
  CHECK_NOTHROW(Region{}.validate());
  CHECK_THROWS_AS((Region{0.3, 0.2, 0.3, 0.4}.validate()), InvalidRegion);
  CHECK_THROWS_AS((Region{0.2, 0.3, 0.4, 0.4}.validate()), InvalidRegion);
  CHECK_THROWS_AS((Region{0.2, 1.3, 0.3, 0.4}.validate()), InvalidRegion);
  CHECK_THROWS_AS((Region{0.2, 0.3, 0.3, 0.6}.validate()), InvalidRegion);
}

TEST_CASE("uniform mixture is seeded and stays in the region") {
  const auto g = TorusGrid::make(2048);
  const Region r;
  const auto a = uniform_mixture(g, r, 50, 7);
  const auto b = uniform_mixture(g, r, 50, 7);
  const auto c = uniform_mixture(g, r, 50, 8);
  REQUIRE(a.size() == 50);
  double wsum = 0.0;
  bool differs = false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto& m = a.members()[k];
    CHECK(m.center.theta == b.members()[k].center.theta);
    CHECK(m.center.p == b.members()[k].center.p);
    differs = differs || m.center.theta != c.members()[k].center.theta;
    CHECK(m.center.theta / kTwoPi >= r.theta_lo);
    CHECK(m.center.theta / kTwoPi <= r.theta_hi);
    CHECK(m.center.p / kTwoPi >= r.p_lo);
    CHECK(m.center.p / kTwoPi <= r.p_hi);
    wsum += m.weight;
  }
  CHECK(differs);
  CHECK(wsum == doctest::Approx(1.0));
  CHECK(a.cell_count() == 20);
  CHECK_THROWS_AS(uniform_mixture(g, r, 0, 1), InvalidArgument);
}

TEST_CASE("wrapping") {
  CHECK(wrap_angle(-0.5) == doctest::Approx(kTwoPi - 0.5));
  CHECK(wrap_angle(kTwoPi) == doctest::Approx(0.0));
  CHECK(wrap_momentum(kPi) == doctest::Approx(-kPi));
  CHECK(wrap_momentum(-kPi - 0.1) == doctest::Approx(kPi - 0.1));
  CHECK(wrap_momentum(0.3) == doctest::Approx(0.3));
}
