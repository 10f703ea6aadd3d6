#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>

#include "echolab/error.hpp"
#include "echolab/parallel.hpp"
#include "echolab/qkr.hpp"

using namespace echolab;

namespace {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

// Dense Floquet matrix built from momentum eigenvectors, no FFT involved.
Mat dense_floquet(std::size_t n, double kick, double factor, KickOrder order) {
  const double hbar = kTwoPi / static_cast<double>(n);
  const long half = static_cast<long>(n) / 2;
  Mat drift = Mat::Zero(n, n);
  for (long m = -half; m < static_cast<long>(n) - half; ++m) {
    Vec e(n);
    for (std::size_t j = 0; j < n; ++j) {
      e[j] = std::polar(1.0 / std::sqrt(double(n)), double(m) * kTwoPi * double(j) / double(n));
    }
    drift += std::polar(1.0, -factor * hbar * double(m * m) / 2.0) * e * e.adjoint();
  }
  Mat kick_m = Mat::Zero(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    kick_m(j, j) = std::polar(1.0, -kick * std::cos(kTwoPi * double(j) / double(n)) / hbar);
  }
  return order == KickOrder::drift_kick ? Mat(kick_m * drift) : Mat(drift * kick_m);
}

Vec to_vec(const QuantumState& s) {
  Vec v(s.size());
  for (std::size_t j = 0; j < s.size(); ++j) v[j] = s[j];
  return v;
}

QuantumState random_state(const TorusGrid& g, unsigned seed) {
  std::vector<cplx> a(g.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double x = std::sin(1.7 * j + seed), y = std::cos(0.3 * j * j + 2.0 * seed);
    a[j] = {x, y};
  }
  QuantumState s(g, a);
  s.normalize();
  return s;
}

}  // namespace

TEST_CASE("split-operator step matches the dense propagator") {
  for (std::size_t n : {4u, 8u, 16u}) {
    for (double kick : {0.0, 1.0, 5.0}) {
      for (auto order : {KickOrder::drift_kick, KickOrder::kick_drift}) {
        const auto g = TorusGrid::make(n);
        RotorParams p;
        p.kick = kick;
        p.epsilon = 0.3;
        p.order = order;
        const auto psi = random_state(g, static_cast<unsigned>(n + 10 * kick));
        for (bool perturbed : {false, true}) {
          const Vec expected = dense_floquet(n, kick, perturbed ? 1.3 : 1.0, order) * to_vec(psi);
          const Vec got = to_vec(floquet_step(psi, p, perturbed));
          CHECK((got - expected).norm() < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("symmetric split uses 1 -+ eps/2") {
  const auto g = TorusGrid::make(8);
  RotorParams p;
  p.kick = 2.0;
  p.epsilon = 0.4;
  p.symmetric = true;
  const auto psi = random_state(g, 4);
  CHECK((to_vec(floquet_step(psi, p, false)) - dense_floquet(8, 2.0, 0.8, p.order) * to_vec(psi)).norm() < 1e-10);
  CHECK((to_vec(floquet_step(psi, p, true)) - dense_floquet(8, 2.0, 1.2, p.order) * to_vec(psi)).norm() < 1e-10);
}

TEST_CASE("fidelity amplitude matches dense matrix powers") {
  const std::size_t n = 64;
  const auto g = TorusGrid::make(n);
  auto p = RotorParams::from_sigma(g, 3.0, 1.1);
  const auto psi = gaussian_packet(g, 1.2, 0.9);
  const auto f = fidelity_amplitude(psi, 12, p);
  const Mat u0 = dense_floquet(n, 3.0, 1.0, p.order);
  const Mat u1 = dense_floquet(n, 3.0, 1.0 + p.epsilon, p.order);
  Vec a = to_vec(psi), b = a;
  CHECK(std::abs(f[0] - cplx(1.0)) < 1e-12);
  for (int t = 1; t <= 12; ++t) {
    a = u0 * a;
    b = u1 * b;
    CHECK(std::abs(f[t] - a.dot(b)) < 1e-8);
  }
}

TEST_CASE("propagation is unitary") {
  const auto g = TorusGrid::make(1024);
  RotorParams p;
  p.epsilon = 0.01;
  FloquetPropagator prop(g, p);
  auto psi = gaussian_packet(g, 2.0, 1.0);
  for (int t = 0; t < 50; ++t) prop.step(psi, Branch::perturbed);
  CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero perturbation keeps unit fidelity") {
  const auto g = TorusGrid::make(512);
  RotorParams p;
  const auto f = fidelity_amplitude(gaussian_packet(g, 1.0, 1.0), 20, p);
  for (const auto& v : f) CHECK(std::abs(v - cplx(1.0)) < 1e-12);
}

TEST_CASE("momentum eigenstate picks up the kinetic phase") {
  const auto g = TorusGrid::make(128);
  RotorParams p;
  p.kick = 0.0;
  p.epsilon = 0.05;
  const long m = 7;
  const auto f = fidelity_amplitude(QuantumState::momentum_eigenstate(g, m), 10, p);
  for (int t = 0; t <= 10; ++t) {
    const cplx expected = std::polar(1.0, -p.epsilon * g.hbar() * double(m * m) * t / 2.0);
    CHECK(std::abs(f[t] - expected) < 1e-11);
  }
}

TEST_CASE("mixture fidelities: ordering, identity and dense Peres oracle") {
  const std::size_t n = 32;
  const auto g = TorusGrid::make(n);
  auto p = RotorParams::from_sigma(g, 4.0, 1.0);
  std::vector<MixtureMember> members = {{{1.0, 0.5}, 0.5}, {{1.4, 0.9}, 0.3}, {{2.0, 1.2}, 0.2}};
  const PacketMixture mix(g, members, Region{}, 1);
  const int T = 8;
  const auto rec = mixture_echo(mix, T, p);
  const auto fl = rec.fluctuation();

  const Mat u0 = dense_floquet(n, 4.0, 1.0, p.order);
  const Mat u1 = dense_floquet(n, 4.0, 1.0 + p.epsilon, p.order);
  std::vector<Vec> a, b;
  Mat rho = Mat::Zero(n, n);
  for (const auto& m : members) {
    a.push_back(to_vec(gaussian_packet(g, m.center.theta, m.center.p)));
    rho += m.weight * a.back() * a.back().adjoint();
  }
  b = a;
  const double purity = (rho * rho).trace().real();
  for (int t = 0; t <= T; ++t) {
    if (t > 0) {
      for (auto& v : a) v = u0 * v;
      for (auto& v : b) v = u1 * v;
    }
    Mat r0 = Mat::Zero(n, n), r1 = Mat::Zero(n, n);
    for (std::size_t k = 0; k < members.size(); ++k) {
      r0 += members[k].weight * a[k] * a[k].adjoint();
      r1 += members[k].weight * b[k] * b[k].adjoint();
    }
    CHECK(rec.peres[t] == doctest::Approx((r0 * r1).trace().real() / purity).epsilon(1e-9));
    CHECK(rec.coherent[t] <= rec.incoherent[t] + 1e-14);
    CHECK(rec.incoherent[t] - rec.coherent[t] == doctest::Approx(fl[t]).epsilon(1e-10));
  }
  CHECK(rec.peres[0] == doctest::Approx(1.0));
  CHECK(rec.steps() == T);
}

TEST_CASE("single member collapses the three fidelities") {
  const auto g = TorusGrid::make(256);
  auto p = RotorParams::from_sigma(g, 10.0, 1.1);
  const PacketMixture mix(g, {{{1.5, 2.0}, 1.0}}, Region{}, 1);
  const auto rec = mixture_echo(mix, 10, p);
  for (int t = 0; t <= 10; ++t) {
    CHECK(rec.coherent[t] == doctest::Approx(rec.incoherent[t]).epsilon(1e-12));
    CHECK(rec.peres[t] == doctest::Approx(rec.incoherent[t]).epsilon(1e-9));
  }
}

TEST_CASE("results do not depend on the worker count") {
  const auto g = TorusGrid::make(512);
  auto p = RotorParams::from_sigma(g, 10.0, 1.1);
  const auto mix = uniform_mixture(g, Region{}, 16, 5);
  set_thread_count(1);
  const auto a = mixture_echo(mix, 6, p);
  set_thread_count(4);
  const auto b = mixture_echo(mix, 6, p);
  set_thread_count(0);
  CHECK(a.coherent == b.coherent);
  CHECK(a.incoherent == b.incoherent);
  CHECK(a.peres == b.peres);
}

TEST_CASE("peres can be skipped") {
  const auto g = TorusGrid::make(128);
  const auto rec = mixture_echo(uniform_mixture(g, Region{}, 4, 1), 3, RotorParams{}, EchoOptions{false});
  CHECK(rec.peres.empty());
  CHECK_THROWS_AS(fidelity_amplitude(gaussian_packet(g, 0, 0), -1, RotorParams{}), InvalidArgument);
}

TEST_CASE("coherent fidelity converges with the member count") {
  // A finite sample adds about F-bar / M of incoherent weight to |<f>|^2.
  const auto g = TorusGrid::make(1024);
  const auto p = RotorParams::from_sigma(g, 10.0, 1.1);
  const auto big = mixture_echo(uniform_mixture(g, Region{}, 4096, 1), 3, p, EchoOptions{false});
  for (std::size_t m : {16u, 64u, 256u}) {
    const auto rec = mixture_echo(uniform_mixture(g, Region{}, m, 2), 3, p, EchoOptions{false});
    for (int t = 1; t <= 3; ++t) {
      CAPTURE(m);
      CAPTURE(t);
      CHECK(std::abs(rec.coherent[t] - big.coherent[t]) < 4.0 * big.incoherent[t] / std::sqrt(double(m)));
    }
  }
}
