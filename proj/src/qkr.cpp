#include "echolab/qkr.hpp"

#include <cmath>

#include "echolab/error.hpp"
#include "echolab/parallel.hpp"

namespace echolab {

namespace {

// Plain conj(a).b with four partial sums; used for the K^2 cross overlaps
// where compensated summation is not required.
cplx fast_dot(std::span<const cplx> a, std::span<const cplx> b) {
  double re[4] = {0, 0, 0, 0}, im[4] = {0, 0, 0, 0};
  const std::size_t n = a.size();
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    for (int u = 0; u < 4; ++u) {
      const cplx x = a[j + u], y = b[j + u];
      re[u] += x.real() * y.real() + x.imag() * y.imag();
      im[u] += x.real() * y.imag() - x.imag() * y.real();
    }
  }
  for (; j < n; ++j) {
    re[0] += a[j].real() * b[j].real() + a[j].imag() * b[j].imag();
    im[0] += a[j].real() * b[j].imag() - a[j].imag() * b[j].real();
  }
  return {(re[0] + re[1]) + (re[2] + re[3]), (im[0] + im[1]) + (im[2] + im[3])};
}

double kinetic_factor(const RotorParams& p, Branch b) {
  if (p.symmetric) return b == Branch::perturbed ? 1.0 + 0.5 * p.epsilon : 1.0 - 0.5 * p.epsilon;
  return b == Branch::perturbed ? 1.0 + p.epsilon : 1.0;
}

DecaySeries as_series(const std::vector<double>& v) {
  DecaySeries s;
  s.values = v;
  s.times.resize(v.size());
  for (std::size_t t = 0; t < v.size(); ++t) s.times[t] = static_cast<double>(t);
  return s;
}

}  // namespace

FloquetPropagator::FloquetPropagator(const TorusGrid& grid, const RotorParams& params)
    : grid_(grid), params_(params), fft_(grid.size()) {
  const std::size_t n = grid.size();
  const double hbar = grid.hbar();
  const double inv_n = 1.0 / static_cast<double>(n);
  kick_phase_.resize(n);
  drift_unperturbed_.resize(n);
  drift_perturbed_.resize(n);
  const double c0 = kinetic_factor(params, Branch::unperturbed);
  const double c1 = kinetic_factor(params, Branch::perturbed);
  for (std::size_t j = 0; j < n; ++j) {
    kick_phase_[j] = std::polar(1.0, -params.kick * std::cos(grid.theta(j)) / hbar);
    // p^2/(2 hbar) = m^2 hbar / 2 keeps the argument exact in m.
    const double m = static_cast<double>(grid.momentum_index(j));
    const double free_phase = 0.5 * m * m * hbar;
    drift_unperturbed_[j] = std::polar(inv_n, -c0 * free_phase);
    drift_perturbed_[j] = std::polar(inv_n, -c1 * free_phase);
  }
}

void FloquetPropagator::step(std::span<cplx> psi, Branch branch) const {
  if (psi.size() != grid_.size()) throw DimensionMismatch("state does not match propagator grid");
  const auto& drift = branch == Branch::perturbed ? drift_perturbed_ : drift_unperturbed_;
  const std::size_t n = psi.size();
  if (params_.order == KickOrder::kick_drift) {
    for (std::size_t j = 0; j < n; ++j) psi[j] *= kick_phase_[j];
  }
  fft_.forward(psi);
  for (std::size_t k = 0; k < n; ++k) psi[k] *= drift[k];
  fft_.backward(psi);
  if (params_.order == KickOrder::drift_kick) {
    for (std::size_t j = 0; j < n; ++j) psi[j] *= kick_phase_[j];
  }
}

QuantumState floquet_step(const QuantumState& state, const RotorParams& params, bool perturbed) {
  FloquetPropagator prop(state.grid(), params);
  QuantumState out = state;
  prop.step(out, perturbed ? Branch::perturbed : Branch::unperturbed);
  return out;
}

std::vector<cplx> fidelity_amplitude(const QuantumState& packet, int T, const RotorParams& params) {
  if (T < 0) throw InvalidArgument("number of kicks must be non-negative");
  FloquetPropagator prop(packet.grid(), params);
  QuantumState a = packet, b = packet;
  std::vector<cplx> f(static_cast<std::size_t>(T) + 1);
  f[0] = overlap(a, b);
  for (int t = 1; t <= T; ++t) {
    prop.step(a, Branch::unperturbed);
    prop.step(b, Branch::perturbed);
    f[static_cast<std::size_t>(t)] = overlap(a, b);
  }
  return f;
}

DecaySeries EchoRecord::coherent_series() const { return as_series(coherent); }
DecaySeries EchoRecord::incoherent_series() const { return as_series(incoherent); }
DecaySeries EchoRecord::peres_series() const { return as_series(peres); }

std::vector<double> EchoRecord::fluctuation() const {
  std::vector<double> out(coherent.size());
  for (std::size_t t = 0; t < out.size(); ++t) {
    CompensatedSum<cplx> mean;
    for (std::size_t k = 0; k < amplitudes.size(); ++k) mean.add(weights[k] * amplitudes[k][t]);
    const cplx fbar = mean.value();
    CompensatedSum<double> s;
    for (std::size_t k = 0; k < amplitudes.size(); ++k) s.add(weights[k] * std::norm(amplitudes[k][t] - fbar));
    out[t] = s.value();
  }
  return out;
}

EchoRecord mixture_echo(const PacketMixture& mixture, int T, const RotorParams& params, EchoOptions options) {
  if (T < 0) throw InvalidArgument("number of kicks must be non-negative");
  const TorusGrid& grid = mixture.grid();
  const std::size_t count = mixture.size();
  const std::size_t steps = static_cast<std::size_t>(T) + 1;
  FloquetPropagator prop(grid, params);

  std::vector<QuantumState> unperturbed, perturbed;
  unperturbed.reserve(count);
  EchoRecord rec;
  rec.weights.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const auto& m = mixture.members()[k];
    unperturbed.push_back(gaussian_packet(grid, m.center.theta, m.center.p));
    rec.weights[k] = m.weight;
  }
  perturbed = unperturbed;
  rec.amplitudes.assign(count, std::vector<cplx>(steps));
  rec.coherent.resize(steps);
  rec.incoherent.resize(steps);
  if (options.peres) rec.peres.resize(steps);

  // sum_{k,k'} p_k p_k' |<a_k|b_k'>|^2 with rows reduced in index order.
  auto cross_weight = [&](const std::vector<QuantumState>& a, const std::vector<QuantumState>& b) {
    std::vector<double> rows(count);
    parallel_for(count, [&](std::size_t k) {
      double row = 0.0;
      for (std::size_t kp = 0; kp < count; ++kp) {
        row += rec.weights[kp] * std::norm(fast_dot(a[k].amplitudes(), b[kp].amplitudes()));
      }
      rows[k] = rec.weights[k] * row;
    });
    CompensatedSum<double> total;
    for (double r : rows) total.add(r);
    return total.value();
  };
  const double purity = options.peres ? cross_weight(unperturbed, unperturbed) : 1.0;

  auto record = [&](std::size_t t) {
    parallel_for(count, [&](std::size_t k) { rec.amplitudes[k][t] = overlap(unperturbed[k], perturbed[k]); });
    CompensatedSum<cplx> amp;
    CompensatedSum<double> incoh;
    for (std::size_t k = 0; k < count; ++k) {
      const cplx f = rec.amplitudes[k][t];
      amp.add(rec.weights[k] * f);
      incoh.add(rec.weights[k] * std::norm(f));
    }
    rec.coherent[t] = std::norm(amp.value());
    rec.incoherent[t] = incoh.value();
    if (options.peres) rec.peres[t] = cross_weight(perturbed, unperturbed) / purity;
  };

  record(0);
  for (std::size_t t = 1; t < steps; ++t) {
    parallel_for(count, [&](std::size_t k) {
      prop.step(unperturbed[k], Branch::unperturbed);
      prop.step(perturbed[k], Branch::perturbed);
    });
    record(t);
  }
  return rec;
}

}  // namespace echolab
