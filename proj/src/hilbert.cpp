#include "echolab/hilbert.hpp"

#include <cmath>
#include <random>

#include "echolab/error.hpp"
#include "echolab/parallel.hpp"

namespace echolab {

TorusGrid TorusGrid::make(std::size_t n) {
  if (n < 2) throw InvalidDimension("torus grid needs N >= 2, got " + std::to_string(n));
  return TorusGrid(n, kTwoPi / static_cast<double>(n));
}

long TorusGrid::momentum_index(std::size_t k) const {
  const long n = static_cast<long>(n_);
  const long m = static_cast<long>(k);
  // Slots [0, N/2) carry m >= 0; the rest wrap to negative m. For odd N the
  // split keeps m inside [-N/2, N/2).
  return m < (n + 1) / 2 ? m : m - n;
}

QuantumState::QuantumState(const TorusGrid& grid, std::vector<cplx> amplitudes)
    : grid_(grid), amp_(std::move(amplitudes)) {
  if (amp_.size() != grid_.size()) {
    throw DimensionMismatch("state has " + std::to_string(amp_.size()) + " amplitudes, grid has " +
                            std::to_string(grid_.size()));
  }
}

QuantumState QuantumState::momentum_eigenstate(const TorusGrid& grid, long m) {
  const std::size_t n = grid.size();
  std::vector<cplx> amp(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t j = 0; j < n; ++j) {
    amp[j] = std::polar(scale, static_cast<double>(m) * grid.theta(j));
  }
  return QuantumState(grid, std::move(amp));
}

double QuantumState::norm() const {
  CompensatedSum<double> s;
  for (const auto& a : amp_) s.add(std::norm(a));
  return std::sqrt(s.value());
}

void QuantumState::normalize() {
  const double nrm = norm();
  if (!(nrm > 0.0) || !std::isfinite(nrm)) throw NumericalError("cannot normalize a zero or non-finite state");
  const double inv = 1.0 / nrm;
  for (auto& a : amp_) a *= inv;
}

double wrap_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  if (t >= kTwoPi) t -= kTwoPi;
  return t;
}

double wrap_momentum(double p) { return wrap_angle(p + kPi) - kPi; }

QuantumState gaussian_packet(const TorusGrid& grid, double theta0, double p0) {
  constexpr int kWindings = 3;
  theta0 = wrap_angle(theta0);
  p0 = wrap_momentum(p0);
  const double hbar = grid.hbar();
  const std::size_t n = grid.size();
  std::vector<cplx> amp(n);
  for (std::size_t j = 0; j < n; ++j) {
    cplx acc = 0.0;
    for (int w = -kWindings; w <= kWindings; ++w) {
      const double x = grid.theta(j) - theta0 + kTwoPi * w;
      const double envelope = std::exp(-x * x / (2.0 * hbar));
      if (envelope == 0.0) continue;
      acc += std::polar(envelope, p0 * x / hbar);
    }
    amp[j] = acc;
  }
  QuantumState state(grid, std::move(amp));
  state.normalize();
  return state;
}

cplx overlap(const QuantumState& a, const QuantumState& b) {
  if (!(a.grid() == b.grid())) throw DimensionMismatch("overlap of states on different grids");
  CompensatedSum<cplx> s;
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t j = 0; j < x.size(); ++j) s.add(std::conj(x[j]) * y[j]);
  return s.value();
}

void Region::validate() const {
  if (!(theta_hi > theta_lo) || !(p_hi > p_lo)) throw InvalidRegion("mixture region is empty");
  if (theta_lo < 0.0 || theta_hi > 1.0 || p_lo < -0.5 || p_hi > 0.5) {
    throw InvalidRegion("mixture region leaves the fundamental domain");
  }
}

std::size_t cell_count(const TorusGrid& grid, const Region& region) {
  region.validate();
  return static_cast<std::size_t>(std::llround(region.area() / (kTwoPi * grid.hbar())));
}

PacketMixture::PacketMixture(const TorusGrid& grid, std::vector<MixtureMember> members, Region region,
                             std::size_t cells)
    : grid_(grid), members_(std::move(members)), region_(region), cells_(cells) {
  if (members_.empty()) throw EmptyEnsemble("mixture has no members");
  CompensatedSum<double> total;
  for (const auto& m : members_) {
    if (!(m.weight >= 0.0)) throw InvalidArgument("mixture weights must be non-negative");
    total.add(m.weight);
  }
  if (std::abs(total.value() - 1.0) > 1e-12) throw InvalidArgument("mixture weights must sum to 1");
}

PacketMixture uniform_mixture(const TorusGrid& grid, const Region& region, std::size_t count,
                              std::uint64_t seed) {
  region.validate();
  if (count == 0) throw InvalidArgument("mixture member count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(region.theta_lo, region.theta_hi);
  std::uniform_real_distribution<double> up(region.p_lo, region.p_hi);
  std::vector<MixtureMember> members(count);
  const double w = 1.0 / static_cast<double>(count);
  for (auto& m : members) {
    const double th = ut(rng);
    const double p = up(rng);
    m.center = {wrap_angle(kTwoPi * th), wrap_momentum(kTwoPi * p)};
    m.weight = w;
  }
  return PacketMixture(grid, std::move(members), region, cell_count(grid, region));
}

}  // namespace echolab
