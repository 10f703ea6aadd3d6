#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace echolab {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Discretized torus 0 <= theta < 2pi, -pi <= p < pi holding N Planck cells.
///
/// Positions theta_j = 2 pi j / N. Momenta are integer multiples m*hbar with
/// m in [-N/2, N/2); they are stored in DFT order, so momentum(k) is the value
/// carried by the k-th output of a forward transform.
class TorusGrid {
 public:
  /// Throws InvalidDimension for n < 2.
  static TorusGrid make(std::size_t n);

  std::size_t size() const { return n_; }
  double hbar() const { return hbar_; }
  double theta(std::size_t j) const { return kTwoPi * static_cast<double>(j) / static_cast<double>(n_); }
  /// Signed integer m of the k-th DFT slot, in [-N/2, N/2).
  long momentum_index(std::size_t k) const;
  double momentum(std::size_t k) const { return hbar_ * static_cast<double>(momentum_index(k)); }

  bool operator==(const TorusGrid& o) const { return n_ == o.n_; }

 private:
  TorusGrid(std::size_t n, double hbar) : n_(n), hbar_(hbar) {}
  std::size_t n_;
  double hbar_;
};

/// Complex amplitudes on the position grid of a TorusGrid.
class QuantumState {
 public:
  QuantumState(const TorusGrid& grid, std::vector<cplx> amplitudes);
  explicit QuantumState(const TorusGrid& grid) : QuantumState(grid, std::vector<cplx>(grid.size())) {}

  /// |m> with momentum m*hbar, m in [-N/2, N/2).
  static QuantumState momentum_eigenstate(const TorusGrid& grid, long m);

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return amp_.size(); }
  std::span<const cplx> amplitudes() const { return amp_; }
  std::span<cplx> amplitudes() { return amp_; }
  cplx operator[](std::size_t j) const { return amp_[j]; }
  cplx& operator[](std::size_t j) { return amp_[j]; }

  double norm() const;
  /// Rescales to unit norm; throws NumericalError on the zero vector.
  void normalize();

 private:
  TorusGrid grid_;
  std::vector<cplx> amp_;
};

/// Minimum-uncertainty packet (sigma_theta^2 = hbar/2) centred at (theta0, p0),
/// periodized over winding numbers -3..3 and normalized. Inputs are wrapped
/// into the fundamental domain first.
QuantumState gaussian_packet(const TorusGrid& grid, double theta0, double p0);

/// <a|b> = sum_j conj(a_j) b_j. Throws DimensionMismatch for different grids.
cplx overlap(const QuantumState& a, const QuantumState& b);

/// Rectangle in scaled coordinates (theta/2pi, p/2pi); theta/2pi in [0,1],
/// p/2pi in [-1/2, 1/2].
struct Region {
  double theta_lo = 0.2;
  double theta_hi = 0.3;
  double p_lo = 0.3;
  double p_hi = 0.4;

  /// Area in (theta, p) units.
  double area() const { return (theta_hi - theta_lo) * (p_hi - p_lo) * kTwoPi * kTwoPi; }
  /// Throws InvalidRegion when empty or outside the fundamental domain.
  void validate() const;
};

/// Number of Planck cells 2*pi*hbar inside the region, rounded.
std::size_t cell_count(const TorusGrid& grid, const Region& region);

struct PhasePoint {
  double theta = 0.0;
  double p = 0.0;
};

struct MixtureMember {
  PhasePoint center;
  double weight = 0.0;
};

/// Incoherent mixture of Gaussian packets. Weights sum to one.
class PacketMixture {
 public:
  PacketMixture(const TorusGrid& grid, std::vector<MixtureMember> members, Region region,
                std::size_t cells);

  const TorusGrid& grid() const { return grid_; }
  std::span<const MixtureMember> members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  const Region& region() const { return region_; }
  std::size_t cell_count() const { return cells_; }

 private:
  TorusGrid grid_;
  std::vector<MixtureMember> members_;
  Region region_;
  std::size_t cells_;
};

/// `count` centres drawn uniformly in `region` with equal weights; fully
/// determined by `seed`.
PacketMixture uniform_mixture(const TorusGrid& grid, const Region& region, std::size_t count,
                              std::uint64_t seed);

/// Wraps theta into [0, 2pi) and p into [-pi, pi).
double wrap_angle(double theta);
double wrap_momentum(double p);

}  // namespace echolab
