#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <vector>

namespace echolab {

/// Isotropic Glauber weight P(|alpha - alpha_c|^2) of a diagonal mixture.
///
/// The stored density absorbs the angular factor: pdf(u) = pi * P(u) with
/// u = |alpha - alpha_c|^2, so that the integral of pdf over u >= 0 is one.
/// density(u) returns the bare P(u).
class RadialWeight {
 public:
  enum class Family { gaussian, ring, tabulated };

  /// P(u) = exp(-u/delta) / (pi delta). Also the harmonic thermal weight.
  static RadialWeight gaussian(double delta);
  /// P(u) ~ exp(-(u - i0)^2 / (2 width^2)), truncated at u >= 0.
  static RadialWeight ring(double i0, double width);
  /// Piecewise-linear P on an increasing grid starting at 0; renormalized.
  static RadialWeight tabulated(std::vector<double> actions, std::vector<double> density);

  Family family() const { return family_; }
  double pdf(double u) const;
  double density(double u) const;
  double mean() const;
  /// Points where the quadrature should split (kinks, narrow features).
  std::vector<double> breakpoints() const;
  /// u beyond which the remaining mass is below tol.
  double upper_support(double tol) const;
  /// Draws u = |alpha - alpha_c|^2.
  double sample(std::mt19937_64& rng) const;
  /// New weight with u rescaled by `factor` (P(u) -> P(u/factor)/factor).
  RadialWeight scaled(double factor) const;

  const std::vector<double>& table_actions() const { return grid_; }
  const std::vector<double>& table_pdf() const { return values_; }
  double scale() const { return a_; }
  double width() const { return b_; }

 private:
  RadialWeight() = default;
  Family family_ = Family::gaussian;
  double a_ = 1.0;  // delta (gaussian) or i0 (ring)
  double b_ = 0.0;  // ring width
  double norm_ = 1.0;
  std::vector<double> grid_, values_, cumulative_;  // tabulated pdf
};

struct Populations {
  std::vector<double> values;  // rho_n, n = 0..n_max
  double tail = 0.0;           // mass above n_max
  int clamped = 0;             // negative quadrature noise set to zero
};

/// rho_n = (pi/n!) int dI P(I) exp(-I/hbar) (I/hbar)^n by adaptive
/// Gauss-Kronrod panels. Throws TruncationError when the mass above n_max
/// exceeds 1e-8.
Populations populations_from_weight(const RadialWeight& weight, double hbar, int n_max);

/// Smallest n_max with truncation tail below tol.
int suggest_n_max(const RadialWeight& weight, double hbar, double tol = 1e-8);

struct ThermalOptions {
  bool anharmonic = true;    // include hbar^2 n^2 in E_n
  double tolerance = 1e-4;   // max relative population error for rho_n > 1e-6
  double row_floor = 1e-8;   // populations below this are matched in absolute terms
  double node_spacing = 0.25;  // linear node spacing in units of hbar
};

/// Populations proportional to exp(-E_n/T) with E_n = hbar omega0 n + hbar^2 n^2.
std::vector<double> thermal_populations(double temperature, double omega0, double hbar, bool anharmonic,
                                        double cutoff = 1e-16);

/// Radial weight whose populations reproduce the thermal distribution.
/// Harmonic case: exact Gaussian weight with mean action hbar*nbar. Anharmonic
/// case: non-negative least squares fit of a tabulated P on a log/linear
/// action grid. Throws ConvergenceError when the fit misses the tolerance.
RadialWeight thermal_weight(double temperature, double omega0, double hbar, ThermalOptions options = {});

/// Two-column table "action,density" (density is the bare P) with one header
/// line, values in %.12e.
void write_weight_table(std::ostream& out, const RadialWeight& weight);
RadialWeight read_weight_table(std::istream& in);

}  // namespace echolab
