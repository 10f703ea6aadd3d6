#include "echolab/glauber.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <cstdio>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>

#include "echolab/error.hpp"
#include "echolab/hilbert.hpp"
#include "echolab/parallel.hpp"

namespace echolab {

namespace {

constexpr double kTruncationTol = 1e-8;
constexpr double kClampTol = 1e-14;

double std_normal_cdf(double x) { return 0.5 * boost::math::erfc(-x / std::sqrt(2.0)); }

// Poisson probability with mean lambda, evaluated in the log domain.
double poisson(int n, double lambda) {
  if (lambda <= 0.0) return n == 0 ? 1.0 : 0.0;
  return std::exp(n * std::log(lambda) - lambda - std::lgamma(n + 1.0));
}

// M0 = int_a^b K du and M1 = int_a^b u K du for the Poisson kernel
// K(u) = exp(-u/hbar) (u/hbar)^n / n!, via regularized incomplete gammas.
struct Moments {
  double m0, m1;
};

double gamma_diff(double order, double xa, double xb) {
  if (xa > order) return boost::math::gamma_q(order, xa) - boost::math::gamma_q(order, xb);
  return boost::math::gamma_p(order, xb) - boost::math::gamma_p(order, xa);
}

Moments segment_moments(int n, double a, double b, double hbar) {
  const double xa = a / hbar, xb = b / hbar;
  return {hbar * gamma_diff(n + 1.0, xa, xb), hbar * hbar * (n + 1.0) * gamma_diff(n + 2.0, xa, xb)};
}

// Populations of a piecewise-linear pdf, exact up to rounding.
double tabulated_population(const std::vector<double>& g, const std::vector<double>& v, int n, double hbar) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < g.size(); ++i) {
    if (v[i] == 0.0 && v[i + 1] == 0.0) continue;
    const double a = g[i], b = g[i + 1], h = b - a;
    const Moments m = segment_moments(n, a, b, hbar);
    total += (v[i] * (b * m.m0 - m.m1) + v[i + 1] * (m.m1 - a * m.m0)) / h;
  }
  return total;
}

template <typename F>
double integrate_panels(F f, const std::vector<double>& edges) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (edges[i + 1] <= edges[i]) continue;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, edges[i], edges[i + 1], 12, 1e-13);
  }
  return total;
}

// Panel edges for the population integrals: the weight's own breakpoints plus
// the Poisson peak of each n, capped at the support.
std::vector<double> panel_edges(const RadialWeight& w, double hbar, double upper, int n) {
  std::vector<double> e = w.breakpoints();
  e.push_back(0.0);
  e.push_back(upper);
  if (n >= 0) {
    const double c = n * hbar, s = std::sqrt(n + 1.0) * hbar;
    for (double k : {-8.0, -3.0, 0.0, 3.0, 8.0}) e.push_back(c + k * s);
  }
  std::vector<double> out;
  for (double x : e) {
    if (x >= 0.0 && x <= upper) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// int pdf(u) kernel(u) du over the weight's support. A ring is integrated in
// z = (u - i0) / width: forming u - i0 near a narrow ring loses digits and
// leaves the adaptive rule chasing round-off.
template <typename K>
double integrate_weight(const RadialWeight& w, double hbar, double upper, int n, K kernel) {
  const auto edges = panel_edges(w, hbar, upper, n);
  if (w.family() != RadialWeight::Family::ring) {
    return integrate_panels([&](double u) { return w.pdf(u) * kernel(u); }, edges);
  }
  const double a = w.scale(), b = w.width();
  const double peak = w.pdf(a);
  const double z_hi = (upper - a) / b;
  const double z_lo = std::max(-a / b, -z_hi);
  std::vector<double> z;
  for (double u : edges) z.push_back(std::clamp((u - a) / b, z_lo, z_hi));
  z.push_back(z_lo);
  std::sort(z.begin(), z.end());
  z.erase(std::unique(z.begin(), z.end()), z.end());
  return b * integrate_panels([&](double t) { return peak * std::exp(-0.5 * t * t) * kernel(a + b * t); }, z);
}

// Lawson-Hanson non-negative least squares, min |Ax - b| subject to x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b) {
  const Eigen::Index n = A.cols();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = A.transpose() * (b - A * x);
  const double tol = 1e-12 * std::max(1.0, w.cwiseAbs().maxCoeff());
  const int max_iter = static_cast<int>(3 * n);

  auto solve_passive = [&](Eigen::VectorXd& s) {
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
    }
    Eigen::MatrixXd Ap(A.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) Ap.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
    const Eigen::VectorXd sp = Ap.colPivHouseholderQr().solve(b);
    s.setZero(n);
    for (std::size_t k = 0; k < idx.size(); ++k) s(idx[k]) = sp(static_cast<Eigen::Index>(k));
  };

  for (int iter = 0; iter < max_iter; ++iter) {
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        t = j;
      }
    }
    if (t < 0) break;
    passive[static_cast<std::size_t>(t)] = true;

    Eigen::VectorXd s;
    for (int inner = 0; inner < max_iter; ++inner) {
      solve_passive(s);
      double alpha = 1.0;
      bool feasible = true;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && s(j) <= 0.0) {
          feasible = false;
          alpha = std::min(alpha, x(j) / (x(j) - s(j)));
        }
      }
      if (feasible) break;
      x += alpha * (s - x);
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)] && x(j) <= 1e-15) {
          passive[static_cast<std::size_t>(j)] = false;
          x(j) = 0.0;
        }
      }
    }
    x = s;
    w = A.transpose() * (b - A * x);
  }
  return x;
}

}  // namespace

RadialWeight RadialWeight::gaussian(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("gaussian weight needs delta > 0");
  RadialWeight w;
  w.family_ = Family::gaussian;
  w.a_ = delta;
  return w;
}

RadialWeight RadialWeight::ring(double i0, double width) {
  if (!(i0 >= 0.0) || !(width > 0.0)) throw InvalidArgument("ring weight needs i0 >= 0 and width > 0");
  RadialWeight w;
  w.family_ = Family::ring;
  w.a_ = i0;
  w.b_ = width;
  w.norm_ = 1.0 / (width * std::sqrt(kTwoPi) * std_normal_cdf(i0 / width));
  return w;
}

RadialWeight RadialWeight::tabulated(std::vector<double> actions, std::vector<double> density) {
  if (actions.size() != density.size() || actions.size() < 2) {
    throw InvalidArgument("tabulated weight needs at least two (action, density) pairs");
  }
  if (actions.front() != 0.0) throw InvalidArgument("tabulated weight must start at action 0");
  for (std::size_t i = 0; i < actions.size(); ++i) {
    if (i > 0 && !(actions[i] > actions[i - 1])) throw InvalidArgument("tabulated actions must increase");
    if (!(density[i] >= 0.0) || !std::isfinite(density[i])) {
      throw InvalidArgument("tabulated density must be finite and non-negative");
    }
  }
  RadialWeight w;
  w.family_ = Family::tabulated;
  w.grid_ = std::move(actions);
  w.values_.resize(density.size());
  for (std::size_t i = 0; i < density.size(); ++i) w.values_[i] = kPi * density[i];
  w.cumulative_.assign(w.grid_.size(), 0.0);
  for (std::size_t i = 1; i < w.grid_.size(); ++i) {
    w.cumulative_[i] =
        w.cumulative_[i - 1] + 0.5 * (w.values_[i] + w.values_[i - 1]) * (w.grid_[i] - w.grid_[i - 1]);
  }
  const double mass = w.cumulative_.back();
  if (!(mass > 0.0)) throw InvalidArgument("tabulated weight has zero mass");
  for (auto& v : w.values_) v /= mass;
  for (auto& c : w.cumulative_) c /= mass;
  return w;
}

double RadialWeight::pdf(double u) const {
  if (u < 0.0) return 0.0;
  switch (family_) {
    case Family::gaussian:
      return std::exp(-u / a_) / a_;
    case Family::ring: {
      const double z = (u - a_) / b_;
      return norm_ * std::exp(-0.5 * z * z);
    }
    case Family::tabulated: {
      if (u > grid_.back()) return 0.0;
      if (u == grid_.back()) return values_.back();
      const auto it = std::upper_bound(grid_.begin(), grid_.end(), u);
      const std::size_t i = static_cast<std::size_t>(it - grid_.begin()) - 1;
      const double f = (u - grid_[i]) / (grid_[i + 1] - grid_[i]);
      return (1.0 - f) * values_[i] + f * values_[i + 1];
    }
  }
  return 0.0;
}

double RadialWeight::density(double u) const { return pdf(u) / kPi; }

double RadialWeight::mean() const {
  switch (family_) {
    case Family::gaussian:
      return a_;
    case Family::ring: {
      const double z = a_ / b_;
      return a_ + b_ * std::exp(-0.5 * z * z) / (std::sqrt(kTwoPi) * std_normal_cdf(z));
    }
    case Family::tabulated: {
      // Exact for linear segments: int (a + b u) u du.
      double m = 0.0;
      for (std::size_t i = 0; i + 1 < grid_.size(); ++i) {
        const double x0 = grid_[i], x1 = grid_[i + 1], h = x1 - x0;
        m += h / 6.0 * (values_[i] * (2 * x0 + x1) + values_[i + 1] * (x0 + 2 * x1));
      }
      return m;
    }
  }
  return 0.0;
}

std::vector<double> RadialWeight::breakpoints() const {
  switch (family_) {
    case Family::gaussian:
      return {a_, 5 * a_, 15 * a_};
    case Family::ring: {
      std::vector<double> out;
      for (double k : {-10.0, -5.0, -2.0, 0.0, 2.0, 5.0, 10.0}) out.push_back(std::max(0.0, a_ + k * b_));
      return out;
    }
    case Family::tabulated:
      return grid_;
  }
  return {};
}

double RadialWeight::upper_support(double tol) const {
  switch (family_) {
    case Family::gaussian:
      return a_ * std::max(1.0, -std::log(tol));
    case Family::ring:
      return a_ + b_ * std::sqrt(2.0 * std::max(1.0, -std::log(tol)));
    case Family::tabulated:
      return grid_.back();
  }
  return 0.0;
}

double RadialWeight::sample(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  switch (family_) {
    case Family::gaussian:
      return -a_ * std::log1p(-uni(rng));
    case Family::ring: {
      std::normal_distribution<double> normal(a_, b_);
      for (;;) {
        const double u = normal(rng);
        if (u >= 0.0) return u;
      }
    }
    case Family::tabulated: {
      const double r = uni(rng);
      auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), r);
      std::size_t i = static_cast<std::size_t>(it - cumulative_.begin());
      i = std::clamp<std::size_t>(i, 1, grid_.size() - 1) - 1;
      // Invert the quadratic CDF of the linear segment.
      const double h = grid_[i + 1] - grid_[i];
      const double f0 = values_[i], slope = (values_[i + 1] - values_[i]) / h;
      const double need = r - cumulative_[i];
      double x;
      if (std::abs(slope) * h < 1e-12 * std::max(f0, 1e-300)) {
        x = f0 > 0.0 ? need / f0 : 0.0;
      } else {
        const double disc = std::max(0.0, f0 * f0 + 2.0 * slope * need);
        x = 2.0 * need / (f0 + std::sqrt(disc));
      }
      return grid_[i] + std::clamp(x, 0.0, h);
    }
  }
  return 0.0;
}

RadialWeight RadialWeight::scaled(double factor) const {
  if (!(factor > 0.0)) throw InvalidArgument("scale factor must be positive");
  switch (family_) {
    case Family::gaussian:
      return gaussian(a_ * factor);
    case Family::ring:
      return ring(a_ * factor, b_ * factor);
    case Family::tabulated: {
      std::vector<double> g = grid_, d(values_.size());
      for (auto& x : g) x *= factor;
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = values_[i] / kPi;
      return tabulated(std::move(g), std::move(d));
    }
  }
  return *this;
}

Populations populations_from_weight(const RadialWeight& weight, double hbar, int n_max) {
  if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  if (n_max < 0) throw InvalidArgument("n_max must be non-negative");
  const double upper = weight.upper_support(1e-18);

  Populations out;
  out.values.resize(static_cast<std::size_t>(n_max) + 1);
  auto clamp = [&](double v) {
    if (v < 0.0) {
      if (v < -kClampTol) throw NumericalError("negative population beyond quadrature noise");
      ++out.clamped;
      return 0.0;
    }
    return v;
  };

  if (weight.family() == RadialWeight::Family::tabulated) {
    CompensatedSum<double> total;
    for (int n = 0; n <= n_max; ++n) {
      const double v = clamp(tabulated_population(weight.table_actions(), weight.table_pdf(), n, hbar));
      out.values[static_cast<std::size_t>(n)] = v;
      total.add(v);
    }
    // The table mass is exactly one, so the remainder is the tail.
    out.tail = std::max(0.0, 1.0 - total.value());
    if (out.tail > kTruncationTol) {
      const int suggested = suggest_n_max(weight, hbar, kTruncationTol);
      throw TruncationError("population tail above n_max = " + std::to_string(n_max) +
                                " exceeds 1e-8; try n_max = " + std::to_string(suggested),
                            suggested);
    }
    return out;
  }

  // Mass beyond n_max: P(N > n_max | lambda) is the regularized lower gamma.
  auto tail_of = [&](int n) {
    return integrate_weight(weight, hbar, upper, n,
                            [&](double u) { return boost::math::gamma_p(n + 1.0, u / hbar); });
  };
  const double tail = tail_of(n_max);
  if (tail > kTruncationTol) {
    const int suggested = suggest_n_max(weight, hbar, kTruncationTol);
    char buf[160];
    std::snprintf(buf, sizeof buf, "population tail %.3e above n_max = %d exceeds %.0e; try n_max = %d", tail,
                  n_max, kTruncationTol, suggested);
    throw TruncationError(buf, suggested);
  }

  out.tail = tail;
  for (int n = 0; n <= n_max; ++n) {
    const double v = integrate_weight(weight, hbar, upper, n, [&](double u) { return poisson(n, u / hbar); });
    out.values[static_cast<std::size_t>(n)] = clamp(v);
  }
  return out;
}

int suggest_n_max(const RadialWeight& weight, double hbar, double tol) {
  if (!(hbar > 0.0)) throw InvalidArgument("hbar must be positive");
  const double upper = weight.upper_support(1e-18);
  const double lam = upper / hbar;
  int n = static_cast<int>(std::ceil(lam + 10.0 * std::sqrt(lam + 1.0) + 10.0));
  // Walk down while the tail stays below tol.
  auto tail = [&](int m) {
    if (weight.family() == RadialWeight::Family::tabulated) {
      // Mass above m: int pdf(u) P(m+1, u/hbar) du, summed over linear pieces.
      const auto& g = weight.table_actions();
      const auto& v = weight.table_pdf();
      double total = 0.0;
      for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        const double a = g[i], b = g[i + 1], h = b - a;
        auto f = [&](double u) { return ((b - u) * v[i] + (u - a) * v[i + 1]) / h * boost::math::gamma_p(m + 1.0, u / hbar); };
        total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0);
      }
      return total;
    }
    return integrate_weight(weight, hbar, upper, m, [&](double u) { return boost::math::gamma_p(m + 1.0, u / hbar); });
  };
  int lo = 0, hi = n;
  while (tail(hi) > tol) hi *= 2;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (tail(mid) > tol) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  return hi;
}

std::vector<double> thermal_populations(double temperature, double omega0, double hbar, bool anharmonic,
                                        double cutoff) {
  if (!(temperature > 0.0) || !(hbar > 0.0) || !(omega0 > 0.0)) {
    throw InvalidArgument("thermal populations need positive temperature, omega0 and hbar");
  }
  std::vector<double> rho;
  for (int n = 0;; ++n) {
    const double e = hbar * omega0 * n + (anharmonic ? hbar * hbar * n * n : 0.0);
    const double v = std::exp(-e / temperature);
    if (n > 0 && v < cutoff) break;
    rho.push_back(v);
    if (n > 1000000) throw NumericalError("thermal distribution too broad");
  }
  const double z = std::accumulate(rho.begin(), rho.end(), 0.0);
  for (auto& v : rho) v /= z;
  return rho;
}

RadialWeight thermal_weight(double temperature, double omega0, double hbar, ThermalOptions options) {
  if (!options.anharmonic) {
    if (!(temperature > 0.0) || !(hbar > 0.0) || !(omega0 > 0.0)) {
      throw InvalidArgument("thermal weight needs positive temperature, omega0 and hbar");
    }
    const double nbar = 1.0 / std::expm1(hbar * omega0 / temperature);
    return RadialWeight::gaussian(std::max(hbar * nbar, 1e-300));
  }

  const std::vector<double> target = thermal_populations(temperature, omega0, hbar, true);
  const int n_hi = static_cast<int>(target.size()) - 1;

  // Nodes: log-spaced below hbar for the ground-state corner, then hbar/4 steps.
  std::vector<double> nodes{0.0};
  for (int k = 0; k <= 36; ++k) nodes.push_back(hbar * std::pow(10.0, -9.0 + 0.25 * k));
  const double u_max = hbar * (n_hi + 8.0 * std::sqrt(n_hi + 1.0) + 10.0);
  for (double u = (1.0 + options.node_spacing) * hbar; u <= u_max; u += options.node_spacing * hbar) nodes.push_back(u);
  const std::size_t cols = nodes.size();
  const int rows_n = static_cast<int>(std::ceil(u_max / hbar + 8.0 * std::sqrt(u_max / hbar) + 10.0));

  // A(n, i): population n produced by the hat function on node i.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows_n + 2, static_cast<Eigen::Index>(cols));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(rows_n + 2);
  std::vector<double> row_scale(static_cast<std::size_t>(rows_n) + 1);
  for (int n = 0; n <= rows_n; ++n) {
    const double t = n <= n_hi ? target[static_cast<std::size_t>(n)] : 0.0;
    row_scale[static_cast<std::size_t>(n)] = 1.0 / std::max(t, options.row_floor);
    b(n) = t * row_scale[static_cast<std::size_t>(n)];
  }
  for (std::size_t i = 0; i + 1 < cols; ++i) {
    const double lo = nodes[i], hi = nodes[i + 1], h = hi - lo;
    const auto ci = static_cast<Eigen::Index>(i);
    for (int n = 0; n <= rows_n; ++n) {
      const Moments m = segment_moments(n, lo, hi, hbar);
      const double rs = row_scale[static_cast<std::size_t>(n)];
      A(n, ci) += rs * (hi * m.m0 - m.m1) / h;
      A(n, ci + 1) += rs * (m.m1 - lo * m.m0) / h;
    }
    // Normalization row (hat areas), weighted heavily.
    A(rows_n + 1, ci) += 1e4 * 0.5 * h;
    A(rows_n + 1, ci + 1) += 1e4 * 0.5 * h;
  }
  b(rows_n + 1) = 1e4;

  // Unit-norm columns keep the tiny low-action hats on equal footing.
  Eigen::VectorXd col_norm = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < A.cols(); ++j) {
    if (col_norm(j) > 0.0) A.col(j) /= col_norm(j);
  }
  Eigen::VectorXd c = nnls(A, b);
  for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = col_norm(j) > 0.0 ? c(j) / col_norm(j) : 0.0;

  std::vector<double> density(cols);
  for (std::size_t i = 0; i < cols; ++i) density[i] = c(static_cast<Eigen::Index>(i)) / kPi;
  RadialWeight w = RadialWeight::tabulated(nodes, density);

  // Check the reconstruction against the target.
  const Populations got = populations_from_weight(w, hbar, std::max(rows_n, suggest_n_max(w, hbar)));
  double worst = 0.0;
  for (int n = 0; n <= n_hi; ++n) {
    const double t = target[static_cast<std::size_t>(n)];
    if (t <= 1e-6) continue;
    worst = std::max(worst, std::abs(got.values[static_cast<std::size_t>(n)] - t) / t);
  }
  if (worst > options.tolerance) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "thermal weight matching did not converge: max relative error %.3e", worst);
    throw ConvergenceError(buf, worst);
  }
  return w;
}

void write_weight_table(std::ostream& out, const RadialWeight& weight) {
  if (weight.family() != RadialWeight::Family::tabulated) {
    throw InvalidArgument("only tabulated weights can be written as a table");
  }
  out << "action,density\n";
  char buf[64];
  const auto& g = weight.table_actions();
  for (std::size_t i = 0; i < g.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.12e,%.12e\n", g[i], weight.density(g[i]));
    out << buf;
  }
}

RadialWeight read_weight_table(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("weight table is empty");
  std::vector<double> a, d;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    for (auto& ch : line) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream ss(line);
    double x, y;
    if (!(ss >> x >> y)) throw InvalidArgument("malformed weight table line " + std::to_string(lineno));
    a.push_back(x);
    d.push_back(y);
  }
  return RadialWeight::tabulated(std::move(a), std::move(d));
}

}  // namespace echolab
