#pragma once

#include <complex>
#include <cstddef>
#include <functional>

namespace echolab {

/// Worker count used by parallel loops. 0 means hardware concurrency.
void set_thread_count(unsigned n);
unsigned thread_count();

/// Runs body(i) for i in [0, n), split into contiguous chunks over the
/// configured worker count. Each index is visited exactly once; callers write
/// to disjoint slots and reduce afterwards in index order.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

/// Neumaier-compensated accumulator. Order of add() calls fixes the result.
template <typename T>
class CompensatedSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (magnitude(sum_) >= magnitude(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  T value() const { return sum_ + comp_; }

 private:
  static double magnitude(double v) { return v < 0 ? -v : v; }
  static double magnitude(const std::complex<double>& v) {
    return std::abs(v.real()) + std::abs(v.imag());
  }

  T sum_{};
  T comp_{};
};

// Componentwise compensation for complex values.
template <>
inline void CompensatedSum<std::complex<double>>::add(std::complex<double> x) {
  auto step = [](double& s, double& c, double v) {
    double t = s + v;
    if ((s < 0 ? -s : s) >= (v < 0 ? -v : v)) {
      c += (s - t) + v;
    } else {
      c += (v - t) + s;
    }
    s = t;
  };
  double sr = sum_.real(), si = sum_.imag(), cr = comp_.real(), ci = comp_.imag();
  step(sr, cr, x.real());
  step(si, ci, x.imag());
  sum_ = {sr, si};
  comp_ = {cr, ci};
}

}  // namespace echolab
