#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>

namespace echolab {

/// In-place 1-D complex DFT of fixed length, unnormalized in both directions.
/// Plans are built once; execute() is safe to call concurrently on distinct
/// buffers.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(Fft&&) noexcept;
  Fft& operator=(Fft&&) noexcept;
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }

  /// X_k = sum_j x_j exp(-2 pi i j k / n)
  void forward(std::span<std::complex<double>> data) const;
  /// x_j = sum_k X_k exp(+2 pi i j k / n)
  void backward(std::span<std::complex<double>> data) const;

 private:
  struct Plans;
  std::size_t n_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace echolab
