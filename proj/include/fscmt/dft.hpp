#pragma once

#include <complex>
#include <memory>
#include <span>

namespace fscmt {

/// N-point DFT pair. Forward is unnormalized, inverse carries 1/N.
///
/// Plans are created once per size and cached; execution is thread-safe.
class Dft {
 public:
  explicit Dft(int size);

  int size() const { return size_; }
  void forward(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;
  void inverse(std::span<const std::complex<double>> in, std::span<std::complex<double>> out) const;

  struct Plans;

 private:
  int size_;
  std::shared_ptr<const Plans> plans_;
};

}  // namespace fscmt
