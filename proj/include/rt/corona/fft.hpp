#pragma once

#include <cstddef>
#include <memory>

#include "rt/array.hpp"
#include "rt/corona/memory.hpp"

namespace rt::corona {

/// Unnormalized 1D DFT of a fixed length: iterative radix-2 for powers of
/// two, Bluestein's chirp-z convolution otherwise.
///
/// A plan owns scratch space, so one plan must not run on two threads at
/// once.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);
  ~FftPlan();
  FftPlan(FftPlan&&) noexcept;
  FftPlan& operator=(FftPlan&&) noexcept;

  std::size_t size() const noexcept { return n_; }
  /// In place. Forward uses exp(-2 pi i nk / n); inverse flips the sign and
  /// does not scale.
  void transform(cplx* data, bool inverse) const;

 private:
  void radix2(cplx* data, bool inverse) const;
  void bluestein(cplx* data, bool inverse) const;

  std::size_t n_ = 0;
  bool pow2_ = true;
  Buffer<cplx> twiddle_;            // exp(-2 pi i k / n), k < n / 2
  Buffer<std::uint32_t> bitrev_;
  Buffer<cplx> chirp_;              // exp(i pi k^2 / n)
  Buffer<cplx> chirp_spectrum_;     // transform of the padded chirp filter
  std::unique_ptr<FftPlan> inner_;  // power-of-two convolution length
  mutable Buffer<cplx> work_;
};

/// Paired column and row plans for repeated M x N transforms.
class Fft2 {
 public:
  Fft2(std::size_t rows, std::size_t cols);
  std::size_t rows() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_.size(); }

  /// In-place transform of `pages` consecutive column-major M x N pages.
  /// The inverse scales by 1 / (M N).
  void forward(cplx* data, std::size_t pages = 1) const;
  void inverse(cplx* data, std::size_t pages = 1) const;

 private:
  void run(cplx* data, std::size_t pages, bool inverse) const;
  FftPlan rows_, cols_;
  mutable Buffer<cplx> line_;
};

/// Pagewise 2D DFT over the first two dimensions; entries become complex.
Array fft2(const Array& x);
/// Pagewise inverse 2D DFT, scaled by 1 / (rows cols).
Array ifft2(const Array& y);

/// U(m, k) = exp(-2 pi i (m k mod M) / M).
Array dft_operator(std::size_t m);

}  // namespace rt::corona
