#include "rt/corona/fft.hpp"

#include <algorithm>
#include <numbers>

namespace rt::corona {

namespace {

bool is_pow2(std::size_t n) { return n && !(n & (n - 1)); }

std::size_t next_pow2(std::size_t n) {
  std::size_t m = 1;
  while (m < n) m <<= 1;
  return m;
}

cplx unit(double turns) { return std::polar(1.0, -2.0 * std::numbers::pi * turns); }

}  // namespace

FftPlan::FftPlan(std::size_t n) : n_(n), pow2_(is_pow2(n) || n <= 1) {
  if (n_ <= 1) return;
  if (pow2_) {
    twiddle_.resize(n_ / 2);
    for (std::size_t k = 0; k < n_ / 2; ++k)
      twiddle_[k] = unit(static_cast<double>(k) / static_cast<double>(n_));
    bitrev_.resize(n_);
    std::size_t bits = 0;
    while ((std::size_t{1} << bits) < n_) ++bits;
    for (std::size_t i = 0; i < n_; ++i) {
      std::size_t r = 0;
      for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
      bitrev_[i] = static_cast<std::uint32_t>(r);
    }
    return;
  }
  const std::size_t m = next_pow2(2 * n_ - 1);
  inner_ = std::make_unique<FftPlan>(m);
  chirp_.resize(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    // k^2 mod 2n keeps the phase argument small.
    const std::size_t q = (k * k) % (2 * n_);
    chirp_[k] = std::polar(1.0, std::numbers::pi * static_cast<double>(q) / static_cast<double>(n_));
  }
  chirp_spectrum_.assign(m, cplx(0));
  chirp_spectrum_[0] = chirp_[0];
  for (std::size_t k = 1; k < n_; ++k) chirp_spectrum_[k] = chirp_spectrum_[m - k] = chirp_[k];
  inner_->transform(chirp_spectrum_.data(), false);
  work_.resize(m);
}

FftPlan::~FftPlan() = default;
FftPlan::FftPlan(FftPlan&&) noexcept = default;
FftPlan& FftPlan::operator=(FftPlan&&) noexcept = default;

void FftPlan::transform(cplx* data, bool inverse) const {
  if (n_ <= 1) return;
  if (pow2_)
    radix2(data, inverse);
  else
    bluestein(data, inverse);
}

void FftPlan::radix2(cplx* data, bool inverse) const {
  for (std::size_t i = 0; i < n_; ++i)
    if (i < bitrev_[i]) std::swap(data[i], data[bitrev_[i]]);
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2, step = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        const cplx w = inverse ? std::conj(twiddle_[j * step]) : twiddle_[j * step];
        const cplx t = w * data[start + j + half];
        data[start + j + half] = data[start + j] - t;
        data[start + j] += t;
      }
    }
  }
}

void FftPlan::bluestein(cplx* data, bool inverse) const {
  // An inverse transform is the conjugate of the forward transform of the
  // conjugate.
  const std::size_t m = work_.size();
  std::fill(work_.begin(), work_.end(), cplx(0));
  for (std::size_t k = 0; k < n_; ++k) {
    const cplx x = inverse ? std::conj(data[k]) : data[k];
    work_[k] = x * std::conj(chirp_[k]);
  }
  inner_->transform(work_.data(), false);
  for (std::size_t k = 0; k < m; ++k) work_[k] *= chirp_spectrum_[k];
  inner_->transform(work_.data(), true);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n_; ++k) {
    const cplx y = work_[k] * scale * std::conj(chirp_[k]);
    data[k] = inverse ? std::conj(y) : y;
  }
}

Fft2::Fft2(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), line_(cols) {}

void Fft2::forward(cplx* data, std::size_t pages) const { run(data, pages, false); }
void Fft2::inverse(cplx* data, std::size_t pages) const {
  run(data, pages, true);
  const std::size_t n = rows() * cols() * pages;
  const double scale = 1.0 / static_cast<double>(rows() * cols());
  for (std::size_t k = 0; k < n; ++k) data[k] *= scale;
}

void Fft2::run(cplx* data, std::size_t pages, bool inverse) const {
  const std::size_t M = rows(), N = cols();
  for (std::size_t p = 0; p < pages; ++p) {
    cplx* page = data + p * M * N;
    for (std::size_t n = 0; n < N; ++n) rows_.transform(page + n * M, inverse);
    if (N <= 1) continue;
    for (std::size_t m = 0; m < M; ++m) {
      for (std::size_t n = 0; n < N; ++n) line_[n] = page[m + n * M];
      cols_.transform(line_.data(), inverse);
      for (std::size_t n = 0; n < N; ++n) page[m + n * M] = line_[n];
    }
  }
}

namespace {

Array transform_pages(const Array& x, bool inverse) {
  const Array z = x.to_kind(Kind::complex);
  auto v = z.view<cplx>();
  std::vector<cplx> out(v.begin(), v.end());
  const std::size_t M = x.rows(), N = x.cols();
  const std::size_t pages = M != 0 && N != 0 ? out.size() / (M * N) : 0;
  if (pages) {
    Fft2 plan(M, N);
    inverse ? plan.inverse(out.data(), pages) : plan.forward(out.data(), pages);
  }
  return Array(x.dims(), std::move(out));
}

}  // namespace

Array fft2(const Array& x) { return transform_pages(x, false); }
Array ifft2(const Array& y) { return transform_pages(y, true); }

Array dft_operator(std::size_t m) {
  std::vector<cplx> u(m * m);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t r = 0; r < m; ++r)
      u[r + c * m] = unit(static_cast<double>((r * c) % m) / static_cast<double>(m));
  return Array({m, m}, std::move(u));
}

}  // namespace rt::corona
