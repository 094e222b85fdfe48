#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rt/corona/fft.hpp"
#include "rt/corona/memory.hpp"
#include "rt/errors.hpp"

namespace rt::corona {

/// An impossible ground-truth layout.
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Focused white-light spot through a circular aperture: |fft2(disc)|^2
/// shifted to (M/2, N/2) and scaled to peak 1.
RealField make_source(std::size_t M, std::size_t N, double aperture_radius = 6.0);

struct TruthSpec {
  double r_in = 0;
  double r_out = 0;
  double planet_radius = 0;
  double planet_amplitude = 0.5;
  double planet_angle = 0.5235987755982988;  // pi / 6; the twin sits opposite
  /// r_in = 0.12 min(M, N), r_out = 0.40 min(M, N), planets of radius
  /// max(0.03 min(M, N), 1) at mid-annulus.
  static TruthSpec defaults(std::size_t M, std::size_t N);
};

struct GroundTruth {
  RealField image;
  MaskField occulter;  // W^b: true where the truth is known to be zero
};

/// sqrt(source) with the occulted regions zeroed and two planet discs added
/// in the annulus. Throws SpecError when the radii or planets do not fit.
GroundTruth make_ground_truth(const RealField& source, std::size_t M, std::size_t N,
                              const TruthSpec& spec);

/// Antisymmetric phase: Phi(m, n) = -Phi((M - m) % M, (N - n) % N), free
/// entries uniform on (-pi, pi), self-paired entries zero.
RealField make_aberration(std::size_t M, std::size_t N, std::uint64_t seed);

/// real(ifft2(fft2(X) .* exp(j Phi))).
RealField apply_phase(const RealField& x, const RealField& phi, std::size_t M, std::size_t N);

/// Everything the phase-retrieval objective needs from one Phi.
struct Evaluation {
  double sse = 0;
  RealField gradient;  // empty unless requested
  RealField corrected;   // X^t
  ComplexField pupil;    // Y^t
  MaskField weights;     // W = W^b | W^f
};

/// SSE objective over M x N images for a fixed aberrated image and
/// occulter. fft2 of the aberrated image is computed once.
class Problem {
 public:
  Problem(std::size_t M, std::size_t N, RealField aberrated, MaskField occulter);

  std::size_t rows() const noexcept { return M_; }
  std::size_t cols() const noexcept { return N_; }
  std::size_t size() const noexcept { return M_ * N_; }
  const RealField& aberrated() const noexcept { return aberrated_; }
  const MaskField& occulter() const noexcept { return occulter_; }
  const Fft2& fft() const noexcept { return fft_; }

  Evaluation evaluate(const RealField& phi, bool want_gradient) const;

  /// Hessian of the SSE at `at` times each of the P column-major M x N pages
  /// of `directions`; returns P pages.
  RealField hess_mult(const Evaluation& at, const RealField& directions, std::size_t pages) const;

 private:
  std::size_t M_, N_;
  RealField aberrated_;
  MaskField occulter_;
  Fft2 fft_;
  ComplexField spectrum_;  // fft2(aberrated)
};

struct SseResult {
  double sse = 0;
  RealField gradient;
  RealField corrected;
};

/// Stand-alone SSE (and gradient) of Phi for aberrated image X^a.
SseResult sse(const RealField& phi, const RealField& aberrated, const MaskField& occulter,
              std::size_t M, std::size_t N, bool want_gradient);

/// Hessian-multiply from the corrected image alone: Y^t is recovered as
/// fft2(X^t), which holds when Phi is antisymmetric.
RealField hess_mult(const RealField& corrected, const RealField& directions, std::size_t pages,
                    const MaskField& occulter, std::size_t M, std::size_t N);

/// SSE and gradient through explicit DFT operators and tensor products, for
/// cross-checking the FFT path on small images.
SseResult sse_by_operators(const RealField& phi, const RealField& aberrated,
                           const MaskField& occulter, std::size_t M, std::size_t N);

}  // namespace rt::corona
