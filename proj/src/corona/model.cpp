#include "rt/corona/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "rt/rt.hpp"

namespace rt::corona {

namespace {

// Signed frequency of bin k of n.
double signed_bin(std::size_t k, std::size_t n) {
  return k < (n + 1) / 2 ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(n);
}

ComplexField to_complex(const RealField& x) { return ComplexField(x.begin(), x.end()); }

RealField real_part(const ComplexField& z) {
  RealField out(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) out[k] = z[k].real();
  return out;
}

}  // namespace

RealField make_source(std::size_t M, std::size_t N, double aperture_radius) {
  ComplexField field(M * N, cplx(0));
  for (std::size_t n = 0; n < N; ++n)
    for (std::size_t m = 0; m < M; ++m)
      if (std::hypot(signed_bin(m, M), signed_bin(n, N)) <= aperture_radius) field[m + n * M] = 1.0;
  Fft2(M, N).forward(field.data());
  RealField source(M * N);
  double peak = 0;
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t m = 0; m < M; ++m) {
      const double v = std::norm(field[m + n * M]);
      source[(m + M / 2) % M + ((n + N / 2) % N) * M] = v;
      peak = std::max(peak, v);
    }
  }
  if (peak > 0)
    for (auto& v : source) v /= peak;
  return source;
}

TruthSpec TruthSpec::defaults(std::size_t M, std::size_t N) {
  const double s = static_cast<double>(std::min(M, N));
  TruthSpec spec;
  spec.r_in = 0.12 * s;
  spec.r_out = 0.40 * s;
  spec.planet_radius = std::max(0.03 * s, 1.0);
  return spec;
}

GroundTruth make_ground_truth(const RealField& source, std::size_t M, std::size_t N,
                              const TruthSpec& spec) {
  const double half = 0.5 * static_cast<double>(std::min(M, N));
  if (!(spec.r_in > 0 && spec.r_in < spec.r_out && spec.r_out <= half))
    throw SpecError("annulus radii must satisfy 0 < r_in < r_out <= min(M, N) / 2");
  const double mid = 0.5 * (spec.r_in + spec.r_out);
  if (!(spec.planet_radius > 0) || mid - spec.planet_radius <= spec.r_in ||
      mid + spec.planet_radius >= spec.r_out)
    throw SpecError("planet discs of radius " + std::to_string(spec.planet_radius) +
                    " do not fit inside the annulus");
  if (source.size() != M * N) throw DimMismatchError("source size differs from M x N");

  GroundTruth gt;
  gt.image.resize(M * N);
  gt.occulter.resize(M * N);
  const double cm = static_cast<double>(M / 2), cn = static_cast<double>(N / 2);
  const double angles[2] = {spec.planet_angle, spec.planet_angle + std::numbers::pi};
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t m = 0; m < M; ++m) {
      const std::size_t k = m + n * M;
      const double dm = static_cast<double>(m) - cm, dn = static_cast<double>(n) - cn;
      const double r = std::hypot(dm, dn);
      const bool blocked = r < spec.r_in || r > spec.r_out;
      gt.occulter[k] = blocked;
      if (blocked) continue;
      double v = std::sqrt(std::max(source[k], 0.0));
      for (double a : angles)
        if (std::hypot(dm - mid * std::cos(a), dn - mid * std::sin(a)) <= spec.planet_radius)
          v += spec.planet_amplitude;
      gt.image[k] = v;
    }
  }
  return gt;
}

RealField make_aberration(std::size_t M, std::size_t N, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uniform(-std::numbers::pi, std::numbers::pi);
  RealField phi(M * N, 0.0);
  for (std::size_t n = 0; n < N; ++n) {
    for (std::size_t m = 0; m < M; ++m) {
      const std::size_t k = m + n * M;
      const std::size_t pair = (M - m) % M + ((N - n) % N) * M;
      if (k < pair)
        phi[k] = uniform(gen);
      else if (k > pair)
        phi[k] = -phi[pair];
    }
  }
  return phi;
}

RealField apply_phase(const RealField& x, const RealField& phi, std::size_t M, std::size_t N) {
  Fft2 fft(M, N);
  ComplexField y = to_complex(x);
  fft.forward(y.data());
  for (std::size_t k = 0; k < y.size(); ++k) y[k] *= std::polar(1.0, phi[k]);
  fft.inverse(y.data());
  return real_part(y);
}

Problem::Problem(std::size_t M, std::size_t N, RealField aberrated, MaskField occulter)
    : M_(M), N_(N), aberrated_(std::move(aberrated)), occulter_(std::move(occulter)), fft_(M, N) {
  if (aberrated_.size() != M * N || occulter_.size() != M * N)
    throw DimMismatchError("aberrated image and occulter must both be " + std::to_string(M) +
                           "x" + std::to_string(N));
  spectrum_ = to_complex(aberrated_);
  fft_.forward(spectrum_.data());
}

Evaluation Problem::evaluate(const RealField& phi, bool want_gradient) const {
  if (phi.size() != size()) throw DimMismatchError("phase size differs from M x N");
  const std::size_t n = size();
  Evaluation ev;
  ev.pupil.resize(n);
  for (std::size_t k = 0; k < n; ++k) ev.pupil[k] = spectrum_[k] * std::polar(1.0, phi[k]);
  ComplexField work = ev.pupil;
  fft_.inverse(work.data());
  ev.corrected = real_part(work);
  ev.weights.resize(n);
  double e = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double x = ev.corrected[k];
    const bool w = occulter_[k] || x < 0;
    ev.weights[k] = w;
    if (w) e += x * x;
  }
  ev.sse = e;
  if (!want_gradient) return ev;
  // Reuse the buffer for Y^e = fft2(W .* X^t).
  for (std::size_t k = 0; k < n; ++k) work[k] = ev.weights[k] ? ev.corrected[k] : 0.0;
  fft_.forward(work.data());
  ev.gradient.resize(n);
  const double scale = 2.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k)
    ev.gradient[k] = scale * (std::conj(ev.pupil[k]) * work[k]).imag();
  return ev;
}

RealField Problem::hess_mult(const Evaluation& at, const RealField& directions,
                             std::size_t pages) const {
  const std::size_t n = size();
  if (directions.size() != n * pages) throw DimMismatchError("directions must be M x N x P");
  // Y^e at the evaluation point.
  ComplexField ye(n);
  for (std::size_t k = 0; k < n; ++k) ye[k] = at.weights[k] ? at.corrected[k] : 0.0;
  fft_.forward(ye.data());

  RealField out(n * pages);
  ComplexField dy(n), dye(n);
  const double scale = 2.0 / static_cast<double>(n);
  for (std::size_t p = 0; p < pages; ++p) {
    const double* d = directions.data() + p * n;
    for (std::size_t k = 0; k < n; ++k) dy[k] = cplx(0, 1) * at.pupil[k] * d[k];
    for (std::size_t k = 0; k < n; ++k) dye[k] = dy[k];
    fft_.inverse(dye.data());
    for (std::size_t k = 0; k < n; ++k) dye[k] = at.weights[k] ? dye[k].real() : 0.0;
    fft_.forward(dye.data());
    double* f = out.data() + p * n;
    for (std::size_t k = 0; k < n; ++k)
      f[k] = scale * ((std::conj(dy[k]) * ye[k]).imag() + (std::conj(at.pupil[k]) * dye[k]).imag());
  }
  return out;
}

SseResult sse(const RealField& phi, const RealField& aberrated, const MaskField& occulter,
              std::size_t M, std::size_t N, bool want_gradient) {
  Problem problem(M, N, aberrated, occulter);
  Evaluation ev = problem.evaluate(phi, want_gradient);
  return SseResult{ev.sse, std::move(ev.gradient), std::move(ev.corrected)};
}

RealField hess_mult(const RealField& corrected, const RealField& directions, std::size_t pages,
                    const MaskField& occulter, std::size_t M, std::size_t N) {
  if (corrected.size() != M * N || occulter.size() != M * N)
    throw DimMismatchError("corrected image and occulter must both be M x N");
  // With phi = 0 the problem's pupil is fft2(corrected) itself.
  Problem problem(M, N, corrected, occulter);
  Evaluation at = problem.evaluate(RealField(M * N, 0.0), false);
  return problem.hess_mult(at, directions, pages);
}

SseResult sse_by_operators(const RealField& phi, const RealField& aberrated,
                           const MaskField& occulter, std::size_t M, std::size_t N) {
  auto plain = [&](const auto& field) {
    return Tensor::plain(Array({M, N}, std::vector<double>(field.begin(), field.end())));
  };
  const Tensor U = Tensor::plain(dft_operator(M));
  const Tensor V = Tensor::plain(dft_operator(N));
  const Tensor Xa = plain(aberrated);
  const Tensor Phi = plain(phi);
  std::vector<std::uint8_t> wb(occulter.begin(), occulter.end());
  const Tensor Wb(Array::booleans({M, N}, std::move(wb)), {});
  const Tensor j(Array::scalar(cplx(0, 1)), {});
  const Tensor inv_mn = Tensor::scalar(1.0 / static_cast<double>(M * N));

  const Tensor Ya = U * Xa * page_transpose(V);
  const Tensor Yt = times(Ya, ewise_unary(UnaryOp::exp, j * Phi));
  const Tensor Xt = ewise_unary(
      UnaryOp::real, inv_mn * page_ctranspose(U) * Yt * ewise_unary(UnaryOp::conj, V));
  const Tensor zero = Tensor::scalar(0.0);
  const Tensor W = Wb | ((!Wb) & (Xt < zero));
  const Tensor Xe = times(W, Xt);

  // E as an inner product of the error image with itself over two indices.
  const Index r = Index::fresh(), c = Index::fresh();
  const Array xe = Xe.entries().reshaped({1, 1, M, N});
  const Tensor E = Tensor(xe, {r, c}) * Tensor(xe, {~r, ~c});

  const Tensor Ye = U * Xe * page_transpose(V);
  const Tensor G = Tensor::scalar(2.0 / static_cast<double>(M * N)) *
                   ewise_unary(UnaryOp::imag, times(ewise_unary(UnaryOp::conj, Yt), Ye));

  SseResult out;
  out.sse = E.entries().real_at(0);
  out.gradient.resize(M * N);
  out.corrected.resize(M * N);
  for (std::size_t k = 0; k < M * N; ++k) {
    out.gradient[k] = G.entries().real_at(k);
    out.corrected[k] = Xt.entries().real_at(k);
  }
  return out;
}

}  // namespace rt::corona
