#include "rt/corona/checks.hpp"

#include <cmath>

#include "rt/corona/bench.hpp"

namespace rt::corona {

namespace {

RealField axpy(const RealField& x, double a, const RealField& d) {
  RealField out(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) out[k] = x[k] + a * d[k];
  return out;
}

bool same_mask(const MaskField& a, const MaskField& b) { return a == b; }

// A phase away from both zero and the true aberration.
RealField probe_phase(const Scene& s) {
  RealField phi = make_aberration(s.M, s.N, 991);
  for (auto& v : phi) v *= 0.3;
  return phi;
}

}  // namespace

CheckResult check_gradient(std::size_t M, std::size_t N, std::uint64_t seed,
                           std::size_t directions, double eps) {
  const Scene s = make_scene(M, N, seed);
  const Problem problem(M, N, s.aberrated, s.occulter);
  const RealField phi = probe_phase(s);
  const Evaluation at = problem.evaluate(phi, true);
  CheckResult res;
  for (std::uint64_t k = 0; res.cases < directions && k < 10 * directions; ++k) {
    const RealField d = make_aberration(M, N, seed * 1000 + k + 1);
    const Evaluation hi = problem.evaluate(axpy(phi, eps, d), false);
    const Evaluation lo = problem.evaluate(axpy(phi, -eps, d), false);
    if (!same_mask(hi.weights, at.weights) || !same_mask(lo.weights, at.weights)) {
      ++res.skipped;
      continue;
    }
    const double fd = (hi.sse - lo.sse) / (2 * eps);
    double analytic = 0;
    for (std::size_t i = 0; i < d.size(); ++i) analytic += at.gradient[i] * d[i];
    const double err = std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-300);
    res.max_rel_error = std::max(res.max_rel_error, err);
    ++res.cases;
  }
  return res;
}

CheckResult check_hess_mult(std::size_t M, std::size_t N, std::uint64_t seed, std::size_t pages,
                            double eps) {
  const Scene s = make_scene(M, N, seed);
  const Problem problem(M, N, s.aberrated, s.occulter);
  const RealField phi = probe_phase(s);
  const Evaluation at = problem.evaluate(phi, true);
  const std::size_t MN = M * N;
  CheckResult res;
  RealField dirs, fds;
  for (std::uint64_t k = 0; res.cases < pages && k < 10 * pages; ++k) {
    const RealField d = make_aberration(M, N, seed * 2000 + k + 1);
    const Evaluation hi = problem.evaluate(axpy(phi, eps, d), true);
    const Evaluation lo = problem.evaluate(axpy(phi, -eps, d), true);
    if (!same_mask(hi.weights, at.weights) || !same_mask(lo.weights, at.weights)) {
      ++res.skipped;
      continue;
    }
    dirs.insert(dirs.end(), d.begin(), d.end());
    for (std::size_t i = 0; i < MN; ++i) fds.push_back((hi.gradient[i] - lo.gradient[i]) / (2 * eps));
    ++res.cases;
  }
  // All pages in one call, and the stand-alone form as a second path.
  const RealField batched = problem.hess_mult(at, dirs, res.cases);
  const RealField standalone = hess_mult(at.corrected, dirs, res.cases, s.occulter, M, N);
  for (std::size_t p = 0; p < res.cases; ++p) {
    for (const RealField* f : {&batched, &standalone}) {
      double diff = 0, scale = 0;
      for (std::size_t i = p * MN; i < (p + 1) * MN; ++i) {
        diff = std::max(diff, std::abs(fds[i] - (*f)[i]));
        scale = std::max(scale, std::abs((*f)[i]));
      }
      res.max_rel_error = std::max(res.max_rel_error, diff / std::max(scale, 1e-300));
    }
  }
  return res;
}

double check_hess_linearity(std::size_t M, std::size_t N, std::uint64_t seed) {
  const Scene s = make_scene(M, N, seed);
  const Problem problem(M, N, s.aberrated, s.occulter);
  const Evaluation at = problem.evaluate(probe_phase(s), false);
  const RealField d1 = make_aberration(M, N, seed + 11), d2 = make_aberration(M, N, seed + 12);
  const double a = 0.7, b = -1.3;
  RealField mix(d1.size());
  for (std::size_t i = 0; i < mix.size(); ++i) mix[i] = a * d1[i] + b * d2[i];
  const RealField f1 = problem.hess_mult(at, d1, 1), f2 = problem.hess_mult(at, d2, 1);
  const RealField fm = problem.hess_mult(at, mix, 1);
  double diff = 0, scale = 0;
  for (std::size_t i = 0; i < fm.size(); ++i) {
    diff = std::max(diff, std::abs(fm[i] - a * f1[i] - b * f2[i]));
    scale = std::max({scale, std::abs(a * f1[i]), std::abs(b * f2[i])});
  }
  return diff / std::max(scale, 1e-300);
}

}  // namespace rt::corona
