#include "rt/corona/optimize.hpp"

#include <chrono>
#include <cmath>

namespace rt::corona {

namespace {

double dot(const RealField& a, const RealField& b) {
  double s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

double max_abs(const RealField& a) {
  double m = 0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

// Largest tau >= 0 with |z + tau d| = radius.
double to_boundary(const RealField& z, const RealField& d, double radius) {
  const double a = dot(d, d), b = 2 * dot(z, d), c = dot(z, z) - radius * radius;
  return (-b + std::sqrt(std::max(b * b - 4 * a * c, 0.0))) / (2 * a);
}

struct Step {
  RealField p;
  double model = 0;  // predicted change g.p + p.Hp / 2
  bool boundary = false;
};

Step steihaug(const Problem& problem, const Evaluation& at, const RealField& g, double radius,
              const OptOptions& opts, std::size_t& pages) {
  const std::size_t n = g.size();
  Step s;
  s.p.assign(n, 0.0);
  RealField r = g, d(n);
  for (std::size_t k = 0; k < n; ++k) d[k] = -g[k];
  double rr = dot(r, r);
  const double gnorm = std::sqrt(rr);
  const double tol = std::min(0.5, std::sqrt(gnorm)) * gnorm;
  for (std::size_t it = 0; it < opts.max_cg; ++it) {
    const RealField Bd = problem.hess_mult(at, d, 1);
    ++pages;
    const double dBd = dot(d, Bd);
    if (dBd <= 0) {
      const double tau = to_boundary(s.p, d, radius);
      s.model += tau * dot(r, d) + 0.5 * tau * tau * dBd;
      for (std::size_t k = 0; k < n; ++k) s.p[k] += tau * d[k];
      s.boundary = true;
      return s;
    }
    const double alpha = rr / dBd;
    RealField next(n);
    for (std::size_t k = 0; k < n; ++k) next[k] = s.p[k] + alpha * d[k];
    if (std::sqrt(dot(next, next)) >= radius) {
      const double tau = to_boundary(s.p, d, radius);
      s.model += tau * dot(r, d) + 0.5 * tau * tau * dBd;
      for (std::size_t k = 0; k < n; ++k) s.p[k] += tau * d[k];
      s.boundary = true;
      return s;
    }
    s.p = std::move(next);
    s.model -= 0.5 * alpha * rr;
    for (std::size_t k = 0; k < n; ++k) r[k] += alpha * Bd[k];
    const double rr_next = dot(r, r);
    if (std::sqrt(rr_next) < tol) return s;
    const double beta = rr_next / rr;
    rr = rr_next;
    for (std::size_t k = 0; k < n; ++k) d[k] = -r[k] + beta * d[k];
  }
  return s;
}

}  // namespace

OptReport optimize(const Problem& problem, const OptOptions& opts) {
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const std::size_t base_bytes = MemoryStats::current();
  MemoryStats::reset_peak();
  auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

  OptReport rep;
  RealField phi(problem.size(), 0.0);
  Evaluation cur = problem.evaluate(phi, true);
  rep.sse.push_back(cur.sse);
  rep.grad_norms.push_back(max_abs(cur.gradient));
  rep.wall_times.push_back(elapsed());
  double radius = opts.initial_radius;

  while (true) {
    if (rep.grad_norms.back() <= opts.grad_tol || cur.sse == 0) {
      rep.stop_reason = "gradient tolerance";
      break;
    }
    if (rep.iterations >= opts.max_iter) {
      rep.stop_reason = "iteration limit";
      break;
    }
    if (radius < opts.min_radius) {
      rep.stop_reason = "trust region collapsed";
      break;
    }
    ++rep.iterations;
    Step step = steihaug(problem, cur, cur.gradient, radius, opts, rep.hess_pages);
    RealField trial(phi.size());
    for (std::size_t k = 0; k < phi.size(); ++k) trial[k] = phi[k] + step.p[k];
    Evaluation next = problem.evaluate(trial, true);
    const double predicted = -step.model;
    const double rho = predicted > 0 ? (cur.sse - next.sse) / predicted : -1.0;
    if (rho < 0.25)
      radius *= 0.25;
    else if (rho > 0.75)
      radius = std::min(2 * radius, opts.max_radius);
    if (rho > opts.eta && next.sse < cur.sse) {
      phi = std::move(trial);
      cur = std::move(next);
      rep.sse.push_back(cur.sse);
      rep.grad_norms.push_back(max_abs(cur.gradient));
      rep.wall_times.push_back(elapsed());
    }
  }
  rep.peak_bytes = MemoryStats::peak() - base_bytes;
  rep.phase = std::move(phi);
  rep.corrected = std::move(cur.corrected);
  return rep;
}

}  // namespace rt::corona
