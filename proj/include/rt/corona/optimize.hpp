#pragma once

#include <string>
#include <vector>

#include "rt/corona/model.hpp"

namespace rt::corona {

struct OptOptions {
  std::size_t max_iter = 200;
  double grad_tol = 1e-12;  // on the max-norm of the gradient
  double initial_radius = 1.0;
  double max_radius = 1e4;
  double min_radius = 1e-12;
  double eta = 1e-4;            // acceptance threshold on the reduction ratio
  std::size_t max_cg = 100;     // Hessian pages per subproblem
};

struct OptReport {
  std::size_t iterations = 0;
  std::vector<double> sse;         // initial value, then one entry per accepted step
  std::vector<double> grad_norms;  // max-norm, aligned with sse
  std::vector<double> wall_times;  // seconds since start, aligned with sse
  std::size_t hess_pages = 0;
  std::size_t peak_bytes = 0;
  std::string stop_reason;
  RealField phase;
  RealField corrected;
};

/// Minimizes the SSE over Phi from Phi = 0 with Steihaug's truncated CG
/// inside a trust region. Each CG iteration applies one Hessian page.
OptReport optimize(const Problem& problem, const OptOptions& opts = {});

}  // namespace rt::corona
