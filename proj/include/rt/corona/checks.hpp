#pragma once

#include <cstdint>

#include "rt/corona/model.hpp"

namespace rt::corona {

struct CheckResult {
  double max_rel_error = 0;
  std::size_t cases = 0;
  std::size_t skipped = 0;  // directions rejected because a mask switched
};

/// Analytic directional derivatives of the SSE against central differences
/// along random antisymmetric directions.
CheckResult check_gradient(std::size_t M, std::size_t N, std::uint64_t seed,
                           std::size_t directions = 20, double eps = 1e-5);

/// Hessian-multiply pages against central differences of the gradient.
CheckResult check_hess_mult(std::size_t M, std::size_t N, std::uint64_t seed,
                            std::size_t pages = 3, double eps = 1e-5);

/// |F(a D1 + b D2) - a F(D1) - b F(D2)| relative to the largest term.
double check_hess_linearity(std::size_t M, std::size_t N, std::uint64_t seed);

}  // namespace rt::corona
