#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "rt/corona/model.hpp"

namespace rt::corona {

struct BenchRow {
  std::size_t M = 0, N = 0;
  std::string op;       // sse, sse_grad or hmf
  double secs = 0;      // mean wall time per call
  std::size_t bytes = 0;  // accounted peak bytes during one call
};

/// A synthetic aberrated instance with default truth parameters.
struct Scene {
  std::size_t M = 0, N = 0;
  RealField source, truth, phase, aberrated;
  MaskField occulter;
};
Scene make_scene(std::size_t M, std::size_t N, std::uint64_t seed);

/// Times SSE, SSE with gradient and the Hessian-multiply with two pages.
std::vector<BenchRow> benchmark(const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                std::size_t reps, std::uint64_t seed = 7);

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows);

}  // namespace rt::corona
