#include "rt/corona/bench.hpp"

#include <chrono>
#include <ostream>

namespace rt::corona {

Scene make_scene(std::size_t M, std::size_t N, std::uint64_t seed) {
  Scene s;
  s.M = M;
  s.N = N;
  s.source = make_source(M, N);
  GroundTruth gt = make_ground_truth(s.source, M, N, TruthSpec::defaults(M, N));
  s.truth = std::move(gt.image);
  s.occulter = std::move(gt.occulter);
  s.phase = make_aberration(M, N, seed);
  s.aberrated = apply_phase(s.truth, s.phase, M, N);
  return s;
}

namespace {

template <class F>
BenchRow measure(std::size_t M, std::size_t N, const char* op, std::size_t reps, F&& f) {
  using clock = std::chrono::steady_clock;
  BenchRow row{M, N, op, 0, 0};
  f();  // warm-up, also fills caches
  const std::size_t base = MemoryStats::current();
  MemoryStats::reset_peak();
  f();
  row.bytes = MemoryStats::peak() - base;
  const auto t0 = clock::now();
  for (std::size_t r = 0; r < reps; ++r) f();
  row.secs = std::chrono::duration<double>(clock::now() - t0).count() / static_cast<double>(reps);
  return row;
}

}  // namespace

std::vector<BenchRow> benchmark(const std::vector<std::pair<std::size_t, std::size_t>>& sizes,
                                std::size_t reps, std::uint64_t seed) {
  std::vector<BenchRow> rows;
  for (const auto& [M, N] : sizes) {
    const Scene scene = make_scene(M, N, seed);
    const RealField phi(M * N, 0.0);
    const RealField directions = [&] {
      RealField d = make_aberration(M, N, seed + 1);
      RealField e = make_aberration(M, N, seed + 2);
      d.insert(d.end(), e.begin(), e.end());
      return d;
    }();
    // Each call is self-contained: it transforms the aberrated image too.
    rows.push_back(measure(M, N, "sse", reps, [&] {
      return sse(phi, scene.aberrated, scene.occulter, M, N, false).sse;
    }));
    rows.push_back(measure(M, N, "sse_grad", reps, [&] {
      return sse(phi, scene.aberrated, scene.occulter, M, N, true).sse;
    }));
    const RealField corrected = sse(phi, scene.aberrated, scene.occulter, M, N, false).corrected;
    rows.push_back(measure(M, N, "hmf", reps, [&] {
      return hess_mult(corrected, directions, 2, scene.occulter, M, N).size();
    }));
  }
  return rows;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
  out << "M,N,op,secs,bytes\n";
  for (const auto& r : rows)
    out << r.M << "," << r.N << "," << r.op << "," << r.secs << "," << r.bytes << "\n";
}

}  // namespace rt::corona
