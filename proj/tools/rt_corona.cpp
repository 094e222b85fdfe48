// rt-corona: synthesize, solve and benchmark the coronagraph phase model.
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "rt/corona/bench.hpp"
#include "rt/corona/checks.hpp"
#include "rt/corona/io.hpp"
#include "rt/corona/optimize.hpp"

namespace fs = std::filesystem;
using namespace rt::corona;

namespace {

int synth(std::size_t size, std::uint64_t seed, const fs::path& dir, bool square) {
  fs::create_directories(dir);
  const Scene s = make_scene(size, size, seed);
  RealField mask(s.occulter.begin(), s.occulter.end());
  write_pgm((dir / "source.pgm").string(), s.source, s.M, s.N, square);
  write_pgm((dir / "ground_truth.pgm").string(), s.truth, s.M, s.N, square);
  write_pgm((dir / "mask.pgm").string(), mask, s.M, s.N);
  write_pgm((dir / "aberrated.pgm").string(), s.aberrated, s.M, s.N, square);
  // The PGM clamps negative pixels; solve reads this exact copy.
  write_csv((dir / "aberrated.csv").string(), s.aberrated, s.M, s.N);
  write_csv((dir / "phase_true.csv").string(), s.phase, s.M, s.N);
  std::cout << "wrote " << s.M << "x" << s.N << " scene to " << dir.string() << "\n";
  return 0;
}

int solve(const fs::path& in, const fs::path& out, std::size_t max_iter, double grad_tol,
          bool square) {
  std::size_t M = 0, N = 0, mM = 0, mN = 0;
  const fs::path csv = in / "aberrated.csv";
  RealField aberrated = fs::exists(csv) ? read_csv(csv.string(), M, N)
                                        : read_pgm((in / "aberrated.pgm").string(), M, N);
  const RealField mask = read_pgm((in / "mask.pgm").string(), mM, mN);
  if (mM != M || mN != N) {
    std::cerr << "mask is " << mM << "x" << mN << " but image is " << M << "x" << N << "\n";
    return 1;
  }
  MaskField occulter(mask.size());
  for (std::size_t k = 0; k < mask.size(); ++k) occulter[k] = mask[k] > 0.5;

  OptOptions opts;
  opts.max_iter = max_iter;
  opts.grad_tol = grad_tol;
  const Problem problem(M, N, std::move(aberrated), std::move(occulter));
  const OptReport rep = optimize(problem, opts);

  fs::create_directories(out);
  write_pgm((out / "corrected.pgm").string(), rep.corrected, M, N, square);
  write_csv((out / "phase.csv").string(), rep.phase, M, N);
  std::ofstream report(out / "report.csv");
  report << "step,sse,grad_max,secs\n";
  report.precision(17);
  for (std::size_t k = 0; k < rep.sse.size(); ++k)
    report << k << "," << rep.sse[k] << "," << rep.grad_norms[k] << "," << rep.wall_times[k]
           << "\n";
  std::cout << "iterations " << rep.iterations << ", accepted " << rep.sse.size() - 1
            << ", sse " << rep.sse.front() << " -> " << rep.sse.back() << " ("
            << rep.stop_reason << "), hessian pages " << rep.hess_pages << ", peak bytes "
            << rep.peak_bytes << "\n";
  return 0;
}

int check(std::uint64_t seed) {
  const auto g = check_gradient(8, 8, seed);
  const auto h = check_hess_mult(8, 8, seed);
  const double lin = check_hess_linearity(8, 8, seed);
  const bool ok_g = g.cases == 20 && g.max_rel_error <= 1e-6;
  const bool ok_h = h.cases == 3 && h.max_rel_error <= 1e-5;
  const bool ok_l = lin <= 1e-12;
  std::cout << (ok_g ? "PASS" : "FAIL") << " gradient vs central differences: max rel error "
            << g.max_rel_error << " over " << g.cases << " directions\n";
  std::cout << (ok_h ? "PASS" : "FAIL") << " hessian-multiply vs gradient differences: max rel error "
            << h.max_rel_error << " over " << h.cases << " pages\n";
  std::cout << (ok_l ? "PASS" : "FAIL") << " hessian-multiply linearity: " << lin << "\n";
  return ok_g && ok_h && ok_l ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coronagraph phase-aberration correction"};
  app.require_subcommand(1);

  std::size_t size = 401;
  std::uint64_t seed = 7;
  std::string out_dir = "out", in_dir = "out";
  bool square = false;
  auto* s = app.add_subcommand("synth", "Write source, ground truth, mask and aberrated images");
  s->add_option("--size", size, "Image side length")->check(CLI::Range(16, 1 << 14));
  s->add_option("--seed", seed, "Aberration seed");
  s->add_option("--out", out_dir, "Output directory");
  s->add_flag("--square", square, "Square pixel values in the PGM images");

  std::size_t max_iter = 200;
  double grad_tol = 1e-12;
  std::string solve_out = "out";
  auto* v = app.add_subcommand("solve", "Estimate the phase and write the corrected image");
  v->add_option("--in", in_dir, "Directory written by synth")->check(CLI::ExistingDirectory);
  v->add_option("--max-iter", max_iter, "Iteration limit");
  v->add_option("--grad-tol", grad_tol, "Stop when the gradient max-norm falls below this");
  v->add_option("--out", solve_out, "Output directory");
  v->add_flag("--square", square, "Square pixel values in corrected.pgm");

  std::vector<std::size_t> sizes{64, 128, 256, 512};
  std::size_t reps = 5;
  std::string bench_out = "bench.csv";
  auto* b = app.add_subcommand("bench", "Time SSE, SSE with gradient and Hessian-multiply");
  b->add_option("--sizes", sizes, "Square sizes")->delimiter(',');
  b->add_option("--reps", reps, "Repetitions per measurement")->check(CLI::PositiveNumber);
  b->add_option("--out", bench_out, "CSV path, or - for stdout");

  std::uint64_t check_seed = 3;
  auto* c = app.add_subcommand("check", "Finite-difference checks of gradient and Hessian");
  c->add_option("--seed", check_seed, "Instance seed");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*s) return synth(size, seed, out_dir, square);
    if (*v) return solve(in_dir, solve_out, max_iter, grad_tol, square);
    if (*c) return check(check_seed);
    std::vector<std::pair<std::size_t, std::size_t>> dims;
    for (auto n : sizes) dims.emplace_back(n, n);
    const auto rows = benchmark(dims, reps);
    if (bench_out == "-") {
      write_bench_csv(std::cout, rows);
    } else {
      std::ofstream f(bench_out);
      write_bench_csv(f, rows);
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
