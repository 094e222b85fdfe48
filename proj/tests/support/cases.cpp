#include "cases.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rt/dsl.hpp"

namespace cases {

using oracle::Shape;
using rt::Index;
using rt::Tensor;

std::vector<ProductCase> product_cases(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  std::vector<ProductCase> out;
  for (std::size_t da = 0; da <= 3; ++da) {
    for (std::size_t db = 0; db <= 3; ++db) {
      for (std::size_t shared = 0; shared <= std::min(da, db); ++shared) {
        for (unsigned mask = 0; mask < (1u << shared); ++mask) {
          for (int shape = 0; shape < 4; ++shape) {
            for (int numeric = 0; numeric < 3; ++numeric) {
              // ids: shared first, then each operand's own
              std::vector<Index> ids = Index::fresh_many(da + db - shared);
              std::vector<std::size_t> size(ids.size());
              for (auto& s : size) s = dim(gen);
              std::vector<std::pair<Index, std::size_t>> ia, ib;
              for (std::size_t s = 0; s < shared; ++s) {
                const Index h = coin(gen) ? ids[s] : ~ids[s];
                const bool inner = (mask >> s) & 1u;
                ia.emplace_back(h, size[s]);
                ib.emplace_back(inner ? ~h : h, size[s]);
              }
              for (std::size_t k = shared; k < da; ++k)
                ia.emplace_back(coin(gen) ? ids[k] : ~ids[k], size[k]);
              for (std::size_t k = da; k < ids.size(); ++k)
                ib.emplace_back(coin(gen) ? ids[k] : ~ids[k], size[k]);
              std::shuffle(ia.begin(), ia.end(), gen);
              std::shuffle(ib.begin(), ib.end(), gen);

              const std::size_t r = dim(gen), k = dim(gen), c = dim(gen);
              Shape ma{r, k}, mb{k, c};
              if (shape == 1) ma = {1, 1};
              if (shape == 2) mb = {1, 1};
              if (shape == 3) ma = mb = {1, 1};
              auto build = [&](Shape m, const std::vector<std::pair<Index, std::size_t>>& l) {
                std::vector<Index> idx;
                for (const auto& [h, n] : l) {
                  m.push_back(n);
                  idx.push_back(h);
                }
                return Tensor(oracle::random_array(m, gen, numeric == 0, numeric == 2), idx);
              };
              ProductCase pc;
              pc.a = build(ma, ia);
              pc.b = build(mb, ib);
              pc.integers = numeric == 0;
              std::ostringstream label;
              label << "deg " << da << "x" << db << ", shared " << shared << " mask " << mask
                    << ", shape " << shape << ", numeric " << numeric;
              pc.label = label.str();
              out.push_back(std::move(pc));
            }
          }
        }
      }
    }
  }
  return out;
}

namespace {

// Compares two tensors by index identity: same ids with the same variants,
// entries equal after aligning `got` to `want`'s index order.
bool matches(const Tensor& got, const Tensor& want, double tol, std::string& why) {
  if (got.degree() != want.degree()) {
    why = "degree " + std::to_string(got.degree()) + " vs " + std::to_string(want.degree());
    return false;
  }
  for (const auto& h : want.indices()) {
    auto it = std::find_if(got.indices().begin(), got.indices().end(),
                           [&](const Index& g) { return g.same_id(h); });
    if (it == got.indices().end() || it->variant() != h.variant()) {
      why = "index " + h.debug_string() + " missing or of the other variant";
      return false;
    }
  }
  const double err = oracle::rel_error(oracle::entries_in_order(got, want.indices()),
                                       want.entries());
  if (!(err <= tol)) {
    why = "relative error " + std::to_string(err);
    return false;
  }
  return true;
}

Tensor vec(std::vector<double> v, Index h) {
  const std::size_t n = v.size();
  return Tensor(rt::Array({1, 1, n}, std::move(v)), {h});
}

struct Runner {
  rt::dsl::Environment env;
  std::vector<GoldenRow> rows;

  explicit Runner(std::uint64_t seed) : env(seed) {}

  Index ix(const char* name) { return env.index(name); }

  Tensor eval(const std::string& text) {
    rt::dsl::Value v;
    for (const auto& s : rt::dsl::parse_program(text)) v = rt::dsl::execute(s, env);
    return std::get<Tensor>(v);
  }

  // f returns an empty string on success.
  template <class F>
  void row(const std::string& name, const std::string& expr, F&& f) {
    GoldenRow r{name, expr, false, ""};
    try {
      r.detail = f();
      r.ok = r.detail.empty();
    } catch (const std::exception& e) {
      r.detail = std::string("threw: ") + e.what();
    }
    rows.push_back(std::move(r));
  }

  static std::string both(const Tensor& dsl, const Tensor& api, const Tensor& want, double tol) {
    std::string why;
    if (!matches(dsl, api, tol, why)) return "DSL vs API: " + why;
    if (!matches(api, want, tol, why)) return "API vs oracle: " + why;
    return {};
  }
};

}  // namespace

std::vector<GoldenRow> table4(std::uint64_t seed) {
  using namespace rt;
  Runner R(seed);
  std::mt19937_64 gen(seed);
  const Index i = R.ix("i"), j = R.ix("j"), k = R.ix("k"), l = R.ix("l"), lp = R.ix("lp");

  const Tensor a = vec({1, 2}, Index::fresh()), b = vec({3, 4}, Index::fresh()),
               c = vec({5, 6}, Index::fresh());
  R.env.set("a", a);
  R.env.set("b", b);
  R.env.set("c", c);

  R.row("Inner product, D1 scalar", "a(i)*b(i)*c(~i)", [&] {
    const Tensor got = R.eval("a(i)*b(i)*c(~i)");
    const Tensor api = reindex(a, {i}) * reindex(b, {i}) * reindex(c, {~i});
    const Tensor want = Tensor::scalar(1 * 3 * 5 + 2 * 4 * 6);
    return Runner::both(got, api, want, 0);
  });

  R.row("Inner product, reassociated", "b(i)*(a(~i)*c(~i))", [&] {
    const Tensor left = R.eval("a(i)*b(i)*c(~i)");
    const Tensor right = R.eval("b(i)*(a(~i)*c(~i))");
    return Runner::both(left, right, Tensor::scalar(63), 0);
  });

  R.row("Entrywise product, D1 scalar", "a(i)*b(i)*c(i)", [&] {
    const Tensor got = R.eval("a(i)*b(i)*c(i)");
    const Tensor api = reindex(a, {i}) * reindex(b, {i}) * reindex(c, {i});
    return Runner::both(got, api, vec({15, 48}, i), 0);
  });

  R.row("Outer product, D1 scalar", "a(i)*b(j)*c(k)", [&] {
    const Tensor got = R.eval("a(i)*b(j)*c(k)");
    const Tensor api = reindex(a, {i}) * reindex(b, {j}) * reindex(c, {k});
    std::vector<double> w(8);
    const double av[2] = {1, 2}, bv[2] = {3, 4}, cv[2] = {5, 6};
    for (int z = 0; z < 2; ++z)
      for (int y = 0; y < 2; ++y)
        for (int x = 0; x < 2; ++x) w[x + 2 * y + 4 * z] = av[x] * bv[y] * cv[z];
    return Runner::both(got, api, Tensor(Array({1, 1, 2, 2, 2}, w), {i, j, k}), 0);
  });

  const std::size_t n = 4;
  const Tensor y(oracle::random_array({1, 1, n, n}, gen, true), {Index::fresh(), Index::fresh()});
  R.env.set("y", y);

  R.row("Entrywise relation, D2 scalar", "y(i,~j) ~= y(~j,i)", [&] {
    const Tensor got = R.eval("y(i,~j) ~= y(~j,i)");
    const Tensor api = ewise_binary(BinaryOp::ne, reindex(y, {i, ~j}), reindex(y, {~j, i}));
    std::vector<std::uint8_t> w(n * n);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p = 0; p < n; ++p)
        w[p + n * q] = y.entries().real_at(p + n * q) != y.entries().real_at(q + n * p);
    return Runner::both(got, api, Tensor(Array::booleans({1, 1, n, n}, w), {i, ~j}), 0);
  });

  R.row("Permute and copy, D2 scalar", "z(i,~j) = y(~j,i)", [&] {
    const Tensor got = R.eval("z(i,~j) = y(~j,i)");
    const Tensor api = assign(Tensor(), {i, ~j}, reindex(y, {~j, i}));
    std::vector<double> w(n * n);
    for (std::size_t q = 0; q < n; ++q)
      for (std::size_t p = 0; p < n; ++p) w[p + n * q] = y.entries().real_at(q + n * p);
    const Tensor want(Array({1, 1, n, n}, w), {i, ~j});
    // Stored order matters for later positional references.
    if (got.indices() != std::vector<Index>{i, ~j}) return std::string("stored order differs");
    return Runner::both(got, api, want, 0);
  });

  const std::size_t L = 4, I = 3;
  Array Aarr = oracle::random_array({1, 1, L, L}, gen, false);
  for (std::size_t d = 0; d < L; ++d) Aarr.edit<double>()[d * (L + 1)] += 4.0;
  const Tensor A(Aarr, {Index::fresh(), Index::fresh()});
  const Tensor B(oracle::random_array({1, 1, I, L}, gen, false), {Index::fresh(), Index::fresh()});
  R.env.set("A", A);
  R.env.set("b2", B);

  R.row("Left division, D2 scalar", "u(i,~l) = A(l,lp)\\b2(i,lp)", [&] {
    const Tensor got = R.eval("u(i,~l) = A(l,lp)\\b2(i,lp)");
    const Tensor api = solve_left(reindex(A, {l, lp}), reindex(B, {i, lp}));
    std::string why;
    if (!matches(got, api, 1e-12, why)) return "DSL vs API: " + why;
    // Residual of sum_l A(l, lp) u(l, i) = b(i, lp), by loops.
    const Array u = oracle::entries_in_order(got, {~l, i});
    double res = 0, scale = 0;
    for (std::size_t q = 0; q < L; ++q)
      for (std::size_t p = 0; p < I; ++p) {
        double s = 0;
        for (std::size_t r = 0; r < L; ++r)
          s += A.entries().real_at(r + L * q) * u.real_at(r + L * p);
        res = std::max(res, std::abs(s - B.entries().real_at(p + I * q)));
        scale = std::max(scale, std::abs(B.entries().real_at(p + I * q)));
      }
    if (res / scale > 1e-10) return "residual " + std::to_string(res / scale);
    return std::string();
  });

  R.row("Mixed product, D2 scalar", "A(l,lp)*u(i,~l)", [&] {
    const Tensor got = R.eval("A(l,lp)*u(i,~l)");
    const Tensor u = *R.env.find("u");
    const Tensor api = reindex(A, {l, lp}) * reindex(u, {i, ~l});
    const Tensor want = oracle::product(reindex(A, {l, lp}), reindex(u, {i, ~l}));
    std::string detail = Runner::both(got, api, want, 1e-12);
    if (!detail.empty()) return detail;
    // And it reproduces the numerator.
    std::string why;
    if (!matches(api, reindex(B, {i, lp}), 1e-10, why)) return "reconstruction: " + why;
    return std::string();
  });

  const Tensor x = vec({0.5, 1.5, 2.5}, Index::fresh());
  R.env.set("x", x);
  R.row("Outer addition, D1 scalar", "log(c(j)+x(i))", [&] {
    const Tensor got = R.eval("log(c(j)+x(i))");
    const Tensor api = ewise_unary(UnaryOp::log,
                                   ewise_binary(BinaryOp::add, reindex(c, {j}), reindex(x, {i})));
    std::vector<double> w;
    for (double xi : {0.5, 1.5, 2.5})
      for (double cj : {5.0, 6.0}) w.push_back(std::log(cj + xi));
    return Runner::both(got, api, Tensor(Array({1, 1, 2, 3}, w), {j, i}), 1e-15);
  });

  const std::size_t P = 3, Q = 2;
  const Tensor Am(oracle::random_array({2, 3, P, Q}, gen, true), {Index::fresh(), Index::fresh()});
  const Tensor Bm(oracle::random_array({3, 2, P, Q}, gen, true), {Index::fresh(), Index::fresh()});
  R.env.set("Am", Am);
  R.env.set("Bm", Bm);
  R.row("Mixed product, D2 matrix", "Am(i,~j)*Bm(i,~j)", [&] {
    const Tensor got = R.eval("Am(i,~j)*Bm(i,~j)");
    const Tensor api = reindex(Am, {i, ~j}) * reindex(Bm, {i, ~j});
    const Tensor want = oracle::product(reindex(Am, {i, ~j}), reindex(Bm, {i, ~j}));
    return Runner::both(got, api, want, 0);
  });

  const Tensor C(oracle::random_array({3, 3, n, n}, gen, true), {Index::fresh(), Index::fresh()});
  R.env.set("C", C);
  R.row("Trace contraction, D2 matrix", "trace(C(i,~i))", [&] {
    const Tensor got = R.eval("trace(C(i,~i))");
    const Tensor api = page_trace(reindex(C, {i, ~i}));
    double t = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t r = 0; r < 3; ++r) t += C.entries().real_at(r * 4 + 9 * (p + n * p));
    return Runner::both(got, api, Tensor::scalar(t), 0);
  });

  R.row("Diagonal attraction, D2 matrix", "diag(C(i,i))", [&] {
    const Tensor got = R.eval("diag(C(i,i))");
    const Tensor api = page_diag(reindex(C, {i, i}));
    std::vector<double> w(3 * n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t r = 0; r < 3; ++r) w[r + 3 * p] = C.entries().real_at(r * 4 + 9 * (p + n * p));
    return Runner::both(got, api, Tensor(Array({3, 1, n}, w), {i}), 0);
  });

  const Tensor xv(oracle::random_array({3, 1, n}, gen, false, true), {Index::fresh()});
  R.env.set("xv", xv);
  R.row("Inner product, DN vector", "xv(~k)'*xv(~k)", [&] {
    const Tensor got = R.eval("xv(~k)'*xv(~k)");
    const Tensor api = page_ctranspose(reindex(xv, {~k})) * reindex(xv, {~k});
    double s = 0;
    for (std::size_t q = 0; q < xv.numel(); ++q) s += std::norm(xv.entries().complex_at(q));
    return Runner::both(got, api, Tensor::scalar(s), 1e-14);
  });

  const std::size_t M = 3, N = 2, J = 4;
  R.env.set("M", Tensor::scalar(M));
  R.env.set("N", Tensor::scalar(N));
  const Tensor cc(oracle::random_array({M, 1, n}, gen, false), {Index::fresh()});
  R.env.set("cc", cc);
  R.row("Col. concatenation, D1 vector", "[ones(M,1) abs(cc(i))]", [&] {
    const Tensor got = R.eval("[ones(M,1) abs(cc(i))]");
    const Tensor ones = Tensor::plain(Array::filled({M, 1}, 1.0));
    const std::vector<Tensor> ops{ones, ewise_unary(UnaryOp::abs, reindex(cc, {i}))};
    const Tensor api = concat(MatrixAxis::cols, ops);
    std::vector<double> w(M * 2 * n);
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t m = 0; m < M; ++m) {
        w[m + M * (0 + 2 * p)] = 1;
        w[m + M * (1 + 2 * p)] = std::abs(cc.entries().real_at(m + M * p));
      }
    return Runner::both(got, api, Tensor(Array({M, 2, n}, w), {i}), 0);
  });

  const Tensor bv(oracle::random_array({N, 1, J}, gen, false), {Index::fresh()});
  R.env.set("bv", bv);
  R.row("Row concatenation, D1 vector", "[bv(j).'; ones(1,N)]", [&] {
    const Tensor got = R.eval("[bv(j).'; ones(1,N)]");
    const std::vector<Tensor> ops{page_transpose(reindex(bv, {j})),
                                  Tensor::plain(Array::filled({1, N}, 1.0))};
    const Tensor api = concat(MatrixAxis::rows, ops);
    std::vector<double> w(2 * N * J);
    for (std::size_t q = 0; q < J; ++q)
      for (std::size_t m = 0; m < N; ++m) {
        w[0 + 2 * (m + N * q)] = bv.entries().real_at(m + N * q);
        w[1 + 2 * (m + N * q)] = 1;
      }
    return Runner::both(got, api, Tensor(Array({2, N, J}, w), {~j}), 0);
  });

  const Tensor Ar(oracle::random_array({M, N, n, J}, gen, false), {Index::fresh(), Index::fresh()});
  R.env.set("Ar", Ar);
  R.row("Outer relation, D1 vector", "Ar(i,~j) >= bv(j).'", [&] {
    const Tensor got = R.eval("Ar(i,~j) >= bv(j).'");
    const Tensor api = ewise_binary(BinaryOp::ge, reindex(Ar, {i, ~j}),
                                    page_transpose(reindex(bv, {j})));
    std::vector<std::uint8_t> w(M * N * n * J);
    for (std::size_t q = 0; q < J; ++q)
      for (std::size_t p = 0; p < n; ++p)
        for (std::size_t c2 = 0; c2 < N; ++c2)
          for (std::size_t m = 0; m < M; ++m) {
            const std::size_t o = m + M * (c2 + N * (p + n * q));
            w[o] = Ar.entries().real_at(o) >= bv.entries().real_at(c2 + N * q);
          }
    return Runner::both(got, api, Tensor(Array::booleans({M, N, n, J}, w), {i, ~j}), 0);
  });

  const Tensor Ac(oracle::random_array({1, 1, 2, 3}, gen, true), {Index::fresh(), Index::fresh()});
  const Tensor Bc(oracle::random_array({1, 1, 3, 2}, gen, true), {Index::fresh(), Index::fresh()});
  R.env.set("Ac", Ac);
  R.env.set("Bc", Bc);
  R.row("Index concat., D2 matrix", "cat(j,Ac(i,j),Bc(j,k))", [&] {
    const Tensor got = R.eval("cat(j,Ac(i,j),Bc(j,k))");
    const std::vector<Tensor> ops{reindex(Ac, {i, j}), reindex(Bc, {j, k})};
    const Tensor api = concat(j, ops);
    const Tensor want = oracle::concat_by_selectors(j, ops);
    if (got.index_dim(1) != 6) return std::string("j does not span 6");
    return Runner::both(got, api, want, 0);
  });

  R.row("isequal variant conflict", "isequal(x(i), x(~i))", [&] {
    rt::dsl::Value v;
    for (const auto& s : rt::dsl::parse_program("isequal(x(i), x(~i))")) v = rt::dsl::execute(s, R.env);
    if (!std::holds_alternative<bool>(v) || std::get<bool>(v)) return std::string("expected false");
    if (equal_all({reindex(x, {i}), reindex(x, {~i})})) return std::string("API returned true");
    for (const auto& s : rt::dsl::parse_program("isequal(x(i), x(i))")) v = rt::dsl::execute(s, R.env);
    if (!std::get<bool>(v)) return std::string("isequal(x(i), x(i)) is false");
    return std::string();
  });

  return R.rows;
}

}  // namespace cases
