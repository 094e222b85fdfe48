#include "doctest.h"

#include <Eigen/Dense>

#include "cases.hpp"
#include "oracles.hpp"

using namespace rt;

namespace {

bool same(const Tensor& got, const Tensor& want, double tol) {
  if (got.degree() != want.degree()) return false;
  for (const auto& h : want.indices()) {
    const auto p = got.position_of(h);
    if (!p || got.indices()[*p] != h) return false;
  }
  const Array g = oracle::entries_in_order(got, want.indices());
  return tol == 0 ? oracle::exactly_equal(g, want.entries())
                  : oracle::rel_error(g, want.entries()) <= tol;
}

}  // namespace

TEST_CASE("align2 classifies ids by variant") {
  const auto ids = Index::fresh_many(3);
  const Index i = ids[0], r = ids[1], t = ids[2];
  const std::vector<Index> a{i, ~r}, b{r, t, i};
  const AlignmentPlan2 plan = align2(a, b);
  CHECK(plan.inner == std::vector<Index>{~r});
  CHECK(plan.pages == std::vector<Index>{i});
  CHECK(plan.left_outer.empty());
  CHECK(plan.right_outer == std::vector<Index>{t});
  CHECK(plan.a_inner == std::vector<std::size_t>{1});
  CHECK(plan.b_inner == std::vector<std::size_t>{0});
  CHECK(plan.result_indices() == std::vector<Index>{t, i});

  const Index j = Index::fresh(), k = Index::fresh();
  const std::vector<Index> one{j}, other{k};
  const auto outer = align2(one, other);
  CHECK(outer.left_outer == one);
  CHECK(outer.right_outer == other);
  const auto paged = align2(std::vector<Index>{k}, std::vector<Index>{k});
  CHECK(paged.pages == std::vector<Index>{k});
  CHECK(paged.inner.empty());
}

TEST_CASE("lattice round trip") {
  std::mt19937_64 gen(1);
  const Array a = oracle::random_array({100, 100, 10}, gen, true);
  LatticeMap map;
  map.row_axes = {0};
  map.col_axes = {1};
  map.page_axes = {2};
  const Lattice L = to_lattice(a, map, Side::left);
  CHECK(L.data.dims() == Dims{100, 100, 10});
  CHECK(L.data.same_storage(a));
  const std::size_t order[] = {0, 1, 2};
  CHECK(oracle::exactly_equal(from_lattice(L, order), a));

  // Degree-two scalar 1 x 1 x M x N with the second id inner: N rows per page.
  const Array s = oracle::random_array({1, 1, 3, 4}, gen, true);
  LatticeMap sm;
  sm.row_axes = {3};
  sm.col_axes = {0, 1};
  sm.page_axes = {2};
  const Lattice S = to_lattice(s, sm, Side::right);
  CHECK(S.data.dims() == Dims{4, 1, 3});
  for (std::size_t m = 0; m < 3; ++m)
    for (std::size_t n = 0; n < 4; ++n) CHECK(S.data.real_at(n + 4 * m) == s.real_at(m + 3 * n));
}

TEST_CASE("product: the running inner product is 63") {
  const Index i = Index::fresh();
  const Tensor a(Array({1, 1, 2}, std::vector<double>{1, 2}), {i});
  const Tensor b(Array({1, 1, 2}, std::vector<double>{3, 4}), {i});
  const Tensor c(Array({1, 1, 2}, std::vector<double>{5, 6}), {~i});
  const Tensor x = a * b * c;
  CHECK(x.degree() == 0);
  CHECK(x.entries().real_at(0) == 63);
  CHECK((b * (Tensor(a.entries(), {~i}) * c)).entries().real_at(0) == 63);
}

TEST_CASE("product: outer table") {
  const Index i = Index::fresh(), j = Index::fresh();
  const Tensor a(Array({1, 1, 2}, std::vector<double>{1, 2}), {i});
  const Tensor b(Array({1, 1, 2}, std::vector<double>{3, 4}), {j});
  const Tensor z = a * b;
  CHECK(z.indices() == std::vector<Index>{i, j});
  CHECK(z.entries().real_at(0) == 3);
  CHECK(z.entries().real_at(1) == 6);
  CHECK(z.entries().real_at(2) == 4);
  CHECK(z.entries().real_at(3) == 8);
}

TEST_CASE("product: paged matrices multiply per page") {
  std::mt19937_64 gen(2);
  const Index k = Index::fresh();
  const Tensor A(oracle::random_array({3, 4, 5}, gen, false), {k});
  const Tensor B(oracle::random_array({4, 2, 5}, gen, false), {k});
  const Tensor C = A * B;
  CHECK(C.entries().dims() == Dims{3, 2, 5});
  for (std::size_t p = 0; p < 5; ++p) {
    Eigen::Map<const Eigen::MatrixXd> a(A.entries().view<double>().data() + 12 * p, 3, 4);
    Eigen::Map<const Eigen::MatrixXd> b(B.entries().view<double>().data() + 8 * p, 4, 2);
    Eigen::Map<const Eigen::MatrixXd> c(C.entries().view<double>().data() + 6 * p, 3, 2);
    CHECK((a * b - c).cwiseAbs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("product: every variant pattern matches the loop oracle") {
  std::size_t n = 0;
  for (const auto& c : cases::product_cases(99)) {
    INFO(c.label);
    CHECK(same(product(c.a, c.b), oracle::product(c.a, c.b), c.integers ? 0.0 : 1e-12));
    ++n;
  }
  CHECK(n >= 500);
}

TEST_CASE("product: mismatched sizes") {
  const Index k = Index::fresh();
  CHECK_THROWS_AS(product(Tensor(Array::zeros({1, 1, 2}), {k}), Tensor(Array::zeros({1, 1, 3}), {k})),
                  DimMismatchError);
  CHECK_THROWS_AS(product(Tensor::plain(Array::zeros({2, 3})), Tensor::plain(Array::zeros({2, 3}))),
                  DimMismatchError);
}

TEST_CASE("solve_left: worked example") {
  const Index l = Index::fresh(), lp = Index::fresh();
  const Tensor A(Array({1, 1, 2, 2}, std::vector<double>{2, 0, 0, 4}), {l, lp});
  const Tensor b(Array({1, 1, 2}, std::vector<double>{6, 8}), {lp});
  const Tensor u = solve_left(A, b);
  REQUIRE(u.indices() == std::vector<Index>{~l});
  CHECK(u.entries().real_at(0) == doctest::Approx(3));
  CHECK(u.entries().real_at(1) == doctest::Approx(2));
}

TEST_CASE("solve_left: identity relabels the numerator") {
  const Index l = Index::fresh(), lp = Index::fresh(), i = Index::fresh();
  std::vector<double> eye(9, 0.0);
  eye[0] = eye[4] = eye[8] = 1;
  std::mt19937_64 gen(3);
  const Tensor b(oracle::random_array({1, 1, 2, 3}, gen, true), {i, lp});
  const Tensor u = solve_left(Tensor(Array({1, 1, 3, 3}, eye), {l, lp}), b);
  CHECK(same(u, Tensor(b.entries(), {i, ~l}), 0));
}

TEST_CASE("solve_left: residual on paged random systems") {
  std::mt19937_64 gen(4);
  const Index l = Index::fresh(), lp = Index::fresh(), i = Index::fresh(), p = Index::fresh();
  Array a = oracle::random_array({1, 1, 4, 4, 3}, gen, false);
  for (std::size_t q = 0; q < 3; ++q)
    for (std::size_t d = 0; d < 4; ++d) a.edit<double>()[16 * q + 5 * d] += 4;
  const Tensor b(oracle::random_array({1, 1, 2, 4, 3}, gen, false), {i, lp, p});
  const Tensor u = solve_left(Tensor(a, {l, lp, ~p}), b);
  CHECK(u.indices()[*u.position_of(l)] == ~l);
  CHECK(u.indices()[*u.position_of(p)] == p);
  const Tensor back = Tensor(a, {l, lp, p}) * permute(u, {i, ~l, p});
  CHECK(same(back, b, 1e-10));
}

TEST_CASE("matrix division") {
  std::mt19937_64 gen(5);
  Array a = oracle::random_array({3, 3}, gen, false);
  for (std::size_t d = 0; d < 3; ++d) a.edit<double>()[4 * d] += 3;
  const Tensor A = Tensor::plain(a);
  const Tensor B = Tensor::plain(oracle::random_array({3, 2}, gen, false));
  CHECK(oracle::rel_error((A * solve_left(A, B)).entries(), B.entries()) < 1e-12);
  const Tensor R = Tensor::plain(oracle::random_array({2, 3}, gen, false));
  CHECK(oracle::rel_error((solve_right(R, A) * A).entries(), R.entries()) < 1e-12);
  // A scalar denominator scales.
  const Tensor two = Tensor::scalar(2);
  CHECK(solve_left(two, B).entries().real_at(1) == doctest::Approx(B.entries().real_at(1) / 2));
  CHECK(solve_right(B, two).entries().real_at(1) == doctest::Approx(B.entries().real_at(1) / 2));
}

TEST_CASE("solve_right mirrors solve_left") {
  std::mt19937_64 gen(6);
  const Index l = Index::fresh(), lp = Index::fresh(), i = Index::fresh();
  Array a = oracle::random_array({1, 1, 3, 3}, gen, false);
  for (std::size_t d = 0; d < 3; ++d) a.edit<double>()[4 * d] += 3;
  const Tensor b(oracle::random_array({1, 1, 2, 3}, gen, false), {i, lp});
  // b(i,lp) / A(lp,l): solves u(i,~l) A(lp... ) with lp contracted.
  const Tensor u = solve_right(b, Tensor(a, {l, lp}));
  CHECK(u.indices()[*u.position_of(l)] == ~l);
  const Tensor back = permute(u, {i, ~l}) * Tensor(a, {l, lp});
  CHECK(same(back, b, 1e-10));
}

TEST_CASE("tall pages solve in the least-squares sense") {
  std::mt19937_64 gen(7);
  const Array a = oracle::random_array({5, 3}, gen, false);
  const Array b = oracle::random_array({5, 2}, gen, false);
  const Tensor x = solve_left(Tensor::plain(a), Tensor::plain(b));
  Eigen::Map<const Eigen::MatrixXd> A(a.view<double>().data(), 5, 3), B(b.view<double>().data(), 5, 2);
  Eigen::Map<const Eigen::MatrixXd> X(x.entries().view<double>().data(), 3, 2);
  // Normal equations hold at the least-squares solution.
  CHECK((A.transpose() * (A * X - B)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("division errors") {
  const Index k = Index::fresh();
  std::vector<double> pages{1, 2, 3, 4, 1, 2, 2, 4};  // second page singular
  const Tensor A(Array({2, 2, 2}, pages), {~k});
  const Tensor B(Array({2, 1, 2}, std::vector<double>{1, 1, 1, 1}), {k});
  try {
    (void)solve_left(A, B);
    FAIL("expected SingularPageError");
  } catch (const SingularPageError& e) {
    CHECK(e.page() == 1);
  }
  CHECK_THROWS_AS(solve_left(Tensor::plain(Array::filled({2, 3}, 1.0)),
                             Tensor::plain(Array::filled({2, 1}, 1.0))),
                  DimMismatchError);
  CHECK_THROWS_AS(solve_left(Tensor::plain(Array::filled({3, 3}, 1.0)),
                             Tensor::plain(Array::filled({2, 1}, 1.0))),
                  DimMismatchError);
}
