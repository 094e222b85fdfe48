#include "doctest.h"

#include <cmath>

#include "oracles.hpp"

using namespace rt;

TEST_CASE("transpose complements indices and is an involution") {
  std::mt19937_64 gen(1);
  const auto ij = Index::fresh_many(2);
  const Tensor t(oracle::random_array({2, 3, 4, 2}, gen, false, true), {ij[0], ~ij[1]});
  const Tensor tt = page_transpose(t);
  CHECK(tt.indices() == std::vector<Index>{~ij[0], ij[1]});
  CHECK(tt.entries().dims() == Dims{3, 2, 4, 2});
  CHECK(tt.entries().complex_at(1) == t.entries().complex_at(2));
  const Tensor back = page_transpose(tt);
  CHECK(back.indices() == t.indices());
  CHECK(oracle::exactly_equal(back.entries(), t.entries()));
  const Tensor ct = page_ctranspose(t);
  CHECK(ct.entries().complex_at(1) == std::conj(t.entries().complex_at(2)));
  CHECK(oracle::exactly_equal(page_ctranspose(ct).entries(), t.entries()));

  const Tensor r(oracle::random_array({2, 3, 4}, gen, false), {ij[0]});
  CHECK(equal_all({page_ctranspose(r), page_transpose(r)}));
}

TEST_CASE("ctranspose inner product is the squared norm") {
  std::mt19937_64 gen(2);
  const Index k = Index::fresh();
  const Tensor x(oracle::random_array({3, 1, 5}, gen, false, true), {~k});
  const Tensor s = page_ctranspose(x) * x;
  CHECK(s.degree() == 0);
  CHECK(s.entries().dims() == Dims{1, 1});
  double want = 0;
  for (std::size_t q = 0; q < 15; ++q) want += std::norm(x.entries().complex_at(q));
  CHECK(s.entries().complex_at(0).real() == doctest::Approx(want).epsilon(1e-14));
  CHECK(std::abs(s.entries().complex_at(0).imag()) < 1e-14);
}

TEST_CASE("trace") {
  const Index k = Index::fresh();
  std::vector<double> eyes;
  for (int p = 0; p < 4; ++p)
    for (int c = 0; c < 3; ++c)
      for (int r = 0; r < 3; ++r) eyes.push_back(r == c);
  const Tensor t = page_trace(Tensor(Array({3, 3, 4}, eyes), {k}));
  CHECK(t.indices() == std::vector<Index>{k});
  for (std::size_t p = 0; p < 4; ++p) CHECK(t.entries().real_at(p) == 3);
  CHECK_THROWS_AS(page_trace(Tensor::plain(Array::zeros({2, 3}))), DimMismatchError);
}

TEST_CASE("trace of a contraction equals the scalar contraction") {
  std::mt19937_64 gen(3);
  const Index i = Index::fresh();
  // C has 2x2 pages over (i, j); trace(C(i,~i)) sums the page diagonals over i == j.
  const Array c = oracle::random_array({2, 2, 3, 3}, gen, true);
  const Tensor t = page_trace(Tensor(c, {i, ~i}));
  double want = 0;
  for (std::size_t p = 0; p < 3; ++p)
    for (std::size_t r = 0; r < 2; ++r) want += c.real_at(r * 3 + 4 * (p * 4));
  CHECK(t.degree() == 0);
  CHECK(t.entries().real_at(0) == want);
}

TEST_CASE("diag recovers generating vectors") {
  std::mt19937_64 gen(4);
  const Index k = Index::fresh();
  const Array v = oracle::random_array({3, 1, 2}, gen, true);
  std::vector<double> m(18, 0.0);
  for (std::size_t p = 0; p < 2; ++p)
    for (std::size_t r = 0; r < 3; ++r) m[9 * p + 4 * r] = v.real_at(r + 3 * p);
  const Tensor d = page_diag(Tensor(Array({3, 3, 2}, m), {k}));
  CHECK(d.indices() == std::vector<Index>{k});
  CHECK(oracle::exactly_equal(d.entries(), v));
  CHECK(page_diag(Tensor::plain(Array::zeros({2, 5}))).entries().dims() == Dims{2, 1});
}

TEST_CASE("page_cat shapes") {
  std::mt19937_64 gen(5);
  const Array ones = Array::filled({3, 1}, 1.0);
  const Array c = oracle::random_array({3, 1, 4}, gen, false);
  const Array cols[] = {ones, c};
  const Array mc = page_cat(1, cols);
  CHECK(mc.dims() == Dims{3, 2, 4});
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t r = 0; r < 3; ++r) {
      CHECK(mc.real_at(r + 3 * (0 + 2 * p)) == 1);
      CHECK(mc.real_at(r + 3 * (1 + 2 * p)) == c.real_at(r + 3 * p));
    }
  const Array pages[] = {oracle::random_array({2, 2}, gen, false), oracle::random_array({2, 2, 3}, gen, false)};
  CHECK(page_cat(2, pages).dims() == Dims{2, 2, 4});
  const Array bad[] = {Array::zeros({2, 2}), Array::zeros({3, 3})};
  CHECK_THROWS_AS(page_cat(1, bad), DimMismatchError);
  const Array flags[] = {Array::booleans({1, 1}, {1}), Array::booleans({1, 1}, {0})};
  CHECK(page_cat(0, flags).kind() == Kind::boolean);
  const Array mixed[] = {Array::booleans({1, 1}, {1}), Array::scalar(cplx(0, 1))};
  CHECK(page_cat(0, mixed).kind() == Kind::complex);
}

TEST_CASE("matrix concatenation with implied outer products") {
  std::mt19937_64 gen(6);
  const Index i = Index::fresh(), j = Index::fresh();
  const std::size_t M = 3, N = 4;
  const Tensor c(oracle::random_array({M, 1, 5}, gen, false), {i});
  const std::vector<Tensor> cols{Tensor::plain(Array::filled({M, 1}, 1.0)), c};
  const Tensor mc = concat(MatrixAxis::cols, cols);
  CHECK(mc.indices() == std::vector<Index>{i});
  CHECK(mc.entries().dims() == Dims{M, 2, 5});

  const Tensor b(oracle::random_array({N, 1, 2}, gen, false), {j});
  const std::vector<Tensor> rows{page_transpose(b), Tensor::plain(Array::filled({1, N}, 1.0))};
  const Tensor mr = concat(MatrixAxis::rows, rows);
  CHECK(mr.indices() == std::vector<Index>{~j});
  CHECK(mr.entries().dims() == Dims{2, N, 2});
  CHECK(mr.entries().real_at(0) == b.entries().real_at(0));
  CHECK(mr.entries().real_at(1) == 1);
}

TEST_CASE("index concatenation matches the selector construction") {
  std::mt19937_64 gen(7);
  const auto ids = Index::fresh_many(3);
  const Index i = ids[0], j = ids[1], k = ids[2];
  const Tensor A(oracle::random_array({1, 1, 2, 3}, gen, true), {i, j});
  const Tensor B(oracle::random_array({1, 1, 3, 2}, gen, true), {j, k});
  const std::vector<Tensor> ops{A, B};
  const Tensor C = concat(j, ops);
  CHECK(C.indices() == std::vector<Index>{i, j, k});
  CHECK(C.tensor_dims() == Dims{2, 6, 2});
  CHECK(equal_all({C, oracle::concat_by_selectors(j, ops)}));

  const std::vector<Tensor> single{A};
  CHECK(equal_all({concat(j, single), A}));
  CHECK_THROWS_AS(concat(Index::fresh(), ops), UnknownIndexError);
}

TEST_CASE("index concatenation on random operands") {
  std::mt19937_64 gen(8);
  std::uniform_int_distribution<std::size_t> dim(1, 4), count(1, 3), deg(0, 2);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pool = Index::fresh_many(3);
    const Index j = pool[0];
    std::vector<std::size_t> size{0, dim(gen), dim(gen)};
    std::vector<Tensor> ops;
    const std::size_t n = count(gen);
    const std::size_t r = dim(gen), c = dim(gen);
    const bool matrix = coin(gen);
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Index> idx{j};
      oracle::Shape shape{matrix ? r : 1, matrix ? c : 1, dim(gen)};
      for (std::size_t extra = 1; extra < 3; ++extra)
        if (coin(gen)) {
          idx.push_back(pool[extra]);
          shape.push_back(size[extra]);
        }
      ops.emplace_back(oracle::random_array(shape, gen, true), idx);
    }
    CHECK(equal_all({concat(j, ops), oracle::concat_by_selectors(j, ops)}));
  }
}
