#include "doctest.h"

#include "oracles.hpp"

using namespace rt;

namespace {

Tensor vec(std::vector<double> v, Index h) {
  const std::size_t n = v.size();
  return Tensor(Array({1, 1, n}, std::move(v)), {h});
}

// z_{ijk} = a_i b_j c_k for the running example.
Tensor example_outer() {
  std::vector<double> w;
  for (double c : {5, 6})
    for (double b : {3, 4})
      for (double a : {1, 2}) w.push_back(a * b * c);
  return Tensor(Array({1, 1, 2, 2, 2}, w), Index::fresh_many(3));
}

}  // namespace

TEST_CASE("array dims are canonical") {
  CHECK(Array({3, 4, 1, 1}, std::vector<double>(12)).dims() == Dims{3, 4});
  CHECK(Array({5}, std::vector<double>(5)).dims() == Dims{5, 1});
  CHECK(Array({2, 1, 3, 1}, std::vector<double>(6)).dims() == Dims{2, 1, 3});
  CHECK(Array({2, 2}, std::vector<double>(4)).dim(7) == 1);
  CHECK_THROWS_AS(Array({2, 2}, std::vector<double>(3)), DimMismatchError);
}

TEST_CASE("array storage is copied on write") {
  Array a({2, 1}, std::vector<double>{1, 2});
  Array b = a;
  CHECK(a.same_storage(b));
  b.edit<double>()[0] = 9;
  CHECK_FALSE(a.same_storage(b));
  CHECK(a.real_at(0) == 1);
  CHECK(b.real_at(0) == 9);
}

TEST_CASE("from_array and with_indices") {
  auto [t, idx] = Tensor::from_array(Array::zeros({100, 100, 10}));
  CHECK(t.degree() == 1);
  CHECK(idx.size() == 1);
  CHECK(idx[0].variant());
  CHECK(Tensor::from_array(Array::zeros({4, 4})).first.degree() == 0);
  CHECK(Tensor::from_array(Array::zeros({2, 2, 3, 5})).first.degree() == 2);

  const Index k = Index::fresh();
  CHECK(Tensor(Array::zeros({3, 1, 5}), {k}).tensor_dims() == Dims{5});
  const Tensor padded(Array::zeros({3, 3}), {k});
  CHECK(padded.degree() == 1);
  CHECK(padded.index_dim(0) == 1);
  CHECK_THROWS_AS(Tensor(Array::zeros({2, 2, 3}), {}), IndexArityError);
}

TEST_CASE("reindex contracts and attracts the running example") {
  const Index i = Index::fresh();
  const Tensor z = example_outer();
  const Tensor x = reindex(z, {i, i, ~i});
  CHECK(x.degree() == 0);
  CHECK(x.entries().real_at(0) == 63);

  const Tensor y = reindex(z, {i, i, i});
  REQUIRE(y.indices() == std::vector<Index>{i});
  CHECK(y.entries().real_at(0) == 15);
  CHECK(y.entries().real_at(1) == 48);

  const auto ij = Index::fresh_many(2);
  const Tensor t(Array({1, 1, 2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6}), Index::fresh_many(2));
  const Tensor r = reindex(t, ij);
  CHECK(r.indices() == ij);
  CHECK(oracle::exactly_equal(r.entries(), t.entries()));
}

TEST_CASE("simplify matches a brute-force diagonal and trace") {
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<std::size_t> dim(1, 5), pick(0, 2), deg(1, 4);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 300; ++trial) {
    const auto pool = Index::fresh_many(3);
    const std::size_t d = deg(gen);
    std::vector<std::size_t> size_of(3);
    for (auto& s : size_of) s = dim(gen);
    std::vector<Index> idx;
    oracle::Shape shape{trial % 3 == 0 ? std::size_t{2} : std::size_t{1}, 1};
    for (std::size_t k = 0; k < d; ++k) {
      const std::size_t p = pick(gen);
      idx.push_back(coin(gen) ? pool[p] : ~pool[p]);
      shape.push_back(size_of[p]);
    }
    const Tensor t(oracle::random_array(shape, gen, true), idx);
    const Tensor got = simplify(t), want = oracle::simplify(t);
    REQUIRE(got.degree() == want.degree());
    CHECK(oracle::exactly_equal(oracle::entries_in_order(got, want.indices()), want.entries()));
    for (std::size_t k = 0; k < want.degree(); ++k)
      CHECK(got.indices()[*got.position_of(want.indices()[k])] == want.indices()[k]);
  }
}

TEST_CASE("simplify leaves unique ids alone") {
  const auto ij = Index::fresh_many(2);
  const Tensor t(Array({1, 1, 2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6}), {ij[0], ~ij[1]});
  const Tensor s = simplify(t);
  CHECK(s.indices() == t.indices());
  CHECK(s.entries().same_storage(t.entries()));
}

TEST_CASE("repeated ids must agree in size") {
  const Index i = Index::fresh();
  CHECK_THROWS_AS(simplify(Tensor(Array::zeros({1, 1, 2, 3}), {i, i})), DimMismatchError);
}

TEST_CASE("sum") {
  const Index i = Index::fresh(), k = Index::fresh();
  const Tensor y = vec({15, 48}, i);
  const Tensor s = sum(y, {~i});
  CHECK(s.degree() == 0);
  CHECK(s.entries().real_at(0) == 63);
  CHECK(oracle::exactly_equal(sum(y, {}).entries(), y.entries()));
  const Tensor same = sum(y, {k});
  CHECK(same.indices() == y.indices());
  CHECK(oracle::exactly_equal(same.entries(), y.entries()));
}

TEST_CASE("permute") {
  const auto ij = Index::fresh_many(2);
  const Index i = ij[0], j = ij[1], k = Index::fresh();
  const Tensor t(Array({1, 1, 2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6}), {i, ~j});
  const Tensor p = permute(t, {j, i});
  CHECK(p.indices() == std::vector<Index>{~j, i});
  CHECK(p.tensor_dims() == Dims{3, 2});
  CHECK(p.entries().real_at(1) == 3);  // (j=1, i=0) lands second

  const Tensor v = vec({1, 2}, i);
  const Tensor w = permute(v, {i, k});
  CHECK(w.degree() == 2);
  CHECK(w.indices()[1] == k);
  CHECK(w.index_dim(1) == 1);
  CHECK_THROWS_AS(permute(t, {i}), UnknownIndexError);
  CHECK_THROWS_AS(permute(t, {i, j, i}), UnknownIndexError);
}

TEST_CASE("assign permutes into the target order") {
  const auto ij = Index::fresh_many(2);
  const Index i = ij[0], j = ij[1];
  // y is 2x3 indexed [~j, i]
  const Tensor y(Array({1, 1, 2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6}), {~j, i});
  const Tensor z = assign(Tensor(), {i, ~j}, y);
  CHECK(z.indices() == std::vector<Index>{i, ~j});
  for (std::size_t a = 0; a < 3; ++a)
    for (std::size_t b = 0; b < 2; ++b)
      CHECK(z.entries().real_at(a + 3 * b) == y.entries().real_at(b + 2 * a));

  const Tensor same = assign(Tensor(), y.indices(), y);
  CHECK(equal_all({same, y}));
  CHECK_THROWS_AS(assign(Tensor(), {i}, y), UnknownIndexError);
  CHECK_THROWS_AS(assign(Tensor(), {i}, Array::zeros({2, 2})), AssignKindError);
}

TEST_CASE("slice") {
  const Tensor t(Array({2, 2, 3}, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}),
                 {Index::fresh()});
  const Array page = slice(t, {Subscript::colon(), Subscript::colon(), Subscript::at(2)});
  CHECK(page.dims() == Dims{2, 2});
  CHECK(page.real_at(0) == 5);
  CHECK(page.real_at(3) == 8);
  CHECK(slice(t, {Subscript::at(1), Subscript::at(1), Subscript::at(1)}).real_at(0) == 1);
  CHECK(slice(t, {Subscript::at(12)}).real_at(0) == 12);
  CHECK(slice(t, {Subscript::range(2, 3)}).numel() == 2);
  CHECK_THROWS_AS(slice(t, {Subscript::at(0)}), BoundsError);
  CHECK_THROWS_AS(slice(t, {Subscript::at(13)}), BoundsError);
  CHECK_THROWS_AS(slice(t, {Subscript::colon(), Subscript::colon(), Subscript::at(4)}), BoundsError);
}
