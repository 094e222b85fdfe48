#include "rt/lattice.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <limits>

#include "rt/errors.hpp"

namespace rt {

std::vector<Index> AlignmentPlan2::result_indices() const {
  std::vector<Index> out = left_outer;
  out.insert(out.end(), right_outer.begin(), right_outer.end());
  out.insert(out.end(), pages.begin(), pages.end());
  return out;
}

AlignmentPlan2 align2(std::span<const Index> a, std::span<const Index> b) {
  AlignmentPlan2 plan;
  std::vector<bool> b_used(b.size(), false);
  for (std::size_t p = 0; p < a.size(); ++p) {
    std::size_t q = 0;
    while (q < b.size() && !b[q].same_id(a[p])) ++q;
    if (q == b.size()) {
      plan.left_outer.push_back(a[p]);
      plan.a_outer.push_back(p);
      continue;
    }
    b_used[q] = true;
    if (a[p].variant() == b[q].variant()) {
      plan.pages.push_back(a[p]);
      plan.a_pages.push_back(p);
      plan.b_pages.push_back(q);
    } else {
      plan.inner.push_back(a[p]);
      plan.a_inner.push_back(p);
      plan.b_inner.push_back(q);
    }
  }
  for (std::size_t q = 0; q < b.size(); ++q) {
    if (b_used[q]) continue;
    plan.right_outer.push_back(b[q]);
    plan.b_outer.push_back(q);
  }
  return plan;
}

Lattice to_lattice(const Array& entries, const LatticeMap& map, Side side) {
  Lattice L;
  L.side = side;
  std::vector<std::size_t> order;
  auto take = [&](const std::vector<std::size_t>& axes, Dims& dims) {
    for (auto ax : axes) {
      order.push_back(ax);
      dims.push_back(entries.dim(ax));
    }
  };
  take(map.row_axes, L.row_dims);
  take(map.col_axes, L.col_dims);
  take(map.page_axes, L.page_dims);
  std::size_t n = std::max<std::size_t>(entries.ndims(), 2);
  for (auto ax : order) n = std::max(n, ax + 1);
  std::vector<bool> used(n, false);
  for (auto ax : order) {
    if (used[ax]) throw DimMismatchError("lattice map uses an axis twice");
    used[ax] = true;
  }
  for (std::size_t ax = 0; ax < n; ++ax) {
    if (used[ax]) continue;
    if (entries.dim(ax) != 1)
      throw DimMismatchError("lattice map omits non-singleton axis " + std::to_string(ax));
    order.push_back(ax);
  }
  Array permuted = permute_axes(entries, order);
  L.data = permuted.reshaped(
      {product_of(L.row_dims), product_of(L.col_dims), product_of(L.page_dims)});
  return L;
}

Array from_lattice(const Lattice& lattice, std::span<const std::size_t> order) {
  Dims dims = lattice.row_dims;
  dims.insert(dims.end(), lattice.col_dims.begin(), lattice.col_dims.end());
  dims.insert(dims.end(), lattice.page_dims.begin(), lattice.page_dims.end());
  while (dims.size() < order.size()) dims.push_back(1);
  return permute_axes(lattice.data.reshaped(dims), order);
}

namespace {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using CMap = Eigen::Map<const Mat<T>>;
template <class T>
using MMap = Eigen::Map<Mat<T>>;

template <class T>
Array matmul_typed(const Array& a, const Array& b) {
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1), pages = a.dim(2);
  std::vector<T> c(m * n * pages);
  auto va = a.view<T>();
  auto vb = b.view<T>();
  if (m == 1 && k == 1 && n == 1) {
    for (std::size_t p = 0; p < pages; ++p) c[p] = va[p] * vb[p];
  } else {
    for (std::size_t p = 0; p < pages; ++p) {
      CMap<T> A(va.data() + p * m * k, m, k);
      CMap<T> B(vb.data() + p * k * n, k, n);
      MMap<T> C(c.data() + p * m * n, m, n);
      C.noalias() = A * B;
    }
  }
  return Array({m, n, pages}, std::move(c));
}

template <class T>
Mat<T> solve_page(const Mat<T>& A, const Mat<T>& B, std::size_t page) {
  const auto n = A.rows(), k = A.cols();
  if (n == k) {
    Eigen::PartialPivLU<Mat<T>> lu(A);
    const auto d = lu.matrixLU().diagonal().cwiseAbs();
    const double big = n ? d.maxCoeff() : 0.0;
    const double small = n ? d.minCoeff() : 0.0;
    if (n && (big == 0.0 || small <= big * n * std::numeric_limits<double>::epsilon()))
      throw SingularPageError(page, "page " + std::to_string(page + 1) +
                                        " of the denominator is singular");
    return lu.solve(B);
  }
  if (n < k)
    throw DimMismatchError("page " + std::to_string(page + 1) + " is underdetermined (" +
                           std::to_string(n) + " equations, " + std::to_string(k) +
                           " unknowns)");
  return A.colPivHouseholderQr().solve(B);
}

template <class T>
Array solve_left_typed(const Array& a, const Array& b) {
  const std::size_t n = a.dim(0), k = a.dim(1), m = b.dim(1), pages = a.dim(2);
  std::vector<T> x(k * m * pages);
  auto va = a.view<T>();
  auto vb = b.view<T>();
  for (std::size_t p = 0; p < pages; ++p) {
    Mat<T> A = CMap<T>(va.data() + p * n * k, n, k);
    Mat<T> B = CMap<T>(vb.data() + p * n * m, n, m);
    MMap<T>(x.data() + p * k * m, k, m) = solve_page<T>(A, B, p);
  }
  return Array({k, m, pages}, std::move(x));
}

template <class T>
Array solve_right_typed(const Array& b, const Array& a) {
  // X A = B  <=>  A^T X^T = B^T
  const std::size_t n = b.dim(0), q = b.dim(1), m = a.dim(0), pages = a.dim(2);
  std::vector<T> x(n * m * pages);
  auto va = a.view<T>();
  auto vb = b.view<T>();
  for (std::size_t p = 0; p < pages; ++p) {
    Mat<T> At = CMap<T>(va.data() + p * m * q, m, q).transpose();
    Mat<T> Bt = CMap<T>(vb.data() + p * n * q, n, q).transpose();
    MMap<T>(x.data() + p * n * m, n, m) = solve_page<T>(At, Bt, p).transpose();
  }
  return Array({n, m, pages}, std::move(x));
}

void check_pages(const Array& a, const Array& b) {
  if (a.dim(2) != b.dim(2) || a.ndims() > 3 || b.ndims() > 3)
    throw DimMismatchError("lattices " + dims_string(a.dims()) + " and " +
                           dims_string(b.dims()) + " differ in pages");
}

}  // namespace

Array page_matmul(const Array& a, const Array& b) {
  check_pages(a, b);
  if (a.dim(1) != b.dim(0))
    throw DimMismatchError("inner dimensions differ: " + dims_string(a.dims()) + " times " +
                           dims_string(b.dims()));
  const Kind k = promote(a.kind(), b.kind());
  const Array x = a.to_kind(k), y = b.to_kind(k);
  return k == Kind::complex ? matmul_typed<cplx>(x, y) : matmul_typed<double>(x, y);
}

Array page_solve_left(const Array& a, const Array& b) {
  check_pages(a, b);
  if (a.dim(0) != b.dim(0))
    throw DimMismatchError("left division of " + dims_string(a.dims()) + " into " +
                           dims_string(b.dims()) + ": row counts differ");
  const Kind k = promote(a.kind(), b.kind());
  const Array x = a.to_kind(k), y = b.to_kind(k);
  return k == Kind::complex ? solve_left_typed<cplx>(x, y) : solve_left_typed<double>(x, y);
}

Array page_solve_right(const Array& b, const Array& a) {
  check_pages(a, b);
  if (a.dim(1) != b.dim(1))
    throw DimMismatchError("right division of " + dims_string(b.dims()) + " by " +
                           dims_string(a.dims()) + ": column counts differ");
  const Kind k = promote(a.kind(), b.kind());
  const Array x = a.to_kind(k), y = b.to_kind(k);
  return k == Kind::complex ? solve_right_typed<cplx>(y, x) : solve_right_typed<double>(y, x);
}

namespace {

void check_matched(const AlignmentPlan2& plan, const Tensor& a, const Tensor& b) {
  auto check = [&](const std::vector<std::size_t>& pa, const std::vector<std::size_t>& pb,
                   const std::vector<Index>& ids) {
    for (std::size_t k = 0; k < pa.size(); ++k)
      if (a.index_dim(pa[k]) != b.index_dim(pb[k]))
        throw DimMismatchError("index " + ids[k].debug_string() + " spans sizes " +
                               std::to_string(a.index_dim(pa[k])) + " and " +
                               std::to_string(b.index_dim(pb[k])));
  };
  check(plan.a_inner, plan.b_inner, plan.inner);
  check(plan.a_pages, plan.b_pages, plan.pages);
}

void append_axes(std::vector<std::size_t>& out, const std::vector<std::size_t>& positions) {
  for (auto p : positions) out.push_back(p + 2);
}

// Number of lattice axes in a dims list, used to build result orders.
std::size_t count(const std::vector<std::size_t>& v) { return v.size(); }

}  // namespace

Tensor product(const Tensor& a0, const Tensor& b0) {
  const Tensor a = simplify(a0), b = simplify(b0);
  const AlignmentPlan2 plan = align2(a.indices(), b.indices());
  check_matched(plan, a, b);
  const bool scaling = a.is_scalar_matrix() || b.is_scalar_matrix();
  if (!scaling && a.cols() != b.rows())
    throw DimMismatchError("matrix product of " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + " and " + std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols()) + " entries");

  LatticeMap lm, rm;
  lm.row_axes = scaling ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{0};
  append_axes(lm.row_axes, plan.a_outer);
  if (!scaling) lm.col_axes.push_back(1);
  append_axes(lm.col_axes, plan.a_inner);
  append_axes(lm.page_axes, plan.a_pages);

  if (!scaling) rm.row_axes.push_back(0);
  append_axes(rm.row_axes, plan.b_inner);
  rm.col_axes = scaling ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{1};
  append_axes(rm.col_axes, plan.b_outer);
  append_axes(rm.page_axes, plan.b_pages);

  const Lattice A = to_lattice(a.entries(), lm, Side::left);
  const Lattice B = to_lattice(b.entries(), rm, Side::right);
  Lattice C{page_matmul(A.data, B.data), A.row_dims, B.col_dims, A.page_dims, Side::left};

  // Lattice axes: [ar, (ac), lo..., (br), bc, ro..., pages...]
  const std::size_t nlo = count(plan.a_outer), nro = count(plan.b_outer);
  const std::size_t rows_len = (scaling ? 2 : 1) + nlo;
  const std::size_t cols_len = (scaling ? 2 : 1) + nro;
  std::vector<std::size_t> order;
  const std::size_t ar = 0, bc = rows_len + (scaling ? 1 : 0);
  if (scaling) {
    order = {ar, rows_len, 1, bc};
  } else {
    order = {ar, bc};
  }
  const std::size_t lo0 = scaling ? 2 : 1;
  for (std::size_t k = 0; k < nlo; ++k) order.push_back(lo0 + k);
  const std::size_t ro0 = rows_len + (scaling ? 2 : 1);
  for (std::size_t k = 0; k < nro; ++k) order.push_back(ro0 + k);
  for (std::size_t k = 0; k < plan.pages.size(); ++k) order.push_back(rows_len + cols_len + k);

  Array out = from_lattice(C, order);
  Dims dims(out.dims());
  dims.resize(std::max(order.size(), dims.size()), 1);
  Dims merged;
  if (scaling) {
    merged = {dims[0] * dims[1], dims[2] * dims[3]};
    merged.insert(merged.end(), dims.begin() + 4, dims.end());
  } else {
    merged = dims;
  }
  return Tensor(out.reshaped(merged), plan.result_indices());
}

Tensor solve_left(const Tensor& a0, const Tensor& b0) {
  const Tensor a = simplify(a0), b = simplify(b0);
  const Tensor ac(a.entries(), complement_all(a.indices()));
  const AlignmentPlan2 plan = align2(ac.indices(), b.indices());
  check_matched(plan, ac, b);
  const bool scaling = a.is_scalar_matrix();
  if (!scaling && a.rows() != b.rows())
    throw DimMismatchError("left division of " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + " into " + std::to_string(b.rows()) +
                           "x" + std::to_string(b.cols()) + " entries");

  LatticeMap am, bm;
  if (!scaling) {
    am.row_axes.push_back(0);
    am.col_axes.push_back(1);
    bm.row_axes.push_back(0);
    bm.col_axes.push_back(1);
  } else {
    bm.col_axes = {0, 1};
  }
  append_axes(am.row_axes, plan.a_inner);
  append_axes(am.col_axes, plan.a_outer);
  append_axes(am.page_axes, plan.a_pages);
  append_axes(bm.row_axes, plan.b_inner);
  append_axes(bm.col_axes, plan.b_outer);
  append_axes(bm.page_axes, plan.b_pages);

  const Lattice A = to_lattice(ac.entries(), am, Side::left);
  const Lattice B = to_lattice(b.entries(), bm, Side::right);
  Lattice X{page_solve_left(A.data, B.data), A.col_dims, B.col_dims, A.page_dims, Side::left};

  // Lattice axes: [(ac), lo_a..., (br), bc, ro..., pages...]
  const std::size_t nlo = plan.a_outer.size(), nro = plan.b_outer.size();
  const std::size_t rows_len = (scaling ? 0 : 1) + nlo;
  const std::size_t cols_len = (scaling ? 2 : 1) + nro;
  std::vector<std::size_t> order;
  std::vector<std::size_t> rest;
  for (std::size_t k = 0; k < nlo; ++k) rest.push_back((scaling ? 0 : 1) + k);
  for (std::size_t k = 0; k < nro; ++k) rest.push_back(rows_len + (scaling ? 2 : 1) + k);
  for (std::size_t k = 0; k < plan.pages.size(); ++k) rest.push_back(rows_len + cols_len + k);
  if (scaling) {
    order = {rows_len, rows_len + 1};
  } else {
    order = {0, rows_len};
  }
  order.insert(order.end(), rest.begin(), rest.end());
  Array out = from_lattice(X, order);
  return Tensor(out, plan.result_indices());
}

Tensor solve_right(const Tensor& b0, const Tensor& a0) {
  const Tensor a = simplify(a0), b = simplify(b0);
  const Tensor ac(a.entries(), complement_all(a.indices()));
  const AlignmentPlan2 plan = align2(b.indices(), ac.indices());
  check_matched(plan, b, ac);
  const bool scaling = a.is_scalar_matrix();
  if (!scaling && a.cols() != b.cols())
    throw DimMismatchError("right division of " + std::to_string(b.rows()) + "x" +
                           std::to_string(b.cols()) + " by " + std::to_string(a.rows()) + "x" +
                           std::to_string(a.cols()) + " entries");

  LatticeMap bm, am;
  bm.row_axes = scaling ? std::vector<std::size_t>{0, 1} : std::vector<std::size_t>{0};
  if (!scaling) {
    bm.col_axes.push_back(1);
    am.row_axes.push_back(0);
    am.col_axes.push_back(1);
  }
  append_axes(bm.row_axes, plan.a_outer);
  append_axes(bm.col_axes, plan.a_inner);
  append_axes(bm.page_axes, plan.a_pages);
  append_axes(am.row_axes, plan.b_outer);
  append_axes(am.col_axes, plan.b_inner);
  append_axes(am.page_axes, plan.b_pages);

  const Lattice B = to_lattice(b.entries(), bm, Side::left);
  const Lattice A = to_lattice(ac.entries(), am, Side::right);
  Lattice X{page_solve_right(B.data, A.data), B.row_dims, A.row_dims, B.page_dims, Side::left};

  // Lattice axes: [br, (bc), lo_b..., (ar), lo_a..., pages...]
  const std::size_t nlo = plan.a_outer.size(), nro = plan.b_outer.size();
  const std::size_t rows_len = (scaling ? 2 : 1) + nlo;
  const std::size_t cols_len = (scaling ? 0 : 1) + nro;
  std::vector<std::size_t> order{0, scaling ? std::size_t{1} : rows_len};
  for (std::size_t k = 0; k < nlo; ++k) order.push_back((scaling ? 2 : 1) + k);
  for (std::size_t k = 0; k < nro; ++k) order.push_back(rows_len + (scaling ? 0 : 1) + k);
  for (std::size_t k = 0; k < plan.pages.size(); ++k) order.push_back(rows_len + cols_len + k);
  Array out = from_lattice(X, order);
  return Tensor(out, plan.result_indices());
}

}  // namespace rt
