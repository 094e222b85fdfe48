#include "rt/pagewise.hpp"

#include <algorithm>
#include <cstring>

#include "rt/errors.hpp"

namespace rt {

namespace {

Tensor transposed(const Tensor& t, bool conjugate) {
  Array e = t.entries();
  std::vector<std::size_t> order(std::max<std::size_t>(e.ndims(), 2));
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::swap(order[0], order[1]);
  Array out = permute_axes(e, order);
  if (conjugate && out.kind() == Kind::complex) {
    // permute_axes may share storage; edit() clones before writing.
    for (auto& z : out.edit<cplx>()) z = std::conj(z);
  }
  return Tensor(std::move(out), complement_all(t.indices()));
}

template <class T>
Array trace_typed(const Array& e, std::size_t n, std::size_t pages) {
  auto v = e.view<T>();
  std::vector<T> out(pages);
  for (std::size_t p = 0; p < pages; ++p) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += v[p * n * n + i * (n + 1)];
    out[p] = s;
  }
  return Array({1, 1, pages}, std::move(out));
}

template <class T>
std::vector<T> diag_typed(std::span<const T> v, std::size_t r, std::size_t c, std::size_t pages) {
  const std::size_t n = std::min(r, c);
  std::vector<T> out(n * pages);
  for (std::size_t p = 0; p < pages; ++p)
    for (std::size_t i = 0; i < n; ++i) out[p * n + i] = v[p * r * c + i * (r + 1)];
  return out;
}

Dims with_trailing(const Dims& head, const Dims& tail) {
  Dims d = head;
  d.insert(d.end(), tail.begin(), tail.end());
  return d;
}

Dims page_dims_of(const Array& e) {
  Dims d;
  for (std::size_t k = 2; k < e.ndims(); ++k) d.push_back(e.dim(k));
  return d;
}

}  // namespace

Tensor page_transpose(const Tensor& t) { return transposed(simplify(t), false); }
Tensor page_ctranspose(const Tensor& t) { return transposed(simplify(t), true); }

Tensor page_trace(const Tensor& t0) {
  const Tensor t = simplify(t0);
  const Array& e = t.entries();
  if (e.rows() != e.cols())
    throw DimMismatchError("trace of non-square " + std::to_string(e.rows()) + "x" +
                           std::to_string(e.cols()) + " pages");
  const std::size_t n = e.rows(), pages = n ? e.numel() / (n * n) : product_of(page_dims_of(e));
  Array flat = e.kind() == Kind::boolean ? e.to_kind(Kind::real) : e;
  Array r = flat.kind() == Kind::complex ? trace_typed<cplx>(flat, n, pages)
                                         : trace_typed<double>(flat, n, pages);
  return Tensor(r.reshaped(with_trailing({1, 1}, page_dims_of(e))), t.indices());
}

Tensor page_diag(const Tensor& t0) {
  const Tensor t = simplify(t0);
  const Array& e = t.entries();
  const std::size_t r = e.rows(), c = e.cols(), n = std::min(r, c);
  const Dims pd = page_dims_of(e);
  const std::size_t pages = product_of(pd);
  const Dims out_dims = with_trailing({n, 1}, pd);
  Array out = e.visit([&](auto v) -> Array {
    using T = typename decltype(v)::value_type;
    auto d = diag_typed<T>(v, r, c, pages);
    if constexpr (std::is_same_v<T, std::uint8_t>)
      return Array::booleans(out_dims, std::move(d));
    else
      return Array(out_dims, std::move(d));
  });
  return Tensor(std::move(out), t.indices());
}

namespace {

template <class T>
Array cat_typed(std::size_t axis, const std::vector<Array>& parts, const Dims& out_dims) {
  const std::size_t inner = product_of(std::span(out_dims).first(axis));
  const std::size_t outer = product_of(std::span(out_dims).subspan(axis + 1));
  const std::size_t total_j = out_dims[axis];
  std::vector<T> out(product_of(out_dims));
  std::size_t offset = 0;
  for (const auto& a : parts) {
    const std::size_t block = inner * a.dim(axis);
    auto v = a.view<T>();
    for (std::size_t o = 0; o < outer; ++o)
      std::copy_n(v.data() + o * block, block, out.data() + o * inner * total_j + offset * inner);
    offset += a.dim(axis);
  }
  if constexpr (std::is_same_v<T, std::uint8_t>)
    return Array::booleans(out_dims, std::move(out));
  else
    return Array(out_dims, std::move(out));
}

}  // namespace

Array page_cat(std::size_t axis, std::span<const Array> arrays) {
  if (arrays.empty()) throw DimMismatchError("concatenation of no operands");
  std::size_t n = axis + 1;
  for (const auto& a : arrays) n = std::max(n, a.ndims());
  Dims common(n, 1);
  std::size_t total = 0;
  Kind kind = arrays[0].kind();
  bool all_bool = true;
  for (const auto& a : arrays) {
    total += a.dim(axis);
    if (a.kind() != Kind::boolean) all_bool = false;
    kind = a.kind() == Kind::complex ? Kind::complex : kind;
    for (std::size_t k = 0; k < n; ++k) {
      if (k == axis) continue;
      const std::size_t d = a.dim(k);
      if (d != common[k] && d != 1 && common[k] != 1)
        throw DimMismatchError("cannot concatenate " + dims_string(a.dims()) +
                               " along dimension " + std::to_string(axis + 1) +
                               ": dimension " + std::to_string(k + 1) + " conflicts");
      common[k] = std::max(common[k], d);
    }
  }
  kind = all_bool ? Kind::boolean : (kind == Kind::complex ? Kind::complex : Kind::real);
  std::vector<Array> parts;
  parts.reserve(arrays.size());
  for (const auto& a : arrays) {
    Dims target = common;
    target[axis] = a.dim(axis);
    parts.push_back(expand_to(a.to_kind(kind), target));
  }
  Dims out_dims = common;
  out_dims[axis] = total;
  switch (kind) {
    case Kind::boolean: return cat_typed<std::uint8_t>(axis, parts, out_dims);
    case Kind::real: return cat_typed<double>(axis, parts, out_dims);
    case Kind::complex: return cat_typed<cplx>(axis, parts, out_dims);
  }
  return {};
}

namespace {

// Aligns operands on the union of their indices, letting `skip` (when given)
// differ in size. Returns arrays permuted to [rows, cols, union...].
struct CatAlignment {
  std::vector<Index> union_indices;
  std::vector<Index> contract_set;
  std::vector<Array> arrays;
};

CatAlignment align_for_cat(std::span<const Tensor> operands, const Index* skip) {
  CatAlignment out;
  std::vector<Tensor> ops;
  for (const auto& t : operands) ops.push_back(simplify(t));
  std::vector<std::size_t> sizes;
  for (const auto& t : ops) {
    if (skip && !t.position_of(*skip))
      throw UnknownIndexError("concatenation index " + skip->debug_string() +
                              " is missing from an operand");
    for (std::size_t p = 0; p < t.degree(); ++p) {
      const Index& h = t.indices()[p];
      const std::size_t n = t.index_dim(p);
      auto it = std::find_if(out.union_indices.begin(), out.union_indices.end(),
                             [&](const Index& u) { return u.same_id(h); });
      if (it == out.union_indices.end()) {
        out.union_indices.push_back(h);
        sizes.push_back(n);
        continue;
      }
      const std::size_t u = it - out.union_indices.begin();
      const bool is_skip = skip && h.same_id(*skip);
      if (!is_skip && sizes[u] != n) {
        if (sizes[u] != 1 && n != 1)
          throw DimMismatchError("index " + h.debug_string() + " spans sizes " +
                                 std::to_string(sizes[u]) + " and " + std::to_string(n));
        sizes[u] = std::max(sizes[u], n);
      }
      if (!is_skip && it->variant() != h.variant() &&
          std::none_of(out.contract_set.begin(), out.contract_set.end(),
                       [&](const Index& c) { return c.same_id(h); }))
        out.contract_set.push_back(*it);
    }
  }
  for (const auto& t : ops) {
    std::vector<std::size_t> order{0, 1};
    std::size_t extra = 2 + t.degree();
    for (const auto& u : out.union_indices) {
      if (auto p = t.position_of(u))
        order.push_back(*p + 2);
      else
        order.push_back(extra++);
    }
    out.arrays.push_back(permute_axes(t.entries(), order));
  }
  return out;
}

Tensor finish_cat(CatAlignment al, std::size_t axis) {
  Array joined = page_cat(axis, al.arrays);
  Tensor t(std::move(joined), al.union_indices);
  return al.contract_set.empty() ? t : sum(t, al.contract_set);
}

}  // namespace

Tensor concat(const Index& where, std::span<const Tensor> operands) {
  if (operands.empty()) throw DimMismatchError("concatenation of no operands");
  CatAlignment al = align_for_cat(operands, &where);
  std::size_t u = 0;
  while (!al.union_indices[u].same_id(where)) ++u;
  return finish_cat(std::move(al), u + 2);
}

Tensor concat(MatrixAxis where, std::span<const Tensor> operands) {
  if (operands.empty()) throw DimMismatchError("concatenation of no operands");
  return finish_cat(align_for_cat(operands, nullptr), where == MatrixAxis::rows ? 0 : 1);
}

}  // namespace rt
