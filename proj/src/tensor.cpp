#include "rt/tensor.hpp"

#include <algorithm>
#include <numeric>

#include "rt/errors.hpp"

namespace rt {

Tensor::Tensor(Array entries, std::vector<Index> indices)
    : entries_(std::move(entries)), indices_(std::move(indices)) {
  if (entries_.ndims() > indices_.size() + 2)
    throw IndexArityError("array of size " + dims_string(entries_.dims()) + " needs at least " +
                          std::to_string(entries_.ndims() - 2) + " indices, got " +
                          std::to_string(indices_.size()));
}

std::pair<Tensor, std::vector<Index>> Tensor::from_array(Array entries) {
  const std::size_t degree = entries.ndims() > 2 ? entries.ndims() - 2 : 0;
  auto idx = Index::fresh_many(degree);
  return {Tensor(std::move(entries), idx), idx};
}

Tensor Tensor::plain(Array entries) {
  if (entries.ndims() > 2)
    throw OperandKindError("a non-tensor operand must be a 2D array, got size " +
                           dims_string(entries.dims()));
  return Tensor(std::move(entries), {});
}

Dims Tensor::tensor_dims() const {
  Dims d(degree());
  for (std::size_t t = 0; t < d.size(); ++t) d[t] = index_dim(t);
  return d;
}

std::optional<std::size_t> Tensor::position_of(const Index& h) const {
  for (std::size_t t = 0; t < indices_.size(); ++t)
    if (indices_[t].same_id(h)) return t;
  return std::nullopt;
}

bool Tensor::has_duplicate_ids() const {
  for (std::size_t a = 0; a < indices_.size(); ++a)
    for (std::size_t b = a + 1; b < indices_.size(); ++b)
      if (indices_[a].same_id(indices_[b])) return true;
  return false;
}

namespace {

// Full dimension list (2 + degree axes) of a tensor.
Dims full_dims(const Tensor& t) {
  Dims d(2 + t.degree());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = t.entries().dim(k);
  return d;
}

Array drop_singleton_axes(const Array& a, const Dims& dims, const std::vector<bool>& drop) {
  Dims out;
  for (std::size_t k = 0; k < dims.size(); ++k)
    if (k >= drop.size() || !drop[k]) out.push_back(dims[k]);
  return a.reshaped(out);
}

}  // namespace

Tensor simplify(const Tensor& t) {
  if (!t.has_duplicate_ids()) return t;
  const auto& idx = t.indices();
  const Dims dims = full_dims(t);
  const Dims st = strides_of(dims);

  struct Group {
    Index head;
    std::size_t size;
    std::size_t stride;
    bool mixed;
  };
  std::vector<Group> groups;
  for (std::size_t p = 0; p < idx.size(); ++p) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const Group& g) { return g.head.same_id(idx[p]); });
    const std::size_t n = dims[p + 2];
    if (it == groups.end()) {
      groups.push_back({idx[p], n, st[p + 2], false});
      continue;
    }
    if (it->size != n)
      throw DimMismatchError("repeated index " + idx[p].debug_string() + " spans sizes " +
                             std::to_string(it->size) + " and " + std::to_string(n));
    it->stride += st[p + 2];
    if (it->head.variant() != idx[p].variant()) it->mixed = true;
  }

  // Attraction: one strided gather along every generalized diagonal.
  Dims out{dims[0], dims[1]};
  Dims gst{st[0], st[1]};
  for (const auto& g : groups) {
    out.push_back(g.size);
    gst.push_back(g.stride);
  }
  Array attracted = strided_gather(t.entries(), out, gst);

  // Contraction of groups that carry both variants.
  std::vector<bool> mask(out.size(), false);
  std::vector<Index> kept;
  bool any = false;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].mixed) {
      mask[g + 2] = true;
      any = true;
    } else {
      kept.push_back(groups[g].head);
    }
  }
  if (!any) return Tensor(std::move(attracted), std::move(kept));
  Array summed = sum_axes(attracted, mask);
  Dims sdims(out.size());
  for (std::size_t k = 0; k < out.size(); ++k) sdims[k] = mask[k] ? 1 : out[k];
  return Tensor(drop_singleton_axes(summed, sdims, mask), std::move(kept));
}

Tensor reindex(const Tensor& t, std::vector<Index> subs) {
  return simplify(Tensor(t.entries(), std::move(subs)));
}

Tensor sum(const Tensor& t0, const std::vector<Index>& over) {
  const Tensor t = simplify(t0);
  std::vector<bool> mask(2 + t.degree(), false);
  bool any = false;
  for (const auto& h : over) {
    if (auto p = t.position_of(h)) {
      mask[*p + 2] = true;
      any = true;
    }
  }
  if (!any) return t;
  const Dims dims = full_dims(t);
  Array summed = sum_axes(t.entries(), mask);
  Dims sdims = dims;
  std::vector<Index> kept;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    if (mask[k]) sdims[k] = 1;
    if (k >= 2 && !mask[k]) kept.push_back(t.indices()[k - 2]);
  }
  return Tensor(drop_singleton_axes(summed, sdims, mask), std::move(kept));
}

Tensor permute(const Tensor& t0, const std::vector<Index>& new_idx) {
  const Tensor t = simplify(t0);
  for (std::size_t a = 0; a < new_idx.size(); ++a)
    for (std::size_t b = a + 1; b < new_idx.size(); ++b)
      if (new_idx[a].same_id(new_idx[b]))
        throw UnknownIndexError("permutation repeats index " + new_idx[a].debug_string());
  const std::size_t deg = t.degree();
  std::vector<std::size_t> order{0, 1};
  std::vector<Index> out;
  std::size_t extra = 2 + deg;
  std::size_t retained = 0;
  for (const auto& h : new_idx) {
    if (auto p = t.position_of(h)) {
      order.push_back(*p + 2);
      out.push_back(t.indices()[*p]);
      ++retained;
    } else {
      order.push_back(extra++);
      out.push_back(h);
    }
  }
  if (retained != deg) {
    for (const auto& h : t.indices())
      if (std::none_of(new_idx.begin(), new_idx.end(),
                       [&](const Index& n) { return n.same_id(h); }))
        throw UnknownIndexError("permutation drops index " + h.debug_string());
  }
  return Tensor(permute_axes(t.entries(), order), std::move(out));
}

Tensor assign(const Tensor&, const std::vector<Index>& subs, const Tensor& src0) {
  const Tensor src = simplify(src0);
  for (const auto& h : subs)
    if (!src.position_of(h))
      throw UnknownIndexError("assigned index " + h.debug_string() +
                              " does not appear on the right-hand side");
  Tensor p = permute(src, subs);
  return Tensor(p.entries(), subs);
}

void assign(const Tensor&, const std::vector<Index>&, const Array&) {
  throw AssignKindError("index-subscripted assignment requires a tensor right-hand side");
}

namespace {

template <class T>
std::vector<T> pick(std::span<const T> src, const Dims& in_dims,
                    const std::vector<std::pair<std::size_t, std::size_t>>& ranges) {
  // ranges: 0-based [lo, count) per axis of in_dims.
  Dims out(ranges.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = ranges[k].second;
  std::vector<T> dst(product_of(out));
  if (dst.empty()) return dst;
  const Dims st = strides_of(in_dims);
  std::size_t base = 0;
  for (std::size_t k = 0; k < ranges.size(); ++k) base += ranges[k].first * st[k];
  std::vector<std::size_t> pos(out.size(), 0);
  for (std::size_t lin = 0; lin < dst.size(); ++lin) {
    std::size_t off = base;
    for (std::size_t k = 0; k < pos.size(); ++k) off += pos[k] * st[k];
    dst[lin] = src[off];
    for (std::size_t k = 0; k < pos.size(); ++k) {
      if (++pos[k] < out[k]) break;
      pos[k] = 0;
    }
  }
  return dst;
}

}  // namespace

Array slice(const Tensor& t, const std::vector<Subscript>& subs) {
  if (subs.empty()) throw SubscriptKindError("numeric subscripting needs at least one subscript");
  const Array& a = t.entries();
  Dims in;
  if (subs.size() == 1) {
    in = {a.numel(), 1};
  } else {
    for (std::size_t k = 0; k + 1 < subs.size(); ++k) in.push_back(a.dim(k));
    std::size_t rest = 1;
    for (std::size_t k = subs.size() - 1; k < std::max(a.ndims(), subs.size()); ++k)
      rest *= a.dim(k);
    in.push_back(rest);
  }
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t k = 0; k < subs.size(); ++k) {
    const auto& s = subs[k];
    const std::size_t n = in[k];
    if (s.all) {
      ranges.emplace_back(0, n);
      continue;
    }
    if (s.lo < 1 || s.hi > n || s.lo > s.hi + 1)
      throw BoundsError("subscript " + std::to_string(s.lo) + ":" + std::to_string(s.hi) +
                        " out of range 1.." + std::to_string(n) + " in dimension " +
                        std::to_string(k + 1));
    ranges.emplace_back(s.lo - 1, s.hi + 1 - s.lo);
  }
  if (ranges.size() == 1) ranges.emplace_back(0, 1);
  if (in.size() == 1) in.push_back(1);
  Dims out;
  for (const auto& r : ranges) out.push_back(r.second);
  return a.visit([&](auto s) {
    using T = typename decltype(s)::value_type;
    auto v = pick<T>(s, in, ranges);
    if constexpr (std::is_same_v<T, std::uint8_t>)
      return Array::booleans(out, std::move(v));
    else
      return Array(out, std::move(v));
  });
}

}  // namespace rt
