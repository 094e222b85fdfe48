#include "rt/array.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "rt/errors.hpp"

namespace rt {

const char* kind_name(Kind k) {
  switch (k) {
    case Kind::boolean:
      return "boolean";
    case Kind::real:
      return "real";
    case Kind::complex:
      return "complex";
  }
  return "?";
}

std::size_t product_of(std::span<const std::size_t> dims) {
  std::size_t p = 1;
  for (auto d : dims) p *= d;
  return p;
}

Dims strides_of(const Dims& dims) {
  Dims s(dims.size());
  std::size_t acc = 1;
  for (std::size_t k = 0; k < dims.size(); ++k) {
    s[k] = acc;
    acc *= dims[k];
  }
  return s;
}

Dims canonical_dims(Dims dims) {
  while (dims.size() < 2) dims.push_back(1);
  while (dims.size() > 2 && dims.back() == 1) dims.pop_back();
  return dims;
}

std::string dims_string(const Dims& dims) {
  std::ostringstream os;
  for (std::size_t k = 0; k < dims.size(); ++k) os << (k ? "x" : "") << dims[k];
  return os.str();
}

Array::Array()
    : dims_{0, 0}, storage_(std::make_shared<Storage>(std::vector<double>{})) {}

Array::Array(Dims dims, std::shared_ptr<Storage> storage)
    : dims_(canonical_dims(std::move(dims))), storage_(std::move(storage)) {
  const std::size_t n = std::visit([](const auto& v) { return v.size(); }, *storage_);
  if (n != product_of(dims_))
    throw DimMismatchError("array of size " + dims_string(dims_) + " given " +
                           std::to_string(n) + " entries");
}

Array::Array(Dims dims, std::vector<double> values)
    : Array(std::move(dims), std::make_shared<Storage>(std::move(values))) {}

Array::Array(Dims dims, std::vector<cplx> values)
    : Array(std::move(dims), std::make_shared<Storage>(std::move(values))) {}

Array Array::booleans(Dims dims, std::vector<std::uint8_t> values) {
  return Array(std::move(dims), std::make_shared<Storage>(std::move(values)));
}

Array Array::zeros(Dims dims, Kind kind) {
  const std::size_t n = product_of(dims);
  switch (kind) {
    case Kind::boolean:
      return booleans(std::move(dims), std::vector<std::uint8_t>(n, 0));
    case Kind::complex:
      return Array(std::move(dims), std::vector<cplx>(n));
    default:
      return Array(std::move(dims), std::vector<double>(n, 0.0));
  }
}

Array Array::filled(Dims dims, double value) {
  const std::size_t n = product_of(dims);
  return Array(std::move(dims), std::vector<double>(n, value));
}

std::size_t Array::numel() const noexcept { return product_of(dims_); }

namespace {

template <class To, class From>
To convert_value(const From& v) {
  if constexpr (std::is_same_v<To, std::uint8_t>) {
    return v != From{} ? 1 : 0;
  } else if constexpr (std::is_same_v<To, double>) {
    if constexpr (std::is_same_v<From, cplx>)
      return v.real();
    else
      return static_cast<double>(v);
  } else {
    if constexpr (std::is_same_v<From, cplx>)
      return v;
    else
      return cplx(static_cast<double>(v), 0.0);
  }
}

template <class To>
std::vector<To> convert_all(const Array& a) {
  return a.visit([](auto src) {
    std::vector<To> out(src.size());
    for (std::size_t k = 0; k < src.size(); ++k) out[k] = convert_value<To>(src[k]);
    return out;
  });
}

}  // namespace

Array Array::to_kind(Kind k) const {
  if (k == kind()) return *this;
  switch (k) {
    case Kind::boolean:
      return booleans(dims_, convert_all<std::uint8_t>(*this));
    case Kind::real:
      return Array(dims_, convert_all<double>(*this));
    case Kind::complex:
      return Array(dims_, convert_all<cplx>(*this));
  }
  return *this;
}

Array Array::reshaped(Dims dims) const { return Array(std::move(dims), storage_); }

cplx Array::complex_at(std::size_t lin) const {
  return visit([lin](auto s) { return convert_value<cplx>(s[lin]); });
}

double Array::real_at(std::size_t lin) const {
  return visit([lin](auto s) { return convert_value<double>(s[lin]); });
}

namespace {

template <class T>
std::vector<T> gather_values(std::span<const T> src, const Dims& out,
                             const Dims& st) {
  std::vector<T> dst(product_of(out));
  detail::strided_runs<1>(out, {&st}, [&](std::size_t o, const auto& base,
                                          const auto& step, std::size_t n) {
    const T* p = src.data() + base[0];
    T* q = dst.data() + o;
    const std::size_t s = step[0];
    if (s == 1) {
      std::copy(p, p + n, q);
    } else {
      for (std::size_t j = 0; j < n; ++j) q[j] = p[j * s];
    }
  });
  return dst;
}

}  // namespace

Array strided_gather(const Array& src, const Dims& out_dims, const Dims& src_strides) {
  return src.visit([&](auto s) {
    using T = typename decltype(s)::value_type;
    auto v = gather_values<T>(s, out_dims, src_strides);
    if constexpr (std::is_same_v<T, std::uint8_t>)
      return Array::booleans(out_dims, std::move(v));
    else
      return Array(out_dims, std::move(v));
  });
}

Array permute_axes(const Array& src, std::span<const std::size_t> order) {
  const std::size_t n = order.size();
  if (n < src.ndims())
    throw DimMismatchError("permutation of length " + std::to_string(n) +
                           " for array of size " + dims_string(src.dims()));
  std::vector<bool> seen(n, false);
  for (auto a : order) {
    if (a >= n || seen[a]) throw DimMismatchError("invalid permutation");
    seen[a] = true;
  }
  Dims out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = src.dim(order[k]);
  // Pure relabeling if non-singleton axes keep their order.
  std::size_t last = 0;
  bool ordered = true;
  bool any = false;
  for (std::size_t k = 0; k < n; ++k) {
    if (out[k] == 1) continue;
    if (any && order[k] < last) ordered = false;
    last = order[k];
    any = true;
  }
  if (ordered) return src.reshaped(out);
  Dims full(n);
  for (std::size_t k = 0; k < n; ++k) full[k] = src.dim(k);
  const Dims s = strides_of(full);
  Dims st(n);
  for (std::size_t k = 0; k < n; ++k) st[k] = s[order[k]];
  return strided_gather(src, out, st);
}

namespace {

template <class T>
std::vector<T> sum_values(std::span<const T> src, const Dims& in,
                          const std::vector<bool>& mask, const Dims& out) {
  std::vector<T> dst(product_of(out), T{});
  Dims ost = strides_of(out);
  for (std::size_t k = 0; k < in.size(); ++k)
    if (k < mask.size() && mask[k]) ost[k] = 0;
  Dims unit = strides_of(in);
  // Traverse the input in storage order, scattering into the output.
  detail::strided_runs<2>(in, {&unit, &ost}, [&](std::size_t, const auto& base,
                                                 const auto& step, std::size_t n) {
    const T* p = src.data() + base[0];
    T* q = dst.data() + base[1];
    const std::size_t si = step[0], so = step[1];
    if (so == 0) {
      T acc = *q;
      for (std::size_t j = 0; j < n; ++j) acc += p[j * si];
      *q = acc;
    } else {
      for (std::size_t j = 0; j < n; ++j) q[j * so] += p[j * si];
    }
  });
  return dst;
}

}  // namespace

Array sum_axes(const Array& src, const std::vector<bool>& mask) {
  Dims in = src.dims();
  while (in.size() < mask.size()) in.push_back(1);
  Dims out = in;
  bool any = false;
  for (std::size_t k = 0; k < in.size(); ++k)
    if (k < mask.size() && mask[k] && in[k] != 1) {
      out[k] = 1;
      any = true;
    }
  if (!any) return src;
  // Sums of booleans count, as in MATLAB.
  const Array a = src.kind() == Kind::boolean ? src.to_kind(Kind::real) : src;
  return a.visit([&](auto s) {
    using T = typename decltype(s)::value_type;
    if constexpr (std::is_same_v<T, std::uint8_t>) {
      return Array();
    } else {
      return Array(out, sum_values<T>(s, in, mask, out));
    }
  });
}

Array expand_to(const Array& src, const Dims& target) {
  const std::size_t n = std::max(target.size(), src.ndims());
  Dims full(n), out(n);
  for (std::size_t k = 0; k < n; ++k) {
    full[k] = src.dim(k);
    out[k] = k < target.size() ? target[k] : 1;
  }
  if (full == out) return src;
  Dims st = strides_of(full);
  for (std::size_t k = 0; k < n; ++k) {
    if (full[k] == out[k]) continue;
    if (full[k] != 1)
      throw DimMismatchError("cannot expand size " + dims_string(src.dims()) +
                             " to " + dims_string(target));
    st[k] = 0;
  }
  return strided_gather(src, out, st);
}

}  // namespace rt
