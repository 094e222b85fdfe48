#include "rt/ewise.hpp"

#include <algorithm>
#include <cmath>

#include "rt/errors.hpp"

namespace rt {

Aligned alignn(std::span<const Tensor> operands) {
  std::vector<Tensor> ops;
  ops.reserve(operands.size());
  for (const auto& t : operands) ops.push_back(simplify(t));

  AlignmentPlanN plan;
  std::vector<std::size_t> sizes;
  for (const auto& t : ops) {
    for (std::size_t p = 0; p < t.degree(); ++p) {
      const Index& h = t.indices()[p];
      const std::size_t n = t.index_dim(p);
      auto it = std::find_if(plan.union_indices.begin(), plan.union_indices.end(),
                             [&](const Index& u) { return u.same_id(h); });
      if (it == plan.union_indices.end()) {
        plan.union_indices.push_back(h);
        sizes.push_back(n);
        continue;
      }
      const std::size_t u = it - plan.union_indices.begin();
      if (sizes[u] != n) {
        if (sizes[u] != 1 && n != 1)
          throw DimMismatchError("index " + h.debug_string() + " spans sizes " +
                                 std::to_string(sizes[u]) + " and " + std::to_string(n));
        sizes[u] = std::max(sizes[u], n);
      }
      if (it->variant() != h.variant() &&
          std::none_of(plan.contract_set.begin(), plan.contract_set.end(),
                       [&](const Index& c) { return c.same_id(h); }))
        plan.contract_set.push_back(*it);
    }
  }

  const std::size_t U = plan.union_indices.size();
  Aligned out;
  for (const auto& t : ops) {
    std::vector<std::optional<std::size_t>> place(U);
    std::vector<std::size_t> order{0, 1};
    std::size_t extra = 2 + t.degree();
    for (std::size_t u = 0; u < U; ++u) {
      if (auto p = t.position_of(plan.union_indices[u])) {
        place[u] = *p;
        order.push_back(*p + 2);
      } else {
        order.push_back(extra++);
      }
    }
    out.arrays.push_back(permute_axes(t.entries(), order));
    plan.placement.push_back(std::move(place));
  }
  out.plan = std::move(plan);
  return out;
}

const char* op_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::add: return "+";
    case BinaryOp::sub: return "-";
    case BinaryOp::eq: return "==";
    case BinaryOp::ne: return "~=";
    case BinaryOp::lt: return "<";
    case BinaryOp::gt: return ">";
    case BinaryOp::le: return "<=";
    case BinaryOp::ge: return ">=";
    case BinaryOp::logical_and: return "&";
    case BinaryOp::logical_or: return "|";
    case BinaryOp::times: return ".*";
    case BinaryOp::rdivide: return "./";
    case BinaryOp::ldivide: return ".\\";
    case BinaryOp::power: return ".^";
  }
  return "?";
}

namespace {

bool is_relation(BinaryOp op) {
  return op == BinaryOp::eq || op == BinaryOp::ne || op == BinaryOp::lt ||
         op == BinaryOp::gt || op == BinaryOp::le || op == BinaryOp::ge;
}

bool is_logical(BinaryOp op) {
  return op == BinaryOp::logical_and || op == BinaryOp::logical_or;
}

struct Broadcast {
  Dims out;
  Dims sa, sb;
};

Broadcast broadcast_shapes(const Array& a, const Array& b) {
  const std::size_t n = std::max(a.ndims(), b.ndims());
  Dims da(n), db(n);
  Broadcast bc;
  bc.out.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    da[k] = a.dim(k);
    db[k] = b.dim(k);
    if (da[k] != db[k] && da[k] != 1 && db[k] != 1)
      throw DimMismatchError("sizes " + dims_string(a.dims()) + " and " +
                             dims_string(b.dims()) + " are not broadcast-compatible");
    bc.out[k] = std::max(da[k], db[k]);
  }
  bc.sa = strides_of(da);
  bc.sb = strides_of(db);
  for (std::size_t k = 0; k < n; ++k) {
    if (da[k] == 1) bc.sa[k] = 0;
    if (db[k] == 1) bc.sb[k] = 0;
  }
  return bc;
}

template <class R, class T, class F>
std::vector<R> broadcast_apply(const Broadcast& bc, std::span<const T> a,
                               std::span<const T> b, F f) {
  std::vector<R> out(product_of(bc.out));
  detail::strided_runs<2>(bc.out, {&bc.sa, &bc.sb},
                          [&](std::size_t o, const auto& base, const auto& step, std::size_t n) {
                            const T* pa = a.data() + base[0];
                            const T* pb = b.data() + base[1];
                            R* q = out.data() + o;
                            for (std::size_t j = 0; j < n; ++j)
                              q[j] = f(pa[j * step[0]], pb[j * step[1]]);
                          });
  return out;
}

template <class T>
Array arithmetic(BinaryOp op, const Broadcast& bc, const Array& a, const Array& b) {
  auto va = a.view<T>();
  auto vb = b.view<T>();
  std::vector<T> r;
  switch (op) {
    case BinaryOp::add:
      r = broadcast_apply<T>(bc, va, vb, [](T x, T y) { return x + y; });
      break;
    case BinaryOp::sub:
      r = broadcast_apply<T>(bc, va, vb, [](T x, T y) { return x - y; });
      break;
    case BinaryOp::times:
      r = broadcast_apply<T>(bc, va, vb, [](T x, T y) { return x * y; });
      break;
    case BinaryOp::rdivide:
      r = broadcast_apply<T>(bc, va, vb, [](T x, T y) { return x / y; });
      break;
    case BinaryOp::ldivide:
      r = broadcast_apply<T>(bc, va, vb, [](T x, T y) { return y / x; });
      break;
    case BinaryOp::power:
      r = broadcast_apply<T>(bc, va, vb, [](T x, T y) { return std::pow(x, y); });
      break;
    default:
      break;
  }
  return Array(bc.out, std::move(r));
}

template <class T>
Array relation(BinaryOp op, const Broadcast& bc, const Array& a, const Array& b) {
  auto va = a.view<T>();
  auto vb = b.view<T>();
  using B = std::uint8_t;
  std::vector<B> r;
  switch (op) {
    case BinaryOp::eq:
      r = broadcast_apply<B>(bc, va, vb, [](T x, T y) -> B { return x == y; });
      break;
    case BinaryOp::ne:
      r = broadcast_apply<B>(bc, va, vb, [](T x, T y) -> B { return x != y; });
      break;
    default:
      if constexpr (std::is_same_v<T, double>) {
        switch (op) {
          case BinaryOp::lt:
            r = broadcast_apply<B>(bc, va, vb, [](T x, T y) -> B { return x < y; });
            break;
          case BinaryOp::gt:
            r = broadcast_apply<B>(bc, va, vb, [](T x, T y) -> B { return x > y; });
            break;
          case BinaryOp::le:
            r = broadcast_apply<B>(bc, va, vb, [](T x, T y) -> B { return x <= y; });
            break;
          case BinaryOp::ge:
            r = broadcast_apply<B>(bc, va, vb, [](T x, T y) -> B { return x >= y; });
            break;
          default:
            break;
        }
      }
      break;
  }
  return Array::booleans(bc.out, std::move(r));
}

}  // namespace

Tensor ewise_binary(BinaryOp op, const Tensor& a, const Tensor& b) {
  const Tensor ops[2] = {a, b};
  Aligned al = alignn(ops);
  Array& x = al.arrays[0];
  Array& y = al.arrays[1];
  const Broadcast bc = broadcast_shapes(x, y);

  Array result;
  if (is_logical(op)) {
    const Array bx = x.to_kind(Kind::boolean), by = y.to_kind(Kind::boolean);
    auto r = broadcast_apply<std::uint8_t>(
        bc, bx.view<std::uint8_t>(), by.view<std::uint8_t>(),
        [op](std::uint8_t p, std::uint8_t q) -> std::uint8_t {
          return op == BinaryOp::logical_and ? (p && q) : (p || q);
        });
    result = Array::booleans(bc.out, std::move(r));
  } else {
    const Kind k = promote(x.kind(), y.kind());
    if (k == Kind::complex && is_relation(op) && op != BinaryOp::eq && op != BinaryOp::ne)
      throw ElementKindError(std::string("relation ") + op_symbol(op) +
                             " is undefined for complex entries");
    const Array px = x.to_kind(k), py = y.to_kind(k);
    if (is_relation(op)) {
      result = k == Kind::complex ? relation<cplx>(op, bc, px, py)
                                  : relation<double>(op, bc, px, py);
    } else {
      result = k == Kind::complex ? arithmetic<cplx>(op, bc, px, py)
                                  : arithmetic<double>(op, bc, px, py);
    }
  }
  Tensor t(std::move(result), al.plan.union_indices);
  if (al.plan.contract_set.empty()) return t;
  return sum(t, al.plan.contract_set);
}

namespace {

template <class T, class F>
Array map_entries(const Array& a, F f) {
  auto v = a.view<T>();
  using R = decltype(f(v[0]));
  std::vector<R> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = f(v[k]);
  if constexpr (std::is_same_v<R, std::uint8_t>)
    return Array::booleans(a.dims(), std::move(out));
  else
    return Array(a.dims(), std::move(out));
}

double round_to(double x, double scale) { return std::round(x * scale) / scale; }

}  // namespace

Tensor ewise_unary(UnaryOp op, const Tensor& t, int precision) {
  const Array& a = t.entries();
  const Kind k = a.kind();
  const bool cx = k == Kind::complex;
  const Array num = k == Kind::boolean ? a.to_kind(Kind::real) : a;
  Array r;
  switch (op) {
    case UnaryOp::uplus:
      r = a;
      break;
    case UnaryOp::neg:
      r = cx ? map_entries<cplx>(num, [](cplx z) { return -z; })
             : map_entries<double>(num, [](double x) { return -x; });
      break;
    case UnaryOp::conj:
      r = cx ? map_entries<cplx>(a, [](cplx z) { return std::conj(z); }) : a;
      break;
    case UnaryOp::logical_not:
      if (k != Kind::boolean)
        throw ElementKindError(std::string("logical NOT needs boolean entries, got ") +
                               kind_name(k));
      r = map_entries<std::uint8_t>(a, [](std::uint8_t x) -> std::uint8_t { return !x; });
      break;
    case UnaryOp::abs:
      r = cx ? map_entries<cplx>(num, [](cplx z) { return std::abs(z); })
             : map_entries<double>(num, [](double x) { return std::abs(x); });
      break;
    case UnaryOp::log: {
      bool negative = false;
      if (!cx)
        for (double x : num.view<double>()) negative |= x < 0;
      if (cx || negative)
        r = map_entries<cplx>(num.to_kind(Kind::complex), [](cplx z) { return std::log(z); });
      else
        r = map_entries<double>(num, [](double x) { return std::log(x); });
      break;
    }
    case UnaryOp::exp:
      r = cx ? map_entries<cplx>(num, [](cplx z) { return std::exp(z); })
             : map_entries<double>(num, [](double x) { return std::exp(x); });
      break;
    case UnaryOp::round: {
      const double s = std::pow(10.0, precision);
      r = cx ? map_entries<cplx>(num,
                                 [s](cplx z) {
                                   return cplx(round_to(z.real(), s), round_to(z.imag(), s));
                                 })
             : map_entries<double>(num, [s](double x) { return round_to(x, s); });
      break;
    }
    case UnaryOp::step:
      if (cx) throw ElementKindError("step is undefined for complex entries");
      r = map_entries<double>(num, [](double x) -> std::uint8_t { return x > 0; });
      break;
    case UnaryOp::real:
      r = cx ? map_entries<cplx>(num, [](cplx z) { return z.real(); }) : num;
      break;
    case UnaryOp::imag:
      r = cx ? map_entries<cplx>(num, [](cplx z) { return z.imag(); })
             : Array::zeros(a.dims(), Kind::real);
      break;
  }
  return Tensor(std::move(r), t.indices());
}

bool equal_all(std::span<const Tensor> operands) {
  std::vector<Index> seen;
  for (const auto& t0 : operands) {
    const Tensor t = simplify(t0);
    for (const auto& h : t.indices()) {
      auto it = std::find_if(seen.begin(), seen.end(),
                             [&](const Index& s) { return s.same_id(h); });
      if (it == seen.end())
        seen.push_back(h);
      else if (it->variant() != h.variant())
        return false;
    }
  }
  Aligned al;
  try {
    al = alignn(operands);
  } catch (const DimMismatchError&) {
    return false;
  }
  if (al.arrays.empty()) return true;
  const Array& ref = al.arrays[0];
  for (std::size_t k = 1; k < al.arrays.size(); ++k) {
    const Array& o = al.arrays[k];
    if (o.dims() != ref.dims()) return false;
    for (std::size_t e = 0; e < ref.numel(); ++e)
      if (!(ref.complex_at(e) == o.complex_at(e))) return false;
  }
  return true;
}

}  // namespace rt
