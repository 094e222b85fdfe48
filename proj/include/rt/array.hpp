#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace rt {

using cplx = std::complex<double>;
using Dims = std::vector<std::size_t>;

enum class Kind : std::uint8_t { boolean, real, complex };

const char* kind_name(Kind k);

/// Arithmetic promotion: boolean -> real -> complex.
inline Kind promote(Kind a, Kind b) {
  if (a == Kind::complex || b == Kind::complex) return Kind::complex;
  return Kind::real;
}

template <class T>
struct kind_of;
template <>
struct kind_of<std::uint8_t> {
  static constexpr Kind value = Kind::boolean;
};
template <>
struct kind_of<double> {
  static constexpr Kind value = Kind::real;
};
template <>
struct kind_of<cplx> {
  static constexpr Kind value = Kind::complex;
};

std::size_t product_of(std::span<const std::size_t> dims);

/// Column-major strides for `dims`.
Dims strides_of(const Dims& dims);

/// Dense multidimensional array with MATLAB-style dimensions.
///
/// Storage is column-major so that each (rows x cols) page is contiguous and
/// pages enumerate the trailing dimensions. Dimensions are canonical: at least
/// two, trailing singletons beyond the second trimmed. Storage is shared
/// between copies and cloned on the first write.
class Array {
 public:
  using Storage = std::variant<std::vector<std::uint8_t>, std::vector<double>,
                               std::vector<cplx>>;

  Array();
  Array(Dims dims, std::vector<double> values);
  Array(Dims dims, std::vector<cplx> values);
  static Array booleans(Dims dims, std::vector<std::uint8_t> values);
  static Array zeros(Dims dims, Kind kind = Kind::real);
  static Array filled(Dims dims, double value);
  static Array scalar(double v) { return Array({1, 1}, std::vector<double>{v}); }
  static Array scalar(cplx v) { return Array({1, 1}, std::vector<cplx>{v}); }

  const Dims& dims() const noexcept { return dims_; }
  /// Size of dimension k; 1 beyond ndims().
  std::size_t dim(std::size_t k) const noexcept {
    return k < dims_.size() ? dims_[k] : 1;
  }
  std::size_t ndims() const noexcept { return dims_.size(); }
  std::size_t rows() const noexcept { return dims_[0]; }
  std::size_t cols() const noexcept { return dims_[1]; }
  std::size_t numel() const noexcept;
  Kind kind() const noexcept { return static_cast<Kind>(storage_->index()); }

  template <class T>
  std::span<const T> view() const {
    const auto& v = std::get<std::vector<T>>(*storage_);
    return {v.data(), v.size()};
  }

  /// Mutable access; clones shared storage first.
  template <class T>
  std::span<T> edit() {
    if (storage_.use_count() > 1) storage_ = std::make_shared<Storage>(*storage_);
    auto& v = std::get<std::vector<T>>(*storage_);
    return {v.data(), v.size()};
  }

  template <class F>
  decltype(auto) visit(F&& f) const {
    return std::visit(
        [&](const auto& v) -> decltype(auto) {
          using T = typename std::decay_t<decltype(v)>::value_type;
          return f(std::span<const T>(v.data(), v.size()));
        },
        *storage_);
  }

  /// Converted copy (shares storage when the kind already matches).
  Array to_kind(Kind k) const;
  /// Same entries with new dimensions (numel must agree). Shares storage.
  Array reshaped(Dims dims) const;

  cplx complex_at(std::size_t lin) const;
  double real_at(std::size_t lin) const;

  bool same_storage(const Array& other) const noexcept {
    return storage_ == other.storage_;
  }

 private:
  Array(Dims dims, std::shared_ptr<Storage> storage);

  Dims dims_;
  std::shared_ptr<Storage> storage_;
};

/// Canonical form of a dimension list: >= 2 entries, no trailing singletons
/// beyond the second.
Dims canonical_dims(Dims dims);

std::string dims_string(const Dims& dims);

namespace detail {

/// Visits every contiguous run of an N-d traversal of `out` (column-major)
/// with K source stride vectors. `f(out_offset, bases, steps, count)` handles
/// one run of `count` elements; source k element j lives at
/// bases[k] + j * steps[k].
template <std::size_t K, class F>
void strided_runs(const Dims& out, const std::array<const Dims*, K>& strides,
                  F&& f) {
  const std::size_t total = product_of(out);
  if (total == 0) return;
  // Drop singleton axes; they never move any offset.
  std::vector<std::size_t> ext;
  std::vector<std::array<std::size_t, K>> st;
  for (std::size_t a = 0; a < out.size(); ++a) {
    if (out[a] == 1) continue;
    std::array<std::size_t, K> s{};
    for (std::size_t k = 0; k < K; ++k)
      s[k] = a < strides[k]->size() ? (*strides[k])[a] : 0;
    ext.push_back(out[a]);
    st.push_back(s);
  }
  if (ext.empty()) {
    std::array<std::size_t, K> zero{};
    f(std::size_t{0}, zero, zero, std::size_t{1});
    return;
  }
  // Merge axes that are jointly contiguous in every source.
  std::vector<std::size_t> mext{ext[0]};
  std::vector<std::array<std::size_t, K>> mst{st[0]};
  for (std::size_t a = 1; a < ext.size(); ++a) {
    bool merge = true;
    for (std::size_t k = 0; k < K; ++k)
      if (st[a][k] != mst.back()[k] * mext.back()) merge = false;
    if (merge) {
      mext.back() *= ext[a];
    } else {
      mext.push_back(ext[a]);
      mst.push_back(st[a]);
    }
  }
  const std::size_t n = mext.size();
  const std::size_t run = mext[0];
  std::vector<std::size_t> idx(n, 0);
  std::array<std::size_t, K> base{};
  for (std::size_t lin = 0; lin < total; lin += run) {
    f(lin, base, mst[0], run);
    for (std::size_t a = 1; a < n; ++a) {
      if (++idx[a] < mext[a]) {
        for (std::size_t k = 0; k < K; ++k) base[k] += mst[a][k];
        break;
      }
      for (std::size_t k = 0; k < K; ++k) base[k] -= mst[a][k] * (mext[a] - 1);
      idx[a] = 0;
    }
  }
}

}  // namespace detail

/// Copies src into an array of `out_dims`, reading element (i0, i1, ...) from
/// linear offset sum_k i_k * src_strides[k]. A zero stride replicates.
Array strided_gather(const Array& src, const Dims& out_dims,
                     const Dims& src_strides);

/// Generalized permute: out dimension k is src dimension order[k]. `order`
/// must be a permutation of 0..n-1 with n >= src.ndims(). Moves no data when
/// the non-singleton dimensions keep their relative order.
Array permute_axes(const Array& src, std::span<const std::size_t> order);

/// Sums over the axes flagged in `mask`; those axes become singletons.
Array sum_axes(const Array& src, const std::vector<bool>& mask);

/// Replicates singleton dimensions to reach `target` (MATLAB repmat-style
/// expansion). Non-singleton dims must already match.
Array expand_to(const Array& src, const Dims& target);

}  // namespace rt
