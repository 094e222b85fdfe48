#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "rt/array.hpp"
#include "rt/index.hpp"

namespace rt {

/// Dense entries bound to an ordered list of indices.
///
/// Array dimensions 0 and 1 are matrix rows and columns and carry no index;
/// tensor dimension t lives at array dimension t + 2. The index list may be
/// longer than ndims() - 2, in which case the extra indices address trailing
/// singleton dimensions. A tensor whose rows and columns are both 1 is a
/// scalar of its degree.
class Tensor {
 public:
  Tensor() = default;

  /// Binds `indices` to `entries` without simplifying.
  /// Throws IndexArityError when there are fewer indices than ndims - 2.
  Tensor(Array entries, std::vector<Index> indices);

  /// Degree ndims - 2, with fresh true-variant indices returned alongside.
  static std::pair<Tensor, std::vector<Index>> from_array(Array entries);

  /// Degree-zero tensor; only 2D arrays qualify (OperandKindError otherwise).
  static Tensor plain(Array entries);

  static Tensor scalar(double v) { return Tensor(Array::scalar(v), {}); }

  const Array& entries() const noexcept { return entries_; }
  const std::vector<Index>& indices() const noexcept { return indices_; }
  std::size_t degree() const noexcept { return indices_.size(); }
  std::size_t rows() const noexcept { return entries_.rows(); }
  std::size_t cols() const noexcept { return entries_.cols(); }
  Kind kind() const noexcept { return entries_.kind(); }
  std::size_t numel() const noexcept { return entries_.numel(); }

  /// Size of tensor dimension t (1 for trailing singletons).
  std::size_t index_dim(std::size_t t) const noexcept { return entries_.dim(t + 2); }
  Dims tensor_dims() const;

  /// Position of the first index sharing h's id, irrespective of variant.
  std::optional<std::size_t> position_of(const Index& h) const;

  /// rows == cols == 1.
  bool is_scalar_matrix() const noexcept { return rows() == 1 && cols() == 1; }
  bool has_duplicate_ids() const;

 private:
  Array entries_{Dims{0, 0}, std::vector<double>{}};
  std::vector<Index> indices_;
};

inline Tensor with_indices(Array entries, std::vector<Index> idx) {
  return Tensor(std::move(entries), std::move(idx));
}

/// Attraction then contraction: every group of same-id indices collapses to a
/// generalized diagonal, and groups with mixed variants are then summed away.
/// Surviving indices keep the group's common variant.
Tensor simplify(const Tensor& t);

/// Replaces the indices of t by `subs` (preexisting indices are ignored) and
/// simplifies.
Tensor reindex(const Tensor& t, std::vector<Index> subs);

/// Sums over the dimensions of the indices in `over`, matched by id
/// irrespective of variant, and removes those indices. Unmatched ids address
/// trailing singletons and change nothing.
Tensor sum(const Tensor& t, const std::vector<Index>& over);

/// Reorders dimensions so the index list becomes `new_idx` (matched by id).
/// Every old index must be retained and keeps its variant; extra indices add
/// trailing singleton dimensions with the variant given.
Tensor permute(const Tensor& t, const std::vector<Index>& new_idx);

/// Index-subscripted assignment `dst(subs) = src`: src permuted into the order
/// of `subs`, adopting their variants. `dst` is overwritten.
Tensor assign(const Tensor& dst, const std::vector<Index>& subs, const Tensor& src);
/// A non-tensor right-hand side cannot take index subscripts.
[[noreturn]] void assign(const Tensor& dst, const std::vector<Index>& subs,
                         const Array& src);

/// One numeric subscript: `:` or an inclusive 1-based range.
struct Subscript {
  bool all = false;
  std::size_t lo = 1;
  std::size_t hi = 1;

  static Subscript colon() { return {true, 1, 1}; }
  static Subscript at(std::size_t k) { return {false, k, k}; }
  static Subscript range(std::size_t lo, std::size_t hi) { return {false, lo, hi}; }
};

/// Numeric subscripting of the entries (rows, cols, then tensor dims, 1-based).
/// A single subscript indexes linearly; with fewer subscripts than dimensions
/// the last one spans the remaining dimensions.
Array slice(const Tensor& t, const std::vector<Subscript>& subs);

}  // namespace rt
