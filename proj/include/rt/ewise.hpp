#pragma once

#include <optional>
#include <span>
#include <vector>

#include "rt/tensor.hpp"

namespace rt {

/// Result of matching the index lists of N operands.
struct AlignmentPlanN {
  /// Union of indices by id, in left-to-right order; the leftmost variant of
  /// an id is kept.
  std::vector<Index> union_indices;
  /// Ids that appeared in both variants; summed after an entrywise kernel.
  std::vector<Index> contract_set;
  /// placement[k][u]: tensor dimension of operand k holding union index u.
  std::vector<std::vector<std::optional<std::size_t>>> placement;
};

struct Aligned {
  /// Operand entries permuted to [rows, cols, union...] with singleton
  /// dimensions for absent ids.
  std::vector<Array> arrays;
  AlignmentPlanN plan;
};

/// Aligns N operands on the union of their indices. Same-id dimensions must
/// agree or be singleton (DimMismatchError otherwise).
Aligned alignn(std::span<const Tensor> operands);

enum class BinaryOp {
  add,
  sub,
  eq,
  ne,
  lt,
  gt,
  le,
  ge,
  logical_and,
  logical_or,
  times,
  rdivide,
  ldivide,
  power,
};

const char* op_symbol(BinaryOp op);

/// Entrywise binary operation with implicit with-unit outer products: the
/// operands are aligned, size-1 dimensions broadcast, the kernel applied, and
/// ids that appeared in both variants contracted afterwards. Relations and
/// logical operators yield boolean entries.
Tensor ewise_binary(BinaryOp op, const Tensor& a, const Tensor& b);

enum class UnaryOp { neg, uplus, conj, logical_not, abs, log, exp, round, step, real, imag };

/// Entrywise unary function; indices are unchanged. `precision` is the number
/// of decimal digits kept by `round`. `step` is the strict test x > 0.
Tensor ewise_unary(UnaryOp op, const Tensor& t, int precision = 0);

/// True iff the aligned entries are identical and no id appears with
/// conflicting variants across the operands. NaN never equals NaN.
bool equal_all(std::span<const Tensor> operands);

inline bool equal_all(std::initializer_list<Tensor> operands) {
  return equal_all(std::span<const Tensor>(operands.begin(), operands.size()));
}

}  // namespace rt
