#pragma once

#include <span>
#include <vector>

#include "rt/tensor.hpp"

namespace rt {

/// Swaps rows and columns of every page and complements every index.
Tensor page_transpose(const Tensor& t);
/// page_transpose with conjugated entries.
Tensor page_ctranspose(const Tensor& t);

/// Trace of each square page; pages become 1x1 and the indices are kept.
Tensor page_trace(const Tensor& t);
/// Main diagonal of each page as a column of length min(rows, cols).
Tensor page_diag(const Tensor& t);

/// Concatenates arrays along `axis` (0 rows, 1 cols, d + 2 for tensor
/// dimension d). Every other dimension must agree or be 1; singletons are
/// replicated to the common size first.
Array page_cat(std::size_t axis, std::span<const Array> arrays);

enum class MatrixAxis { rows, cols };

/// Index concatenation: operands are aligned on the union of their indices
/// (excluding `where`), expanded by replication, and joined along the
/// dimension of `where`, whose size becomes the sum of the operand sizes.
/// Every operand must carry `where` (UnknownIndexError otherwise). Ids
/// appearing in both variants are contracted afterwards, `where` excepted.
Tensor concat(const Index& where, std::span<const Tensor> operands);

/// Concatenation of the matrix parts with the same alignment and expansion.
Tensor concat(MatrixAxis where, std::span<const Tensor> operands);

}  // namespace rt
