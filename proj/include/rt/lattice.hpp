#pragma once

#include <span>
#include <vector>

#include "rt/tensor.hpp"

namespace rt {

/// Classification of the indices of two operands.
///
/// Ids matched with complementary variants are inner (summed), ids matched
/// with equal variants are pages (entrywise), and unmatched ids are outer.
/// Positions refer to tensor dimensions of each operand; inner and page
/// entries are listed in the order they appear in the left operand.
struct AlignmentPlan2 {
  std::vector<Index> inner, pages, left_outer, right_outer;
  std::vector<std::size_t> a_inner, a_pages, a_outer;
  std::vector<std::size_t> b_inner, b_pages, b_outer;

  /// left_outer ++ right_outer ++ pages (page variants from the left).
  std::vector<Index> result_indices() const;
};

/// Depends only on the index lists; each list must have unique ids.
AlignmentPlan2 align2(std::span<const Index> a, std::span<const Index> b);

enum class Side { left, right };

/// Array axes folded into lattice rows, columns and pages. Axes 0 and 1 are
/// matrix rows and columns, axis t + 2 is tensor dimension t. Singleton axes
/// may be omitted.
struct LatticeMap {
  std::vector<std::size_t> row_axes, col_axes, page_axes;
};

/// A rows x cols x pages view produced by permute-and-reshape.
struct Lattice {
  Array data;
  Dims row_dims, col_dims, page_dims;
  Side side = Side::left;
};

Lattice to_lattice(const Array& entries, const LatticeMap& map, Side side = Side::left);

/// Reshapes the lattice back to row_dims ++ col_dims ++ page_dims and applies
/// `order` (a permute_axes order over those axes).
Array from_lattice(const Lattice& lattice, std::span<const std::size_t> order);

/// C(:,:,k) = A(:,:,k) * B(:,:,k).
Array page_matmul(const Array& a, const Array& b);
/// X(:,:,k) = A(:,:,k) \ B(:,:,k): LU with partial pivoting for square pages,
/// least squares for tall pages.
Array page_solve_left(const Array& a, const Array& b);
/// X(:,:,k) = B(:,:,k) / A(:,:,k).
Array page_solve_right(const Array& b, const Array& a);

/// The framework's `*`: an arbitrary mixture of inner, entrywise and outer
/// products realized as one pagewise matrix product. Matrix rows and columns
/// multiply as usual when both operands are nonscalar and scale otherwise.
Tensor product(const Tensor& a, const Tensor& b);

/// `a \ b`: u with product(a, u) reproducing b. Indices of the denominator
/// `a` are complemented before alignment, so the leftover indices of `a`
/// appear complemented on the result.
Tensor solve_left(const Tensor& a, const Tensor& b);

/// `b / a`: u with product(u, a) reproducing b.
Tensor solve_right(const Tensor& b, const Tensor& a);

}  // namespace rt
