#pragma once

#include <vector>

#include "btl/tensor.hpp"

namespace btl {

/// Row/column mode lists of an r x c unfolding. [r c] must be a permutation
/// of 1..d; either side may be empty (e = d or e = 0).
struct UnfoldSpec {
  std::vector<Index> row_modes;
  std::vector<Index> col_modes;

  Index e() const { return static_cast<Index>(row_modes.size()); }
  Index order() const { return static_cast<Index>(row_modes.size() + col_modes.size()); }

  /// Throws ArgumentError listing missing/duplicated modes.
  void validate(Index tensor_order) const;

  /// Extents n(r) and n(c); the empty product convention gives a 1-sized side.
  std::vector<Index> row_dims(const Shape& n) const;
  std::vector<Index> col_dims(const Shape& n) const;
};

/// r = [k], c = [1:k-1, k+1:d].
UnfoldSpec mode_unfold_spec(Index tensor_order, Index k);

/// An unfolding together with the provenance needed to fold it back.
struct UnfoldedMatrix {
  DenseMatrix matrix;
  UnfoldSpec spec;
  Shape source_shape;
};

/// A_{r x c}: entry (ivec(i, n(r)), ivec(j, n(c))) = A^<p>(i, j).
/// e = d gives vec(A) as a single column, e = 0 gives vec(A)^T as a row.
UnfoldedMatrix unfold(const DenseTensor& a, const UnfoldSpec& spec);

/// Mode-k unfolding; its columns are the mode-k fibers.
UnfoldedMatrix mode_unfold(const DenseTensor& a, Index k);

/// Exact inverse of unfold.
DenseTensor fold(const UnfoldedMatrix& m);

/// Row ivec(i, n(r)) of the unfolding without materializing the matrix;
/// equals the vec of the reduced-order subtensor fixed at i.
std::vector<double> unfold_row(const DenseTensor& a, const UnfoldSpec& spec, const MultiIndex& i);

/// Column ivec(j, n(c)), by the same construction.
std::vector<double> unfold_col(const DenseTensor& a, const UnfoldSpec& spec, const MultiIndex& j);

}  // namespace btl
