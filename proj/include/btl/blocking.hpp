#pragma once

#include <vector>

#include "btl/permutation.hpp"
#include "btl/tensor.hpp"
#include "btl/unfolding.hpp"

namespace btl {

/// Per-mode partition vectors m^(1..d) turning an n_1 x ... x n_d tensor into
/// a b_1 x ... x b_d block tensor. Each m^(k) must sum to n_k.
class Blocking {
 public:
  Blocking(Shape shape, std::vector<std::vector<Index>> parts);

  /// One block per mode.
  static Blocking trivial(const Shape& n);
  /// Every block a single entry.
  static Blocking finest(const Shape& n);

  const Shape& shape() const { return shape_; }
  Index order() const { return shape_.order(); }

  /// Partition vector m^(k), 1-based mode.
  const std::vector<Index>& part(Index k) const {
    return parts_[static_cast<std::size_t>(k - 1)];
  }
  const std::vector<std::vector<Index>>& parts() const { return parts_; }

  /// Block-grid extents b = [b_1..b_d].
  const std::vector<Index>& block_counts() const { return counts_; }
  Index block_count(Index k) const { return counts_[static_cast<std::size_t>(k - 1)]; }

  /// m^(k)_j, and the index bounds l^(k)_j, u^(k)_j of block j along mode k.
  Index part_size(Index k, Index j) const;
  Index lower(Index k, Index j) const;
  Index upper(Index k, Index j) const;

  /// Throws IndexError unless 1 <= i <= b.
  void check_block_index(const MultiIndex& i) const;

  Shape block_shape(const MultiIndex& i) const;

  /// vol_M(i) = m^(1)_{i_1} * ... * m^(d)_{i_d}, the block's element count.
  Index vol(const MultiIndex& i) const;

  bool is_uniform() const;

  bool operator==(const Blocking& other) const = default;

 private:
  Shape shape_;
  std::vector<std::vector<Index>> parts_;
  std::vector<Index> counts_;
  std::vector<std::vector<Index>> lower_;
};

/// Block i of A: the subtensor A(l_{i_1}:u_{i_1}, ..., l_{i_d}:u_{i_d}).
DenseTensor extract_block(const DenseTensor& a, const Blocking& m, const MultiIndex& i);

/// Stacks vec(A_i) over all blocks, blocks taken in vec order of b.
std::vector<double> vec_blocked(const DenseTensor& a, const Blocking& m);

/// The permutation with permute(P_M, vec(A)) = vec_blocked(A, M), assembled as
/// Q_d ... Q_2 Q_1 from perfect shuffles, Kronecker products, and direct
/// sums of integer vectors only.
PermutationVector build_P_M(const Blocking& m);

/// The factors [Q_1, ..., Q_d] with P_M = Q_d ... Q_2 Q_1 (Q_1 identity).
/// Applying them in order walks vec(A) to vec_blocked(A, M) one mode at a
/// time, each step a transposition of the block/offset index pair.
std::vector<PermutationVector> P_M_factors(const Blocking& m);

/// Shape, uniform block size mu_k, and block count b_k per mode
/// (n_k = mu_k * b_k). Construction rejects non-uniform blockings.
struct UniformParams {
  Shape shape;
  std::vector<Index> block_size;
  std::vector<Index> block_count;

  UniformParams(Shape shape, std::vector<Index> block_size);
  static UniformParams from_blocking(const Blocking& m);
  Blocking to_blocking() const;
};

/// Same permutation as build_P_M but via the closed uniform-blocking form
/// Q_k = I_{b_k N_d / N_k} (x) Pi_{mu_k, B_{k-1}} (x) I_{D_{k-1}}.
PermutationVector build_P_M_uniform(const UniformParams& params);

/// P over one side of an unfolding: build_P_M of the blocking restricted to
/// `modes` (in list order); the empty list gives the identity on one row.
PermutationVector unfolding_side_permutation(const Blocking& m, const std::vector<Index>& modes);

/// Block-grid geometry of a block unfolding: row space partitioned by the
/// r-mode blockings, column space by the c-mode blockings. Linear block
/// coordinates follow ivec over the block grids.
struct BlockLayout {
  std::vector<std::vector<Index>> row_parts;  // per r-mode, in r order
  std::vector<std::vector<Index>> col_parts;  // per c-mode, in c order
  std::vector<Index> row_grid;                // b(r); empty when e = 0
  std::vector<Index> col_grid;                // b(c); empty when e = d
  std::vector<Index> block_row_sizes;         // height of each linear block row
  std::vector<Index> block_col_sizes;
  std::vector<Index> block_row_offsets;       // 0-based row start of each block row
  std::vector<Index> block_col_offsets;

  Index block_rows() const { return static_cast<Index>(block_row_sizes.size()); }
  Index block_cols() const { return static_cast<Index>(block_col_sizes.size()); }

  Index linear_row(const MultiIndex& kr) const;
  Index linear_col(const MultiIndex& kc) const;
};

/// A_{R x C} = P_R A_{r x c} P_C^T together with its block grid.
struct BlockUnfolding {
  DenseMatrix matrix;
  BlockLayout layout;
  UnfoldSpec spec;
  Blocking source_blocking;
};

BlockUnfolding block_unfold(const DenseTensor& a, const Blocking& m, const UnfoldSpec& spec);

/// Block (mu, tau) of a block matrix, by linear block coordinates.
DenseMatrix get_block(const DenseMatrix& matrix, const BlockLayout& layout, Index mu, Index tau);

/// Block k of a block unfolding: mu = ivec(k(r), b(r)), tau = ivec(k(c), b(c)).
/// Equals the r x c unfolding of block k of the source tensor.
DenseMatrix get_block(const BlockUnfolding& bu, const MultiIndex& k);

/// A matrix with a row and column partition.
struct BlockedMatrix {
  DenseMatrix matrix;
  std::vector<Index> row_parts;
  std::vector<Index> col_parts;

  BlockedMatrix(DenseMatrix matrix, std::vector<Index> row_parts, std::vector<Index> col_parts);

  Index block_rows() const { return static_cast<Index>(row_parts.size()); }
  Index block_cols() const { return static_cast<Index>(col_parts.size()); }
  DenseMatrix block(Index i, Index j) const;
};

struct TracySinghProduct {
  DenseMatrix matrix;
  BlockLayout layout;
};

/// Block matrix whose (i, j) block, at linear position
/// (ivec(i, row counts), ivec(j, col counts)), is B^(d)_{i_d,j_d} (x) ... (x)
/// B^(1)_{i_1,j_1}; globally P_R (B^(d) (x) ... (x) B^(1)) P_C^T.
TracySinghProduct tracy_singh(const std::vector<BlockedMatrix>& factors);

}  // namespace btl
