#pragma once

#include <vector>

#include "btl/blocking.hpp"
#include "btl/permutation.hpp"
#include "btl/tensor.hpp"

namespace btl {

/// Mode bookkeeping of the contraction H(i,j) = sum_k F^<p>(i,k) G^<q>(k,j):
/// p permutes the f+l modes of F, q the g+l modes of G, and
///   r = p(1:f), lambda = p(f+1:f+l), psi = q(1:l), c = q(l+1:l+g).
/// l >= 1; f = g = 0 (a full inner product) yields a one-entry tensor.
class ContractionPlan {
 public:
  ContractionPlan(PermutationVector p, PermutationVector q, Index f);

  const PermutationVector& p() const { return p_; }
  const PermutationVector& q() const { return q_; }
  Index f() const { return f_; }
  Index ell() const { return p_.size() - f_; }
  Index g() const { return q_.size() - ell(); }

  std::vector<Index> row_modes() const;         // r
  std::vector<Index> contracted_f_modes() const;  // lambda
  std::vector<Index> contracted_g_modes() const;  // psi
  std::vector<Index> col_modes() const;         // c

  /// Checks orders and the extent condition alpha(lambda) = beta(psi).
  void validate(const Shape& f_shape, const Shape& g_shape) const;

  /// alpha(r) ++ beta(c); the empty case degenerates to [1].
  Shape result_shape(const Shape& f_shape, const Shape& g_shape) const;

 private:
  PermutationVector p_;
  PermutationVector q_;
  Index f_;
};

/// Direct multi-index summation, the reference the other routes are tested
/// against.
DenseTensor contract_naive(const DenseTensor& f, const DenseTensor& g,
                           const ContractionPlan& plan);

/// One matrix multiplication of unfoldings:
/// H_{[1:f] x [f+1:f+g]} = F_{r x lambda} * G_{psi x c}.
DenseTensor contract_unfolded(const DenseTensor& f, const DenseTensor& g,
                              const ContractionPlan& plan);

/// A plan plus conformal blockings S of F and T of G: s^(lambda_k) must
/// equal t^(psi_k) for every contracted mode pair.
class BlockedContractionPlan {
 public:
  BlockedContractionPlan(ContractionPlan plan, Blocking f_blocking, Blocking g_blocking);

  const ContractionPlan& plan() const { return plan_; }
  const Blocking& f_blocking() const { return f_blocking_; }
  const Blocking& g_blocking() const { return g_blocking_; }

  /// H inherits {s^(r_*)} for modes 1..f and {t^(c_*)} for modes f+1..f+g.
  Blocking result_blocking() const;

 private:
  ContractionPlan plan_;
  Blocking f_blocking_;
  Blocking g_blocking_;
};

/// Blocked matrix multiplication of the block unfoldings:
/// H_{R x C} = F_{R x Lambda} * G_{Psi x C}, then folded back.
DenseTensor contract_blocked(const DenseTensor& f, const DenseTensor& g,
                             const BlockedContractionPlan& bplan);

/// Block k of H by the per-block recipe
///   (H_k)_{[1:f] x [f+1:f+g]} = sum_q (F_{i(q)})_{r x lambda} (G_{j(q)})_{psi x c}.
DenseMatrix contract_block_recipe(const DenseTensor& f, const DenseTensor& g,
                                  const BlockedContractionPlan& bplan, const MultiIndex& k);

/// C(i) = sum_k A(k) B^(1)(i_1,k_1) ... B^(d)(i_d,k_d), summed directly.
DenseTensor multilinear_naive(const DenseTensor& a, const std::vector<DenseMatrix>& bs);

/// vec(C) = (B^(d) (x) ... (x) B^(1)) vec(A).
DenseTensor multilinear_kron(const DenseTensor& a, const std::vector<DenseMatrix>& bs);

/// d sequential i-mode products A_(i) <- B^(i) A_(i).
DenseTensor multilinear_mode_products(const DenseTensor& a, const std::vector<DenseMatrix>& bs);

/// Row blockings u^(k) of the factors, the blocking inherited by the result.
Blocking multilinear_result_blocking(const std::vector<BlockedMatrix>& bs);

/// Tracy-Singh route: vec_R(C) = B_{R x C} vec_C(A); the column blockings of
/// the factors must match the blocking of A mode by mode.
DenseTensor multilinear_blocked(const DenseTensor& a, const std::vector<BlockedMatrix>& bs,
                                const Blocking& a_blocking);

/// Sequential blocked form: A_{J x C} <- B^(i) A_{I x C} for i = 1..d, each
/// step a blocked matrix multiplication of the mode-i block unfolding.
DenseTensor multilinear_blocked_seq(const DenseTensor& a, const std::vector<BlockedMatrix>& bs,
                                    const Blocking& a_blocking);

}  // namespace btl
