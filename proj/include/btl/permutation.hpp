#pragma once

#include <span>
#include <vector>

#include "btl/tensor.hpp"

namespace btl {

/// Integer-vector representation of a permutation matrix: v holds each of
/// 1..n exactly once and stands for the matrix P_v that maps x to x(v).
/// The matrix itself is never formed outside the test oracle.
class PermutationVector {
 public:
  explicit PermutationVector(std::vector<Index> v);

  static PermutationVector identity(Index n);

  Index size() const { return static_cast<Index>(v_.size()); }

  /// 1-based: p[k] is v_k.
  Index operator[](Index k) const { return v_[static_cast<std::size_t>(k - 1)]; }

  const std::vector<Index>& entries() const { return v_; }

  bool is_identity() const;

  bool operator==(const PermutationVector& other) const = default;

 private:
  struct Unchecked {};
  PermutationVector(std::vector<Index> v, Unchecked) : v_(std::move(v)) {}

  friend PermutationVector perfect_shuffle(Index q, Index r);
  friend PermutationVector invert(const PermutationVector&);
  friend PermutationVector compose(const PermutationVector&, const PermutationVector&);
  friend PermutationVector kron(const PermutationVector&, const PermutationVector&);
  friend PermutationVector direct_sum(const PermutationVector&, const PermutationVector&);

  std::vector<Index> v_;
};

/// The (q,r) perfect shuffle of size qr: w = [1:r:qr, 2:r:qr, ..., r:r:qr].
/// Applying it regroups a length-qr vector by residue classes mod r.
PermutationVector perfect_shuffle(Index q, Index r);

/// y = P_v x, i.e. y_k = x[v_k].
template <typename T>
std::vector<T> permute(const PermutationVector& p, std::span<const T> x) {
  if (static_cast<Index>(x.size()) != p.size()) {
    throw ShapeError("permutation size " + std::to_string(p.size()) +
                     " does not match vector length " + std::to_string(x.size()));
  }
  std::vector<T> y(x.size());
  for (Index k = 1; k <= p.size(); ++k) {
    y[static_cast<std::size_t>(k - 1)] = x[static_cast<std::size_t>(p[k] - 1)];
  }
  return y;
}

inline std::vector<double> permute(const PermutationVector& p, const std::vector<double>& x) {
  return permute(p, std::span<const double>(x));
}
inline std::vector<Index> permute(const PermutationVector& p, const std::vector<Index>& x) {
  return permute(p, std::span<const Index>(x));
}

/// The transpose, which for permutations is the inverse.
PermutationVector invert(const PermutationVector& p);

/// Matrix product P_u * P_p, whose vector is p(u), i.e. w_k = p[u_k].
/// Worked example: u = [2,1], p = [1,3,2] gives w = p(u) = [3,1,2], and
/// permute(w, x) = permute(u, permute(p, x)) = [x3, x1, x2].
PermutationVector compose(const PermutationVector& u, const PermutationVector& p);

/// Kronecker product P_u (x) P_p: w = 1_n (x) p + m*(u - 1_n) (x) 1_m.
PermutationVector kron(const PermutationVector& u, const PermutationVector& p);

/// Block diagonal diag(P_u, P_p): w = [u; n*1_m + p].
PermutationVector direct_sum(const PermutationVector& u, const PermutationVector& p);

/// Dense 0/1 matrix with row k equal to e_{v_k}^T; test oracle only.
DenseMatrix to_dense(const PermutationVector& p);

}  // namespace btl
