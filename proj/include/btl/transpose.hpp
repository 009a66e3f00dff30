#pragma once

#include "btl/permutation.hpp"
#include "btl/tensor.hpp"

namespace btl {

/// B = A^<p> with B(i(p)) = A(i); the result shape is n(p). The transposed
/// tensor is materialized so the identities below are statements about
/// physical vec order.
DenseTensor p_transpose(const DenseTensor& a, const PermutationVector& p);

/// Vector form of I_{n4} (x) Pi_{n3,n2} (x) I_{n1}. Applied to the vec of an
/// n1 x n2 x n3 x n4 tensor it yields the vec of its [1 3 2 4] transpose.
PermutationVector lemma21_perm(Index n1, Index n2, Index n3, Index n4);

/// Vec-level permutation of the transpose swapping modes k and k+1.
PermutationVector adjacent_swap_perm(const Shape& n, Index k);

/// Vec-level permutation of the transpose moving mode k to the front.
PermutationVector to_front_perm(const Shape& n, Index k);

/// Vec-level permutation of an arbitrary p-transpose, assembled from
/// adjacent swaps along a bubble sort of p (stable left-to-right passes):
/// vec(A^<p>) = permute(transpose_perm(n, p), vec(A)).
PermutationVector transpose_perm(const Shape& n, const PermutationVector& p);

}  // namespace btl
