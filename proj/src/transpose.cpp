#include "btl/transpose.hpp"

#include <string>
#include <utility>

namespace btl {

DenseTensor p_transpose(const DenseTensor& a, const PermutationVector& p) {
  const Shape& n = a.shape();
  const Index d = n.order();
  if (p.size() != d) {
    throw ArgumentError("mode permutation size " + std::to_string(p.size()) +
                        " does not match tensor order " + std::to_string(d));
  }
  std::vector<Index> out_dims(static_cast<std::size_t>(d));
  for (Index t = 1; t <= d; ++t) {
    out_dims[static_cast<std::size_t>(t - 1)] = n.dim(p[t]);
  }
  DenseTensor b{Shape(out_dims)};

  // Strides of the result, then the coefficient each source mode contributes
  // to the target offset: j = i(p) puts source mode p[t] at target slot t.
  std::vector<Index> out_strides(static_cast<std::size_t>(d));
  Index stride = 1;
  for (Index t = 1; t <= d; ++t) {
    out_strides[static_cast<std::size_t>(t - 1)] = stride;
    stride *= out_dims[static_cast<std::size_t>(t - 1)];
  }
  std::vector<Index> coeff(static_cast<std::size_t>(d));
  for (Index t = 1; t <= d; ++t) {
    coeff[static_cast<std::size_t>(p[t] - 1)] = out_strides[static_cast<std::size_t>(t - 1)];
  }

  std::vector<Index> digit(static_cast<std::size_t>(d), 0);  // 0-based odometer
  Index target = 0;
  const auto& src = a.raw();
  auto& dst = b.raw();
  for (std::size_t pos = 0; pos < src.size(); ++pos) {
    dst[static_cast<std::size_t>(target)] = src[pos];
    for (Index k = 0; k < d; ++k) {
      auto ku = static_cast<std::size_t>(k);
      if (digit[ku] + 1 < n.dim(k + 1)) {
        ++digit[ku];
        target += coeff[ku];
        break;
      }
      target -= digit[ku] * coeff[ku];
      digit[ku] = 0;
    }
  }
  return b;
}

PermutationVector lemma21_perm(Index n1, Index n2, Index n3, Index n4) {
  return kron(kron(PermutationVector::identity(n4), perfect_shuffle(n3, n2)),
              PermutationVector::identity(n1));
}

PermutationVector adjacent_swap_perm(const Shape& n, Index k) {
  const Index d = n.order();
  if (k < 1 || k >= d) {
    throw ArgumentError("adjacent swap mode " + std::to_string(k) + " out of range 1.." +
                        std::to_string(d - 1));
  }
  const auto& dims = n.dims();
  const Index left = product(std::span<const Index>(dims).subspan(0, static_cast<std::size_t>(k - 1)));
  const Index right = product(std::span<const Index>(dims).subspan(static_cast<std::size_t>(k + 1)));
  return kron(kron(PermutationVector::identity(right), perfect_shuffle(n.dim(k + 1), n.dim(k))),
              PermutationVector::identity(left));
}

PermutationVector to_front_perm(const Shape& n, Index k) {
  const Index d = n.order();
  if (k < 1 || k > d) {
    throw ArgumentError("mode " + std::to_string(k) + " out of range 1.." + std::to_string(d));
  }
  const auto& dims = n.dims();
  const Index before = product(std::span<const Index>(dims).subspan(0, static_cast<std::size_t>(k - 1)));
  const Index after = product(std::span<const Index>(dims).subspan(static_cast<std::size_t>(k)));
  return kron(PermutationVector::identity(after), perfect_shuffle(n.dim(k), before));
}

PermutationVector transpose_perm(const Shape& n, const PermutationVector& p) {
  const Index d = n.order();
  if (p.size() != d) {
    throw ArgumentError("mode permutation size does not match tensor order");
  }
  // slot[m] = target position of original mode m under p.
  std::vector<Index> slot(static_cast<std::size_t>(d));
  for (Index t = 1; t <= d; ++t) {
    slot[static_cast<std::size_t>(p[t] - 1)] = t;
  }
  std::vector<Index> modes(static_cast<std::size_t>(d));
  std::vector<Index> cur = n.dims();
  for (Index t = 0; t < d; ++t) modes[static_cast<std::size_t>(t)] = t + 1;

  PermutationVector acc = PermutationVector::identity(n.count());
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (Index k = 1; k < d; ++k) {
      const auto a = static_cast<std::size_t>(k - 1);
      const auto b = static_cast<std::size_t>(k);
      if (slot[static_cast<std::size_t>(modes[a] - 1)] >
          slot[static_cast<std::size_t>(modes[b] - 1)]) {
        acc = compose(adjacent_swap_perm(Shape(cur), k), acc);
        std::swap(modes[a], modes[b]);
        std::swap(cur[a], cur[b]);
        swapped = true;
      }
    }
  }
  return acc;
}

}  // namespace btl
