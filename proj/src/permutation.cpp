#include "btl/permutation.hpp"

#include <numeric>
#include <string>

namespace btl {

PermutationVector::PermutationVector(std::vector<Index> v) : v_(std::move(v)) {
  const Index n = static_cast<Index>(v_.size());
  if (n == 0) {
    throw ArgumentError("permutation vector must be non-empty");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (Index k = 0; k < n; ++k) {
    const Index e = v_[static_cast<std::size_t>(k)];
    if (e < 1 || e > n) {
      throw ArgumentError("permutation entry " + std::to_string(e) + " out of range 1.." +
                          std::to_string(n));
    }
    if (seen[static_cast<std::size_t>(e - 1)]) {
      throw ArgumentError("permutation entry " + std::to_string(e) + " repeated");
    }
    seen[static_cast<std::size_t>(e - 1)] = true;
  }
}

PermutationVector PermutationVector::identity(Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  std::iota(v.begin(), v.end(), Index{1});
  return PermutationVector(std::move(v), Unchecked{});
}

bool PermutationVector::is_identity() const {
  for (Index k = 1; k <= size(); ++k) {
    if ((*this)[k] != k) return false;
  }
  return true;
}

PermutationVector perfect_shuffle(Index q, Index r) {
  if (q < 1 || r < 1) {
    throw ArgumentError("perfect shuffle factors must be positive");
  }
  std::vector<Index> w;
  w.reserve(static_cast<std::size_t>(q * r));
  for (Index start = 1; start <= r; ++start) {
    for (Index e = start; e <= q * r; e += r) {
      w.push_back(e);
    }
  }
  return PermutationVector(std::move(w), PermutationVector::Unchecked{});
}

PermutationVector invert(const PermutationVector& p) {
  std::vector<Index> w(static_cast<std::size_t>(p.size()));
  for (Index k = 1; k <= p.size(); ++k) {
    w[static_cast<std::size_t>(p[k] - 1)] = k;
  }
  return PermutationVector(std::move(w), PermutationVector::Unchecked{});
}

PermutationVector compose(const PermutationVector& u, const PermutationVector& p) {
  if (u.size() != p.size()) {
    throw ShapeError("compose: sizes " + std::to_string(u.size()) + " and " +
                     std::to_string(p.size()) + " differ");
  }
  std::vector<Index> w(static_cast<std::size_t>(u.size()));
  for (Index k = 1; k <= u.size(); ++k) {
    w[static_cast<std::size_t>(k - 1)] = p[u[k]];
  }
  return PermutationVector(std::move(w), PermutationVector::Unchecked{});
}

PermutationVector kron(const PermutationVector& u, const PermutationVector& p) {
  const Index n = u.size();
  const Index m = p.size();
  std::vector<Index> w;
  w.reserve(static_cast<std::size_t>(n * m));
  for (Index i = 1; i <= n; ++i) {
    const Index base = m * (u[i] - 1);
    for (Index j = 1; j <= m; ++j) {
      w.push_back(base + p[j]);
    }
  }
  return PermutationVector(std::move(w), PermutationVector::Unchecked{});
}

PermutationVector direct_sum(const PermutationVector& u, const PermutationVector& p) {
  const Index n = u.size();
  std::vector<Index> w;
  w.reserve(static_cast<std::size_t>(n + p.size()));
  w.insert(w.end(), u.entries().begin(), u.entries().end());
  for (Index j = 1; j <= p.size(); ++j) {
    w.push_back(n + p[j]);
  }
  return PermutationVector(std::move(w), PermutationVector::Unchecked{});
}

DenseMatrix to_dense(const PermutationVector& p) {
  DenseMatrix m(p.size(), p.size());
  for (Index k = 1; k <= p.size(); ++k) {
    m.at(k, p[k]) = 1.0;
  }
  return m;
}

}  // namespace btl
