#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "btl/errors.hpp"

namespace btl {

using Index = std::int64_t;

/// Multi-index i = [i_1,...,i_d] with 1-based entries.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<Index> entries) : entries_(std::move(entries)) {}
  MultiIndex(std::initializer_list<Index> entries) : entries_(entries) {}

  Index order() const { return static_cast<Index>(entries_.size()); }

  /// 1-based component access: (*this)[k] is i_k.
  Index operator[](Index k) const { return entries_[static_cast<std::size_t>(k - 1)]; }
  Index& operator[](Index k) { return entries_[static_cast<std::size_t>(k - 1)]; }

  const std::vector<Index>& entries() const { return entries_; }

  bool operator==(const MultiIndex& other) const = default;

 private:
  std::vector<Index> entries_;
};

/// Extent vector n = [n_1,...,n_d] of an order-d tensor, d >= 1, all n_k >= 1.
class Shape {
 public:
  explicit Shape(std::vector<Index> dims);
  Shape(std::initializer_list<Index> dims) : Shape(std::vector<Index>(dims)) {}

  Index order() const { return static_cast<Index>(dims_.size()); }

  /// 1-based: dim(k) is n_k.
  Index dim(Index k) const { return dims_[static_cast<std::size_t>(k - 1)]; }

  const std::vector<Index>& dims() const { return dims_; }

  /// Total element count N = n_1 * ... * n_d.
  Index count() const;

  /// Throws IndexError naming the offending mode unless 1 <= i <= n.
  void check_index(const MultiIndex& i) const;

  bool operator==(const Shape& other) const = default;

 private:
  std::vector<Index> dims_;
};

/// Product of an extent list; the empty product is 1.
Index product(std::span<const Index> dims);

/// Linear index of i within extents n, both 1-based, first mode fastest.
/// Tolerates empty inputs (returns 1) so that degenerate unfoldings work.
Index linear_index(std::span<const Index> i, std::span<const Index> n);

/// alpha = i_1 + (i_2-1) n_1 + ... + (i_d-1) n_1...n_{d-1}, in 1..N.
Index ivec(const MultiIndex& i, const Shape& n);

/// Inverse of ivec: the unique i with ivec(i, n) == alpha.
MultiIndex ivec_inverse(Index alpha, const Shape& n);

/// Visits every multi-index 1 <= i <= n in vec order (first mode fastest).
template <typename F>
void for_each_index(std::span<const Index> n, F&& fn) {
  for (Index d : n) {
    if (d < 1) return;  // empty range
  }
  MultiIndex i(std::vector<Index>(n.size(), 1));
  const Index d = static_cast<Index>(n.size());
  while (true) {
    fn(static_cast<const MultiIndex&>(i));
    Index k = 1;
    while (k <= d) {
      if (i[k] < n[static_cast<std::size_t>(k - 1)]) {
        ++i[k];
        break;
      }
      i[k] = 1;
      ++k;
    }
    if (k > d) return;
  }
}

template <typename F>
void for_each_index(const Shape& n, F&& fn) {
  for_each_index(std::span<const Index>(n.dims()), std::forward<F>(fn));
}

/// Dense order-d tensor stored in vec order: data[ivec(i,n)-1] = A(i).
class DenseTensor {
 public:
  explicit DenseTensor(Shape shape);
  DenseTensor(Shape shape, std::vector<double> data);

  /// Order-1 tensor from raw values.
  static DenseTensor vector(std::vector<double> values);

  const Shape& shape() const { return shape_; }
  Index order() const { return shape_.order(); }
  Index size() const { return static_cast<Index>(data_.size()); }

  double at(const MultiIndex& i) const { return data_[offset(i)]; }
  double& at(const MultiIndex& i) { return data_[offset(i)]; }

  /// The vec of the tensor is its storage; zero-copy by design. Disallowed
  /// on temporaries since the view must not outlive the tensor.
  std::span<const double> vec() const& { return data_; }
  std::span<const double> vec() const&& = delete;
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

 private:
  std::size_t offset(const MultiIndex& i) const;

  Shape shape_;
  std::vector<double> data_;
};

/// Dense matrix in column-stacked (vec) order. Indices are 1-based so that a
/// DenseMatrix and the order-2 DenseTensor with the same entries agree.
class DenseMatrix {
 public:
  DenseMatrix(Index rows, Index cols);
  DenseMatrix(Index rows, Index cols, std::vector<double> data);

  Index rows() const { return rows_; }
  Index cols() const { return cols_; }

  double at(Index i, Index j) const { return data_[offset(i, j)]; }
  double& at(Index i, Index j) { return data_[offset(i, j)]; }

  std::span<const double> data() const { return data_; }
  std::vector<double>& raw() { return data_; }
  const std::vector<double>& raw() const { return data_; }

  bool operator==(const DenseMatrix& other) const = default;

 private:
  std::size_t offset(Index i, Index j) const {
    return static_cast<std::size_t>((j - 1) * rows_ + (i - 1));
  }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> data_;
};

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);
std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x);
DenseMatrix transposed(const DenseMatrix& a);
DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b);
DenseMatrix identity_matrix(Index n);

/// C(i) = A(i(1:d)) * B(i(d+1:d+e)); the shape concatenates the factors'.
DenseTensor outer_product(const DenseTensor& a, const DenseTensor& b);

/// a^(1) o ... o a^(d) from order-1 factors; vec equals a^(d) (x) ... (x) a^(1).
DenseTensor rank1(const std::vector<DenseTensor>& factors);

/// max |a-b| <= tol * (1 + max |a|), elementwise over equal shapes.
bool approx_equal(const DenseTensor& a, const DenseTensor& b, double tol);
bool approx_equal(std::span<const double> a, std::span<const double> b, double tol);

}  // namespace btl
