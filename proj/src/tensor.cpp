#include "btl/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace btl {

Shape::Shape(std::vector<Index> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) {
    throw ArgumentError("shape must have order >= 1");
  }
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] < 1) {
      throw ArgumentError("shape dimension " + std::to_string(k + 1) +
                          " must be positive, got " + std::to_string(dims_[k]));
    }
  }
}

Index Shape::count() const { return product(dims_); }

void Shape::check_index(const MultiIndex& i) const {
  if (i.order() != order()) {
    throw IndexError("multi-index order " + std::to_string(i.order()) +
                     " does not match tensor order " + std::to_string(order()));
  }
  for (Index k = 1; k <= order(); ++k) {
    if (i[k] < 1 || i[k] > dim(k)) {
      throw IndexError("index " + std::to_string(i[k]) + " out of range 1.." +
                       std::to_string(dim(k)) + " in mode " + std::to_string(k));
    }
  }
}

Index product(std::span<const Index> dims) {
  Index n = 1;
  for (Index d : dims) n *= d;
  return n;
}

Index linear_index(std::span<const Index> i, std::span<const Index> n) {
  Index alpha = 1;
  Index stride = 1;
  for (std::size_t k = 0; k < i.size(); ++k) {
    alpha += (i[k] - 1) * stride;
    stride *= n[k];
  }
  return alpha;
}

Index ivec(const MultiIndex& i, const Shape& n) {
  n.check_index(i);
  return linear_index(i.entries(), n.dims());
}

MultiIndex ivec_inverse(Index alpha, const Shape& n) {
  const Index total = n.count();
  if (alpha < 1 || alpha > total) {
    throw IndexError("linear index " + std::to_string(alpha) + " out of range 1.." +
                     std::to_string(total));
  }
  std::vector<Index> i(static_cast<std::size_t>(n.order()));
  Index rest = alpha - 1;
  for (Index k = 1; k <= n.order(); ++k) {
    i[static_cast<std::size_t>(k - 1)] = rest % n.dim(k) + 1;
    rest /= n.dim(k);
  }
  return MultiIndex(std::move(i));
}

DenseTensor::DenseTensor(Shape shape)
    : shape_(std::move(shape)), data_(static_cast<std::size_t>(shape_.count()), 0.0) {}

DenseTensor::DenseTensor(Shape shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (static_cast<Index>(data_.size()) != shape_.count()) {
    throw ShapeError("data length " + std::to_string(data_.size()) +
                     " does not match element count " + std::to_string(shape_.count()));
  }
}

DenseTensor DenseTensor::vector(std::vector<double> values) {
  Shape shape({static_cast<Index>(values.size())});
  return DenseTensor(std::move(shape), std::move(values));
}

std::size_t DenseTensor::offset(const MultiIndex& i) const {
  shape_.check_index(i);
  return static_cast<std::size_t>(linear_index(i.entries(), shape_.dims()) - 1);
}

DenseMatrix::DenseMatrix(Index rows, Index cols)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {
  if (rows < 1 || cols < 1) {
    throw ArgumentError("matrix dimensions must be positive");
  }
}

DenseMatrix::DenseMatrix(Index rows, Index cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (rows < 1 || cols < 1) {
    throw ArgumentError("matrix dimensions must be positive");
  }
  if (static_cast<Index>(data_.size()) != rows * cols) {
    throw ShapeError("matrix data length does not match rows*cols");
  }
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions " + std::to_string(a.cols()) + " and " +
                     std::to_string(b.rows()) + " differ");
  }
  DenseMatrix c(a.rows(), b.cols());
  for (Index j = 1; j <= b.cols(); ++j) {
    for (Index k = 1; k <= a.cols(); ++k) {
      const double bkj = b.at(k, j);
      if (bkj == 0.0) continue;
      for (Index i = 1; i <= a.rows(); ++i) {
        c.at(i, j) += a.at(i, k) * bkj;
      }
    }
  }
  return c;
}

std::vector<double> matvec(const DenseMatrix& a, std::span<const double> x) {
  if (static_cast<Index>(x.size()) != a.cols()) {
    throw ShapeError("matvec: vector length does not match matrix columns");
  }
  std::vector<double> y(static_cast<std::size_t>(a.rows()), 0.0);
  for (Index k = 1; k <= a.cols(); ++k) {
    const double xk = x[static_cast<std::size_t>(k - 1)];
    if (xk == 0.0) continue;
    for (Index i = 1; i <= a.rows(); ++i) {
      y[static_cast<std::size_t>(i - 1)] += a.at(i, k) * xk;
    }
  }
  return y;
}

DenseMatrix transposed(const DenseMatrix& a) {
  DenseMatrix t(a.cols(), a.rows());
  for (Index j = 1; j <= a.cols(); ++j) {
    for (Index i = 1; i <= a.rows(); ++i) {
      t.at(j, i) = a.at(i, j);
    }
  }
  return t;
}

DenseMatrix kron(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index ja = 1; ja <= a.cols(); ++ja) {
    for (Index ia = 1; ia <= a.rows(); ++ia) {
      const double aij = a.at(ia, ja);
      if (aij == 0.0) continue;
      for (Index jb = 1; jb <= b.cols(); ++jb) {
        for (Index ib = 1; ib <= b.rows(); ++ib) {
          c.at((ia - 1) * b.rows() + ib, (ja - 1) * b.cols() + jb) = aij * b.at(ib, jb);
        }
      }
    }
  }
  return c;
}

DenseMatrix identity_matrix(Index n) {
  DenseMatrix m(n, n);
  for (Index i = 1; i <= n; ++i) m.at(i, i) = 1.0;
  return m;
}

DenseTensor outer_product(const DenseTensor& a, const DenseTensor& b) {
  std::vector<Index> dims = a.shape().dims();
  dims.insert(dims.end(), b.shape().dims().begin(), b.shape().dims().end());
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(a.size() * b.size()));
  // vec order of the concatenated shape: the a-part varies fastest.
  for (double bv : b.vec()) {
    for (double av : a.vec()) {
      data.push_back(av * bv);
    }
  }
  return DenseTensor(Shape(std::move(dims)), std::move(data));
}

DenseTensor rank1(const std::vector<DenseTensor>& factors) {
  if (factors.empty()) {
    throw ArgumentError("rank1 requires at least one factor");
  }
  for (std::size_t k = 0; k < factors.size(); ++k) {
    if (factors[k].order() != 1) {
      throw ArgumentError("rank1 factor " + std::to_string(k + 1) + " is not order-1");
    }
  }
  DenseTensor result = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    result = outer_product(result, factors[k]);
  }
  return result;
}

bool approx_equal(std::span<const double> a, std::span<const double> b, double tol) {
  if (a.size() != b.size()) {
    throw ShapeError("approx_equal: lengths differ");
  }
  double max_abs = 0.0;
  for (double v : a) max_abs = std::max(max_abs, std::abs(v));
  double max_diff = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    max_diff = std::max(max_diff, std::abs(a[k] - b[k]));
  }
  return max_diff <= tol * (1.0 + max_abs);
}

bool approx_equal(const DenseTensor& a, const DenseTensor& b, double tol) {
  if (!(a.shape() == b.shape())) {
    throw ShapeError("approx_equal: shapes differ");
  }
  return approx_equal(a.vec(), b.vec(), tol);
}

}  // namespace btl
