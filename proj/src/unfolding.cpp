#include "btl/unfolding.hpp"

#include <algorithm>
#include <string>

namespace btl {
namespace {

// Offset coefficients of each source mode within the unfolding: modes listed
// in `modes` get the running stride, all others zero.
std::vector<Index> side_coefficients(const Shape& n, const std::vector<Index>& modes) {
  std::vector<Index> coeff(static_cast<std::size_t>(n.order()), 0);
  Index stride = 1;
  for (Index m : modes) {
    coeff[static_cast<std::size_t>(m - 1)] = stride;
    stride *= n.dim(m);
  }
  return coeff;
}

void check_side_index(const MultiIndex& i, const std::vector<Index>& dims, const char* side) {
  if (i.order() != static_cast<Index>(dims.size())) {
    throw IndexError(std::string(side) + " index order does not match mode count");
  }
  for (Index k = 1; k <= i.order(); ++k) {
    const Index extent = dims[static_cast<std::size_t>(k - 1)];
    if (i[k] < 1 || i[k] > extent) {
      throw IndexError(std::string(side) + " index " + std::to_string(i[k]) +
                       " out of range 1.." + std::to_string(extent) + " in slot " +
                       std::to_string(k));
    }
  }
}

}  // namespace

void UnfoldSpec::validate(Index tensor_order) const {
  std::vector<Index> count(static_cast<std::size_t>(tensor_order), 0);
  auto tally = [&](const std::vector<Index>& modes) {
    for (Index m : modes) {
      if (m < 1 || m > tensor_order) {
        throw ArgumentError("unfolding mode " + std::to_string(m) + " out of range 1.." +
                            std::to_string(tensor_order));
      }
      ++count[static_cast<std::size_t>(m - 1)];
    }
  };
  tally(row_modes);
  tally(col_modes);
  std::string missing;
  std::string duplicated;
  for (Index m = 1; m <= tensor_order; ++m) {
    const Index c = count[static_cast<std::size_t>(m - 1)];
    if (c == 0) missing += " " + std::to_string(m);
    if (c > 1) duplicated += " " + std::to_string(m);
  }
  if (!missing.empty() || !duplicated.empty()) {
    std::string msg = "unfolding modes [r c] are not a permutation of 1.." +
                      std::to_string(tensor_order) + ":";
    if (!missing.empty()) msg += " missing" + missing;
    if (!duplicated.empty()) msg += " duplicated" + duplicated;
    throw ArgumentError(msg);
  }
}

std::vector<Index> UnfoldSpec::row_dims(const Shape& n) const {
  std::vector<Index> dims;
  dims.reserve(row_modes.size());
  for (Index m : row_modes) dims.push_back(n.dim(m));
  return dims;
}

std::vector<Index> UnfoldSpec::col_dims(const Shape& n) const {
  std::vector<Index> dims;
  dims.reserve(col_modes.size());
  for (Index m : col_modes) dims.push_back(n.dim(m));
  return dims;
}

UnfoldSpec mode_unfold_spec(Index tensor_order, Index k) {
  if (k < 1 || k > tensor_order) {
    throw ArgumentError("mode " + std::to_string(k) + " out of range 1.." +
                        std::to_string(tensor_order));
  }
  UnfoldSpec spec;
  spec.row_modes = {k};
  for (Index m = 1; m <= tensor_order; ++m) {
    if (m != k) spec.col_modes.push_back(m);
  }
  return spec;
}

UnfoldedMatrix unfold(const DenseTensor& a, const UnfoldSpec& spec) {
  const Shape& n = a.shape();
  spec.validate(n.order());
  const Index rows = product(spec.row_dims(n));
  const Index cols = product(spec.col_dims(n));
  DenseMatrix m(rows, cols);

  const std::vector<Index> row_coeff = side_coefficients(n, spec.row_modes);
  const std::vector<Index> col_coeff = side_coefficients(n, spec.col_modes);

  const auto& src = a.raw();
  auto& dst = m.raw();
  std::vector<Index> digit(static_cast<std::size_t>(n.order()), 0);
  Index row = 0;
  Index col = 0;
  for (std::size_t pos = 0; pos < src.size(); ++pos) {
    dst[static_cast<std::size_t>(col * rows + row)] = src[pos];
    for (Index k = 0; k < n.order(); ++k) {
      auto ku = static_cast<std::size_t>(k);
      if (digit[ku] + 1 < n.dim(k + 1)) {
        ++digit[ku];
        row += row_coeff[ku];
        col += col_coeff[ku];
        break;
      }
      row -= digit[ku] * row_coeff[ku];
      col -= digit[ku] * col_coeff[ku];
      digit[ku] = 0;
    }
  }
  return UnfoldedMatrix{std::move(m), spec, n};
}

UnfoldedMatrix mode_unfold(const DenseTensor& a, Index k) {
  return unfold(a, mode_unfold_spec(a.order(), k));
}

DenseTensor fold(const UnfoldedMatrix& m) {
  const Shape& n = m.source_shape;
  m.spec.validate(n.order());
  const Index rows = product(m.spec.row_dims(n));
  const Index cols = product(m.spec.col_dims(n));
  if (m.matrix.rows() != rows || m.matrix.cols() != cols) {
    throw ShapeError("fold: matrix is " + std::to_string(m.matrix.rows()) + "x" +
                     std::to_string(m.matrix.cols()) + " but the spec implies " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
  DenseTensor a{n};
  const std::vector<Index> row_coeff = side_coefficients(n, m.spec.row_modes);
  const std::vector<Index> col_coeff = side_coefficients(n, m.spec.col_modes);

  const auto& src = m.matrix.raw();
  auto& dst = a.raw();
  std::vector<Index> digit(static_cast<std::size_t>(n.order()), 0);
  Index row = 0;
  Index col = 0;
  for (std::size_t pos = 0; pos < dst.size(); ++pos) {
    dst[pos] = src[static_cast<std::size_t>(col * rows + row)];
    for (Index k = 0; k < n.order(); ++k) {
      auto ku = static_cast<std::size_t>(k);
      if (digit[ku] + 1 < n.dim(k + 1)) {
        ++digit[ku];
        row += row_coeff[ku];
        col += col_coeff[ku];
        break;
      }
      row -= digit[ku] * row_coeff[ku];
      col -= digit[ku] * col_coeff[ku];
      digit[ku] = 0;
    }
  }
  return a;
}

std::vector<double> unfold_row(const DenseTensor& a, const UnfoldSpec& spec,
                               const MultiIndex& i) {
  const Shape& n = a.shape();
  spec.validate(n.order());
  check_side_index(i, spec.row_dims(n), "row");

  std::vector<Index> full(static_cast<std::size_t>(n.order()), 1);
  for (std::size_t t = 0; t < spec.row_modes.size(); ++t) {
    full[static_cast<std::size_t>(spec.row_modes[t] - 1)] = i[static_cast<Index>(t) + 1];
  }
  const std::vector<Index> col_dims = spec.col_dims(n);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(product(col_dims)));
  for_each_index(std::span<const Index>(col_dims), [&](const MultiIndex& j) {
    MultiIndex probe{full};
    for (std::size_t t = 0; t < spec.col_modes.size(); ++t) {
      probe[spec.col_modes[t]] = j[static_cast<Index>(t) + 1];
    }
    out.push_back(a.at(probe));
  });
  return out;
}

std::vector<double> unfold_col(const DenseTensor& a, const UnfoldSpec& spec,
                               const MultiIndex& j) {
  const Shape& n = a.shape();
  spec.validate(n.order());
  check_side_index(j, spec.col_dims(n), "column");

  std::vector<Index> full(static_cast<std::size_t>(n.order()), 1);
  for (std::size_t t = 0; t < spec.col_modes.size(); ++t) {
    full[static_cast<std::size_t>(spec.col_modes[t] - 1)] = j[static_cast<Index>(t) + 1];
  }
  const std::vector<Index> row_dims = spec.row_dims(n);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(product(row_dims)));
  for_each_index(std::span<const Index>(row_dims), [&](const MultiIndex& i) {
    MultiIndex probe{full};
    for (std::size_t t = 0; t < spec.row_modes.size(); ++t) {
      probe[spec.row_modes[t]] = i[static_cast<Index>(t) + 1];
    }
    out.push_back(a.at(probe));
  });
  return out;
}

}  // namespace btl
