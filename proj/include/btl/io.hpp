#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "btl/blocking.hpp"
#include "btl/tensor.hpp"

namespace btl {

/// Tensor text format:
///   dims: n1 n2 ... nd
///   blocking k: m1 m2 ...     (optional, at most one line per mode)
///   <N scalars in vec order, whitespace separated>
/// Modes without a blocking line default to a single block.
struct TensorFile {
  DenseTensor tensor;
  std::optional<Blocking> blocking;
};

TensorFile read_tensor(std::istream& in);
TensorFile read_tensor_file(const std::string& path);

void write_tensor(std::ostream& out, const DenseTensor& tensor, const Blocking* blocking = nullptr);
void write_tensor_file(const std::string& path, const DenseTensor& tensor,
                       const Blocking* blocking = nullptr);

/// One line per row, scalars formatted so a read-back is bit-exact.
void write_matrix(std::ostream& out, const DenseMatrix& matrix);

std::string format_scalar(double value);

}  // namespace btl
