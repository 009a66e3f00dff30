#pragma once

#include <string>
#include <vector>

#include "btl/blocking.hpp"
#include "btl/tensor.hpp"

namespace btl {

/// Grid of block labels for a mode-k unfolding: cell (i, j) names the block
/// of the source tensor that entry came from.
struct BlockMap {
  Index rows = 0;
  Index cols = 0;
  std::vector<std::string> labels;  // row-major, rows*cols entries

  const std::string& label(Index i, Index j) const {
    return labels[static_cast<std::size_t>((i - 1) * cols + (j - 1))];
  }
};

/// Block map of the plain mode-k unfolding, or of the block unfolding when
/// block_variant is set.
BlockMap block_map(const Shape& n, const Blocking& m, Index mode, bool block_variant);

/// ASCII rendering: a header naming the unfolding, the block-grid header
/// (rows:/cols:) for the block variant, then one line of labels per row.
std::string render_block_map(const Shape& n, const Blocking& m, Index mode, bool block_variant);

}  // namespace btl
