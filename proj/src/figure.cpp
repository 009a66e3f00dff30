#include "btl/figure.hpp"

#include <algorithm>
#include <sstream>

#include "btl/unfolding.hpp"

namespace btl {
namespace {

std::string make_label(const std::vector<Index>& block, bool compact) {
  std::string label;
  for (std::size_t t = 0; t < block.size(); ++t) {
    if (!compact && t > 0) label += '.';
    label += std::to_string(block[t]);
  }
  return label;
}

}  // namespace

BlockMap block_map(const Shape& n, const Blocking& m, Index mode, bool block_variant) {
  if (!(m.shape() == n)) {
    throw ShapeError("blocking does not match tensor shape");
  }
  const Index d = n.order();
  const UnfoldSpec spec = mode_unfold_spec(d, mode);
  const Index rows = n.dim(mode);
  const Index cols = n.count() / rows;

  // index -> block coordinate along each mode
  std::vector<std::vector<Index>> coord(static_cast<std::size_t>(d));
  bool compact = true;
  for (Index k = 1; k <= d; ++k) {
    if (m.block_count(k) > 9) compact = false;
    auto& table = coord[static_cast<std::size_t>(k - 1)];
    table.resize(static_cast<std::size_t>(n.dim(k)));
    for (Index j = 1; j <= m.block_count(k); ++j) {
      for (Index i = m.lower(k, j); i <= m.upper(k, j); ++i) {
        table[static_cast<std::size_t>(i - 1)] = j;
      }
    }
  }

  BlockMap map;
  map.rows = rows;
  map.cols = cols;
  map.labels.resize(static_cast<std::size_t>(rows * cols));
  for_each_index(n, [&](const MultiIndex& i) {
    Index row = i[mode];
    Index col = 1;
    Index stride = 1;
    for (Index k : spec.col_modes) {
      col += (i[k] - 1) * stride;
      stride *= n.dim(k);
    }
    std::vector<Index> block(static_cast<std::size_t>(d));
    for (Index k = 1; k <= d; ++k) {
      block[static_cast<std::size_t>(k - 1)] = coord[static_cast<std::size_t>(k - 1)]
                                                    [static_cast<std::size_t>(i[k] - 1)];
    }
    map.labels[static_cast<std::size_t>((row - 1) * cols + (col - 1))] =
        make_label(block, compact);
  });

  if (!block_variant) return map;

  const PermutationVector row_perm = unfolding_side_permutation(m, spec.row_modes);
  const PermutationVector col_perm = unfolding_side_permutation(m, spec.col_modes);
  BlockMap blocked;
  blocked.rows = rows;
  blocked.cols = cols;
  blocked.labels.resize(map.labels.size());
  for (Index i = 1; i <= rows; ++i) {
    for (Index j = 1; j <= cols; ++j) {
      blocked.labels[static_cast<std::size_t>((i - 1) * cols + (j - 1))] =
          map.label(row_perm[i], col_perm[j]);
    }
  }
  return blocked;
}

std::string render_block_map(const Shape& n, const Blocking& m, Index mode, bool block_variant) {
  const BlockMap map = block_map(n, m, mode, block_variant);
  std::ostringstream out;
  out << (block_variant ? "block mode-" : "mode-") << mode << " unfolding: " << map.rows << " x "
      << map.cols << '\n';
  if (block_variant) {
    const UnfoldSpec spec = mode_unfold_spec(n.order(), mode);
    std::vector<std::vector<Index>> row_parts;
    std::vector<std::vector<Index>> col_parts;
    for (Index k : spec.row_modes) row_parts.push_back(m.part(k));
    for (Index k : spec.col_modes) col_parts.push_back(m.part(k));
    auto emit = [&out](const char* name, const std::vector<std::vector<Index>>& parts) {
      // vol of each block slab in vec order of the side's block grid
      std::vector<Index> sizes{1};
      for (const auto& part : parts) {
        std::vector<Index> next;
        for (Index mj : part) {
          for (Index v : sizes) next.push_back(v * mj);
        }
        sizes = std::move(next);
      }
      out << name << ':';
      for (Index s : sizes) out << ' ' << s;
      out << '\n';
    };
    emit("rows", row_parts);
    emit("cols", col_parts);
  } else {
    out << "block grid:";
    for (Index b : m.block_counts()) out << ' ' << b;
    out << '\n';
  }

  std::size_t width = 0;
  for (const auto& label : map.labels) width = std::max(width, label.size());
  for (Index i = 1; i <= map.rows; ++i) {
    for (Index j = 1; j <= map.cols; ++j) {
      const std::string& label = map.label(i, j);
      out << label;
      if (j < map.cols) out << std::string(width - label.size() + 1, ' ');
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace btl
