#include "btl/blocking.hpp"

#include <numeric>
#include <optional>
#include <string>
#include <utility>

namespace btl {
namespace {

// vol of every multi-block in vec order of the grid spanned by `parts`.
// The empty list yields {1}, the empty-product convention.
std::vector<Index> partition_volumes(std::span<const std::vector<Index>> parts) {
  std::vector<Index> vols{1};
  for (const auto& part : parts) {
    std::vector<Index> next;
    next.reserve(vols.size() * part.size());
    for (Index mj : part) {
      for (Index v : vols) next.push_back(v * mj);
    }
    vols = std::move(next);
  }
  return vols;
}

std::vector<Index> prefix_offsets(const std::vector<Index>& sizes) {
  std::vector<Index> offsets(sizes.size(), 0);
  Index acc = 0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    offsets[k] = acc;
    acc += sizes[k];
  }
  return offsets;
}

BlockLayout make_layout(const Blocking& m, const UnfoldSpec& spec) {
  BlockLayout layout;
  for (Index mode : spec.row_modes) {
    layout.row_parts.push_back(m.part(mode));
    layout.row_grid.push_back(m.block_count(mode));
  }
  for (Index mode : spec.col_modes) {
    layout.col_parts.push_back(m.part(mode));
    layout.col_grid.push_back(m.block_count(mode));
  }
  layout.block_row_sizes = partition_volumes(layout.row_parts);
  layout.block_col_sizes = partition_volumes(layout.col_parts);
  layout.block_row_offsets = prefix_offsets(layout.block_row_sizes);
  layout.block_col_offsets = prefix_offsets(layout.block_col_sizes);
  return layout;
}

Index grid_linear(const MultiIndex& k, const std::vector<Index>& grid, const char* side) {
  if (k.order() != static_cast<Index>(grid.size())) {
    throw IndexError(std::string(side) + " block index order does not match grid");
  }
  for (Index t = 1; t <= k.order(); ++t) {
    const Index extent = grid[static_cast<std::size_t>(t - 1)];
    if (k[t] < 1 || k[t] > extent) {
      throw IndexError(std::string(side) + " block index " + std::to_string(k[t]) +
                       " out of range 1.." + std::to_string(extent) + " in slot " +
                       std::to_string(t));
    }
  }
  return linear_index(k.entries(), grid);
}

}  // namespace

Blocking::Blocking(Shape shape, std::vector<std::vector<Index>> parts)
    : shape_(std::move(shape)), parts_(std::move(parts)) {
  if (static_cast<Index>(parts_.size()) != shape_.order()) {
    throw ArgumentError("blocking has " + std::to_string(parts_.size()) +
                        " partition vectors for an order-" + std::to_string(shape_.order()) +
                        " tensor");
  }
  counts_.resize(parts_.size());
  lower_.resize(parts_.size());
  for (Index k = 1; k <= shape_.order(); ++k) {
    const auto& part = parts_[static_cast<std::size_t>(k - 1)];
    if (part.empty()) {
      throw ArgumentError("blocking for mode " + std::to_string(k) + " is empty");
    }
    Index sum = 0;
    auto& low = lower_[static_cast<std::size_t>(k - 1)];
    low.reserve(part.size());
    for (Index mj : part) {
      if (mj < 1) {
        throw ArgumentError("blocking for mode " + std::to_string(k) +
                            " contains a non-positive part");
      }
      low.push_back(sum + 1);
      sum += mj;
    }
    if (sum != shape_.dim(k)) {
      throw ArgumentError("blocking for mode " + std::to_string(k) + " sums to " +
                          std::to_string(sum) + ", expected " + std::to_string(shape_.dim(k)));
    }
    counts_[static_cast<std::size_t>(k - 1)] = static_cast<Index>(part.size());
  }
}

Blocking Blocking::trivial(const Shape& n) {
  std::vector<std::vector<Index>> parts;
  parts.reserve(static_cast<std::size_t>(n.order()));
  for (Index k = 1; k <= n.order(); ++k) {
    parts.push_back({n.dim(k)});
  }
  return Blocking(n, std::move(parts));
}

Blocking Blocking::finest(const Shape& n) {
  std::vector<std::vector<Index>> parts;
  parts.reserve(static_cast<std::size_t>(n.order()));
  for (Index k = 1; k <= n.order(); ++k) {
    parts.push_back(std::vector<Index>(static_cast<std::size_t>(n.dim(k)), 1));
  }
  return Blocking(n, std::move(parts));
}

Index Blocking::part_size(Index k, Index j) const {
  return parts_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
}

Index Blocking::lower(Index k, Index j) const {
  return lower_[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(j - 1)];
}

Index Blocking::upper(Index k, Index j) const {
  return lower(k, j) + part_size(k, j) - 1;
}

void Blocking::check_block_index(const MultiIndex& i) const {
  if (i.order() != order()) {
    throw IndexError("block index order " + std::to_string(i.order()) +
                     " does not match blocking order " + std::to_string(order()));
  }
  for (Index k = 1; k <= order(); ++k) {
    if (i[k] < 1 || i[k] > block_count(k)) {
      throw IndexError("block index " + std::to_string(i[k]) + " out of range 1.." +
                       std::to_string(block_count(k)) + " in mode " + std::to_string(k));
    }
  }
}

Shape Blocking::block_shape(const MultiIndex& i) const {
  check_block_index(i);
  std::vector<Index> dims(static_cast<std::size_t>(order()));
  for (Index k = 1; k <= order(); ++k) {
    dims[static_cast<std::size_t>(k - 1)] = part_size(k, i[k]);
  }
  return Shape(std::move(dims));
}

Index Blocking::vol(const MultiIndex& i) const {
  check_block_index(i);
  Index v = 1;
  for (Index k = 1; k <= order(); ++k) {
    v *= part_size(k, i[k]);
  }
  return v;
}

bool Blocking::is_uniform() const {
  for (const auto& part : parts_) {
    for (Index mj : part) {
      if (mj != part.front()) return false;
    }
  }
  return true;
}

DenseTensor extract_block(const DenseTensor& a, const Blocking& m, const MultiIndex& i) {
  if (!(m.shape() == a.shape())) {
    throw ShapeError("blocking does not match tensor shape");
  }
  m.check_block_index(i);
  const Index d = m.order();
  Shape sub = m.block_shape(i);
  DenseTensor block{sub};

  // Source offset of the block corner plus per-mode source strides.
  std::vector<Index> strides(static_cast<std::size_t>(d));
  Index stride = 1;
  Index corner = 0;
  for (Index k = 1; k <= d; ++k) {
    strides[static_cast<std::size_t>(k - 1)] = stride;
    corner += (m.lower(k, i[k]) - 1) * stride;
    stride *= a.shape().dim(k);
  }

  const auto& src = a.raw();
  auto& dst = block.raw();
  std::vector<Index> digit(static_cast<std::size_t>(d), 0);
  Index offset = corner;
  for (std::size_t pos = 0; pos < dst.size(); ++pos) {
    dst[pos] = src[static_cast<std::size_t>(offset)];
    for (Index k = 0; k < d; ++k) {
      auto ku = static_cast<std::size_t>(k);
      if (digit[ku] + 1 < sub.dim(k + 1)) {
        ++digit[ku];
        offset += strides[ku];
        break;
      }
      offset -= digit[ku] * strides[ku];
      digit[ku] = 0;
    }
  }
  return block;
}

std::vector<double> vec_blocked(const DenseTensor& a, const Blocking& m) {
  if (!(m.shape() == a.shape())) {
    throw ShapeError("blocking does not match tensor shape");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(a.size()));
  for_each_index(std::span<const Index>(m.block_counts()), [&](const MultiIndex& i) {
    DenseTensor block = extract_block(a, m, i);
    out.insert(out.end(), block.vec().begin(), block.vec().end());
  });
  return out;
}

std::vector<PermutationVector> P_M_factors(const Blocking& m) {
  const Index d = m.order();
  const Index total = m.shape().count();
  std::vector<PermutationVector> factors;
  factors.reserve(static_cast<std::size_t>(d));
  factors.push_back(PermutationVector::identity(total));  // Q_1
  Index n_prev = m.shape().dim(1);                        // N_{k-1}
  for (Index k = 2; k <= d; ++k) {
    // vol over the leading blocking, blocks in vec order of b(1:k-1)
    const std::vector<Index> vols =
        partition_volumes(std::span<const std::vector<Index>>(m.parts()).subspan(
            0, static_cast<std::size_t>(k - 1)));

    std::optional<PermutationVector> gamma;
    for (Index j = 1; j <= m.block_count(k); ++j) {
      const Index mj = m.part_size(k, j);
      std::optional<PermutationVector> diag;
      for (Index vol : vols) {
        PermutationVector s = perfect_shuffle(vol, mj);
        diag = diag ? direct_sum(*diag, std::move(s)) : std::move(s);
      }
      PermutationVector gamma_j = compose(*diag, perfect_shuffle(mj, n_prev));
      gamma = gamma ? direct_sum(*gamma, std::move(gamma_j)) : std::move(gamma_j);
    }

    const Index n_k = n_prev * m.shape().dim(k);
    factors.push_back(kron(PermutationVector::identity(total / n_k), *gamma));
    n_prev = n_k;
  }
  return factors;
}

PermutationVector build_P_M(const Blocking& m) {
  const std::vector<PermutationVector> factors = P_M_factors(m);
  PermutationVector acc = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    acc = compose(factors[k], acc);
  }
  return acc;
}

UniformParams::UniformParams(Shape shape_in, std::vector<Index> block_size_in)
    : shape(std::move(shape_in)), block_size(std::move(block_size_in)) {
  if (static_cast<Index>(block_size.size()) != shape.order()) {
    throw ArgumentError("uniform blocking needs one block size per mode");
  }
  block_count.resize(block_size.size());
  for (Index k = 1; k <= shape.order(); ++k) {
    const Index mu = block_size[static_cast<std::size_t>(k - 1)];
    if (mu < 1 || shape.dim(k) % mu != 0) {
      throw ArgumentError("mode " + std::to_string(k) + " extent " +
                          std::to_string(shape.dim(k)) + " is not a multiple of block size " +
                          std::to_string(mu));
    }
    block_count[static_cast<std::size_t>(k - 1)] = shape.dim(k) / mu;
  }
}

UniformParams UniformParams::from_blocking(const Blocking& m) {
  if (!m.is_uniform()) {
    throw ArgumentError("blocking is not uniform in every mode");
  }
  std::vector<Index> mu;
  mu.reserve(static_cast<std::size_t>(m.order()));
  for (Index k = 1; k <= m.order(); ++k) {
    mu.push_back(m.part_size(k, 1));
  }
  return UniformParams(m.shape(), std::move(mu));
}

Blocking UniformParams::to_blocking() const {
  std::vector<std::vector<Index>> parts;
  parts.reserve(block_size.size());
  for (std::size_t k = 0; k < block_size.size(); ++k) {
    parts.push_back(std::vector<Index>(static_cast<std::size_t>(block_count[k]), block_size[k]));
  }
  return Blocking(shape, std::move(parts));
}

PermutationVector build_P_M_uniform(const UniformParams& params) {
  const Index d = params.shape.order();
  const Index total = params.shape.count();
  PermutationVector acc = PermutationVector::identity(total);
  Index n_k = params.shape.dim(1);
  Index b_prev = params.block_count[0];
  Index d_prev = params.block_size[0];
  for (Index k = 2; k <= d; ++k) {
    const Index mu_k = params.block_size[static_cast<std::size_t>(k - 1)];
    const Index b_k = params.block_count[static_cast<std::size_t>(k - 1)];
    n_k *= params.shape.dim(k);
    PermutationVector q_k =
        kron(kron(PermutationVector::identity(b_k * (total / n_k)), perfect_shuffle(mu_k, b_prev)),
             PermutationVector::identity(d_prev));
    acc = compose(q_k, acc);
    b_prev *= b_k;
    d_prev *= mu_k;
  }
  return acc;
}

PermutationVector unfolding_side_permutation(const Blocking& m, const std::vector<Index>& modes) {
  if (modes.empty()) return PermutationVector::identity(1);
  std::vector<Index> dims;
  std::vector<std::vector<Index>> parts;
  for (Index mode : modes) {
    dims.push_back(m.shape().dim(mode));
    parts.push_back(m.part(mode));
  }
  return build_P_M(Blocking(Shape(std::move(dims)), std::move(parts)));
}

Index BlockLayout::linear_row(const MultiIndex& kr) const {
  return grid_linear(kr, row_grid, "row");
}

Index BlockLayout::linear_col(const MultiIndex& kc) const {
  return grid_linear(kc, col_grid, "column");
}

BlockUnfolding block_unfold(const DenseTensor& a, const Blocking& m, const UnfoldSpec& spec) {
  if (!(m.shape() == a.shape())) {
    throw ShapeError("blocking does not match tensor shape");
  }
  spec.validate(a.order());
  UnfoldedMatrix plain = unfold(a, spec);
  const PermutationVector row_perm = unfolding_side_permutation(m, spec.row_modes);
  const PermutationVector col_perm = unfolding_side_permutation(m, spec.col_modes);

  // P_R A P_C^T: row i comes from row v_R[i], column j from column v_C[j].
  DenseMatrix out(plain.matrix.rows(), plain.matrix.cols());
  for (Index j = 1; j <= out.cols(); ++j) {
    const Index src_col = col_perm[j];
    for (Index i = 1; i <= out.rows(); ++i) {
      out.at(i, j) = plain.matrix.at(row_perm[i], src_col);
    }
  }
  return BlockUnfolding{std::move(out), make_layout(m, spec), spec, m};
}

DenseMatrix get_block(const DenseMatrix& matrix, const BlockLayout& layout, Index mu, Index tau) {
  if (mu < 1 || mu > layout.block_rows() || tau < 1 || tau > layout.block_cols()) {
    throw IndexError("block (" + std::to_string(mu) + "," + std::to_string(tau) +
                     ") outside the " + std::to_string(layout.block_rows()) + "x" +
                     std::to_string(layout.block_cols()) + " block grid");
  }
  const Index r0 = layout.block_row_offsets[static_cast<std::size_t>(mu - 1)];
  const Index c0 = layout.block_col_offsets[static_cast<std::size_t>(tau - 1)];
  const Index h = layout.block_row_sizes[static_cast<std::size_t>(mu - 1)];
  const Index w = layout.block_col_sizes[static_cast<std::size_t>(tau - 1)];
  DenseMatrix block(h, w);
  for (Index j = 1; j <= w; ++j) {
    for (Index i = 1; i <= h; ++i) {
      block.at(i, j) = matrix.at(r0 + i, c0 + j);
    }
  }
  return block;
}

DenseMatrix get_block(const BlockUnfolding& bu, const MultiIndex& k) {
  bu.source_blocking.check_block_index(k);
  std::vector<Index> kr;
  std::vector<Index> kc;
  for (Index mode : bu.spec.row_modes) kr.push_back(k[mode]);
  for (Index mode : bu.spec.col_modes) kc.push_back(k[mode]);
  const Index mu = linear_index(kr, bu.layout.row_grid);
  const Index tau = linear_index(kc, bu.layout.col_grid);
  return get_block(bu.matrix, bu.layout, mu, tau);
}

BlockedMatrix::BlockedMatrix(DenseMatrix matrix_in, std::vector<Index> row_parts_in,
                             std::vector<Index> col_parts_in)
    : matrix(std::move(matrix_in)),
      row_parts(std::move(row_parts_in)),
      col_parts(std::move(col_parts_in)) {
  auto check = [](const std::vector<Index>& parts, Index extent, const char* side) {
    Index sum = 0;
    for (Index p : parts) {
      if (p < 1) throw ArgumentError(std::string(side) + " partition contains a non-positive part");
      sum += p;
    }
    if (sum != extent) {
      throw ArgumentError(std::string(side) + " partition sums to " + std::to_string(sum) +
                          ", expected " + std::to_string(extent));
    }
  };
  check(row_parts, matrix.rows(), "row");
  check(col_parts, matrix.cols(), "column");
}

DenseMatrix BlockedMatrix::block(Index i, Index j) const {
  if (i < 1 || i > block_rows() || j < 1 || j > block_cols()) {
    throw IndexError("matrix block (" + std::to_string(i) + "," + std::to_string(j) +
                     ") out of range");
  }
  Index r0 = 0;
  for (Index t = 1; t < i; ++t) r0 += row_parts[static_cast<std::size_t>(t - 1)];
  Index c0 = 0;
  for (Index t = 1; t < j; ++t) c0 += col_parts[static_cast<std::size_t>(t - 1)];
  const Index h = row_parts[static_cast<std::size_t>(i - 1)];
  const Index w = col_parts[static_cast<std::size_t>(j - 1)];
  DenseMatrix out(h, w);
  for (Index jj = 1; jj <= w; ++jj) {
    for (Index ii = 1; ii <= h; ++ii) {
      out.at(ii, jj) = matrix.at(r0 + ii, c0 + jj);
    }
  }
  return out;
}

TracySinghProduct tracy_singh(const std::vector<BlockedMatrix>& factors) {
  if (factors.empty()) {
    throw ArgumentError("tracy_singh requires at least one factor");
  }
  BlockLayout layout;
  Index rows = 1;
  Index cols = 1;
  for (const auto& f : factors) {
    layout.row_parts.push_back(f.row_parts);
    layout.col_parts.push_back(f.col_parts);
    layout.row_grid.push_back(f.block_rows());
    layout.col_grid.push_back(f.block_cols());
    rows *= f.matrix.rows();
    cols *= f.matrix.cols();
  }
  layout.block_row_sizes = partition_volumes(layout.row_parts);
  layout.block_col_sizes = partition_volumes(layout.col_parts);
  layout.block_row_offsets = prefix_offsets(layout.block_row_sizes);
  layout.block_col_offsets = prefix_offsets(layout.block_col_sizes);

  DenseMatrix out(rows, cols);
  const Index d = static_cast<Index>(factors.size());
  for_each_index(std::span<const Index>(layout.row_grid), [&](const MultiIndex& i) {
    const Index mu = linear_index(i.entries(), layout.row_grid);
    for_each_index(std::span<const Index>(layout.col_grid), [&](const MultiIndex& j) {
      const Index tau = linear_index(j.entries(), layout.col_grid);
      // B^(d)_{i_d,j_d} (x) ... (x) B^(1)_{i_1,j_1}
      DenseMatrix k = factors[static_cast<std::size_t>(d - 1)].block(i[d], j[d]);
      for (Index t = d - 1; t >= 1; --t) {
        k = kron(k, factors[static_cast<std::size_t>(t - 1)].block(i[t], j[t]));
      }
      const Index r0 = layout.block_row_offsets[static_cast<std::size_t>(mu - 1)];
      const Index c0 = layout.block_col_offsets[static_cast<std::size_t>(tau - 1)];
      for (Index jj = 1; jj <= k.cols(); ++jj) {
        for (Index ii = 1; ii <= k.rows(); ++ii) {
          out.at(r0 + ii, c0 + jj) = k.at(ii, jj);
        }
      }
    });
  });
  return TracySinghProduct{std::move(out), std::move(layout)};
}

}  // namespace btl
