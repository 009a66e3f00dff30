#include "btl/contraction.hpp"

#include <string>
#include <utility>

#include "btl/unfolding.hpp"

namespace btl {
namespace {

std::vector<Index> slice_perm(const PermutationVector& p, Index from, Index to) {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(to - from + 1));
  for (Index t = from; t <= to; ++t) out.push_back(p[t]);
  return out;
}

std::vector<Index> mode_strides(const Shape& n) {
  std::vector<Index> strides(static_cast<std::size_t>(n.order()));
  Index stride = 1;
  for (Index k = 1; k <= n.order(); ++k) {
    strides[static_cast<std::size_t>(k - 1)] = stride;
    stride *= n.dim(k);
  }
  return strides;
}

// All offsets sum_t (i_t - 1) * coeff_t for 1 <= i <= extents, in vec order.
std::vector<Index> offset_list(std::span<const Index> extents, std::span<const Index> coeff) {
  std::vector<Index> out{0};
  for (std::size_t t = 0; t < extents.size(); ++t) {
    std::vector<Index> next;
    next.reserve(out.size() * static_cast<std::size_t>(extents[t]));
    for (Index i = 0; i < extents[t]; ++i) {
      for (Index base : out) next.push_back(base + i * coeff[t]);
    }
    out = std::move(next);
  }
  return out;
}

std::vector<Index> dims_at(const Shape& n, const std::vector<Index>& modes) {
  std::vector<Index> out;
  out.reserve(modes.size());
  for (Index m : modes) out.push_back(n.dim(m));
  return out;
}

std::vector<Index> strides_at(const std::vector<Index>& strides, const std::vector<Index>& modes) {
  std::vector<Index> out;
  out.reserve(modes.size());
  for (Index m : modes) out.push_back(strides[static_cast<std::size_t>(m - 1)]);
  return out;
}

// C = A * B where the column partition of A matches the row partition of B;
// every block product is a separate matmul, accumulated in ascending order
// over the shared grid.
DenseMatrix block_matmul(const DenseMatrix& a, const std::vector<Index>& a_row_sizes,
                         const std::vector<Index>& shared_sizes, const DenseMatrix& b,
                         const std::vector<Index>& b_col_sizes) {
  DenseMatrix c(a.rows(), b.cols());
  std::vector<Index> row_off(a_row_sizes.size(), 0);
  for (std::size_t t = 1; t < a_row_sizes.size(); ++t) {
    row_off[t] = row_off[t - 1] + a_row_sizes[t - 1];
  }
  std::vector<Index> col_off(b_col_sizes.size(), 0);
  for (std::size_t t = 1; t < b_col_sizes.size(); ++t) {
    col_off[t] = col_off[t - 1] + b_col_sizes[t - 1];
  }
  std::vector<Index> mid_off(shared_sizes.size(), 0);
  for (std::size_t t = 1; t < shared_sizes.size(); ++t) {
    mid_off[t] = mid_off[t - 1] + shared_sizes[t - 1];
  }
  for (std::size_t mu = 0; mu < a_row_sizes.size(); ++mu) {
    for (std::size_t tau = 0; tau < b_col_sizes.size(); ++tau) {
      for (std::size_t q = 0; q < shared_sizes.size(); ++q) {
        for (Index j = 1; j <= b_col_sizes[tau]; ++j) {
          for (Index k = 1; k <= shared_sizes[q]; ++k) {
            const double bkj = b.at(mid_off[q] + k, col_off[tau] + j);
            if (bkj == 0.0) continue;
            for (Index i = 1; i <= a_row_sizes[mu]; ++i) {
              c.at(row_off[mu] + i, col_off[tau] + j) +=
                  a.at(row_off[mu] + i, mid_off[q] + k) * bkj;
            }
          }
        }
      }
    }
  }
  return c;
}

}  // namespace

ContractionPlan::ContractionPlan(PermutationVector p, PermutationVector q, Index f)
    : p_(std::move(p)), q_(std::move(q)), f_(f) {
  if (f_ < 0 || f_ >= p_.size()) {
    throw ArgumentError("plan must keep at least one contracted mode: f = " +
                        std::to_string(f_) + " with |p| = " + std::to_string(p_.size()));
  }
  if (ell() > q_.size()) {
    throw ArgumentError("plan contracts " + std::to_string(ell()) +
                        " modes but G has only " + std::to_string(q_.size()));
  }
}

std::vector<Index> ContractionPlan::row_modes() const { return slice_perm(p_, 1, f_); }
std::vector<Index> ContractionPlan::contracted_f_modes() const {
  return slice_perm(p_, f_ + 1, p_.size());
}
std::vector<Index> ContractionPlan::contracted_g_modes() const { return slice_perm(q_, 1, ell()); }
std::vector<Index> ContractionPlan::col_modes() const { return slice_perm(q_, ell() + 1, q_.size()); }

void ContractionPlan::validate(const Shape& f_shape, const Shape& g_shape) const {
  if (p_.size() != f_shape.order()) {
    throw ArgumentError("plan permutation p has size " + std::to_string(p_.size()) +
                        " but F has order " + std::to_string(f_shape.order()));
  }
  if (q_.size() != g_shape.order()) {
    throw ArgumentError("plan permutation q has size " + std::to_string(q_.size()) +
                        " but G has order " + std::to_string(g_shape.order()));
  }
  const std::vector<Index> lambda = contracted_f_modes();
  const std::vector<Index> psi = contracted_g_modes();
  for (std::size_t t = 0; t < lambda.size(); ++t) {
    const Index fa = f_shape.dim(lambda[t]);
    const Index gb = g_shape.dim(psi[t]);
    if (fa != gb) {
      throw ArgumentError("contracted extents differ: F mode " + std::to_string(lambda[t]) +
                          " has " + std::to_string(fa) + ", G mode " + std::to_string(psi[t]) +
                          " has " + std::to_string(gb));
    }
  }
}

Shape ContractionPlan::result_shape(const Shape& f_shape, const Shape& g_shape) const {
  std::vector<Index> dims;
  for (Index m : row_modes()) dims.push_back(f_shape.dim(m));
  for (Index m : col_modes()) dims.push_back(g_shape.dim(m));
  if (dims.empty()) dims.push_back(1);  // full inner product
  return Shape(std::move(dims));
}

DenseTensor contract_naive(const DenseTensor& f, const DenseTensor& g,
                           const ContractionPlan& plan) {
  plan.validate(f.shape(), g.shape());
  const std::vector<Index> f_strides = mode_strides(f.shape());
  const std::vector<Index> g_strides = mode_strides(g.shape());

  const std::vector<Index> r = plan.row_modes();
  const std::vector<Index> lambda = plan.contracted_f_modes();
  const std::vector<Index> psi = plan.contracted_g_modes();
  const std::vector<Index> c = plan.col_modes();

  const std::vector<Index> i_offsets = offset_list(dims_at(f.shape(), r), strides_at(f_strides, r));
  const std::vector<Index> kf_offsets =
      offset_list(dims_at(f.shape(), lambda), strides_at(f_strides, lambda));
  const std::vector<Index> kg_offsets =
      offset_list(dims_at(g.shape(), psi), strides_at(g_strides, psi));
  const std::vector<Index> j_offsets = offset_list(dims_at(g.shape(), c), strides_at(g_strides, c));

  DenseTensor h{plan.result_shape(f.shape(), g.shape())};
  auto& out = h.raw();
  const auto& fv = f.raw();
  const auto& gv = g.raw();
  std::size_t pos = 0;
  for (Index jo : j_offsets) {
    for (Index io : i_offsets) {
      double sum = 0.0;
      for (std::size_t t = 0; t < kf_offsets.size(); ++t) {
        sum += fv[static_cast<std::size_t>(io + kf_offsets[t])] *
               gv[static_cast<std::size_t>(jo + kg_offsets[t])];
      }
      out[pos++] = sum;
    }
  }
  return h;
}

DenseTensor contract_unfolded(const DenseTensor& f, const DenseTensor& g,
                              const ContractionPlan& plan) {
  plan.validate(f.shape(), g.shape());
  UnfoldedMatrix fu = unfold(f, UnfoldSpec{plan.row_modes(), plan.contracted_f_modes()});
  UnfoldedMatrix gu = unfold(g, UnfoldSpec{plan.contracted_g_modes(), plan.col_modes()});
  DenseMatrix m = matmul(fu.matrix, gu.matrix);

  const Shape out_shape = plan.result_shape(f.shape(), g.shape());
  if (plan.f() == 0 && plan.g() == 0) {
    return DenseTensor(out_shape, {m.at(1, 1)});
  }
  UnfoldSpec out_spec;
  for (Index t = 1; t <= plan.f(); ++t) out_spec.row_modes.push_back(t);
  for (Index t = 1; t <= plan.g(); ++t) out_spec.col_modes.push_back(plan.f() + t);
  return fold(UnfoldedMatrix{std::move(m), std::move(out_spec), out_shape});
}

BlockedContractionPlan::BlockedContractionPlan(ContractionPlan plan, Blocking f_blocking,
                                               Blocking g_blocking)
    : plan_(std::move(plan)), f_blocking_(std::move(f_blocking)), g_blocking_(std::move(g_blocking)) {
  const std::vector<Index> lambda = plan_.contracted_f_modes();
  const std::vector<Index> psi = plan_.contracted_g_modes();
  for (std::size_t t = 0; t < lambda.size(); ++t) {
    if (f_blocking_.part(lambda[t]) != g_blocking_.part(psi[t])) {
      throw ArgumentError("blockings are not conformal: F mode " + std::to_string(lambda[t]) +
                          " and G mode " + std::to_string(psi[t]) +
                          " carry different partitions");
    }
  }
}

Blocking BlockedContractionPlan::result_blocking() const {
  std::vector<Index> dims;
  std::vector<std::vector<Index>> parts;
  for (Index m : plan_.row_modes()) {
    dims.push_back(f_blocking_.shape().dim(m));
    parts.push_back(f_blocking_.part(m));
  }
  for (Index m : plan_.col_modes()) {
    dims.push_back(g_blocking_.shape().dim(m));
    parts.push_back(g_blocking_.part(m));
  }
  if (dims.empty()) {
    dims.push_back(1);
    parts.push_back({1});
  }
  return Blocking(Shape(std::move(dims)), std::move(parts));
}

DenseTensor contract_blocked(const DenseTensor& f, const DenseTensor& g,
                             const BlockedContractionPlan& bplan) {
  const ContractionPlan& plan = bplan.plan();
  plan.validate(f.shape(), g.shape());
  if (!(bplan.f_blocking().shape() == f.shape()) || !(bplan.g_blocking().shape() == g.shape())) {
    throw ShapeError("blocked plan does not match operand shapes");
  }

  BlockUnfolding fb =
      block_unfold(f, bplan.f_blocking(), UnfoldSpec{plan.row_modes(), plan.contracted_f_modes()});
  BlockUnfolding gb =
      block_unfold(g, bplan.g_blocking(), UnfoldSpec{plan.contracted_g_modes(), plan.col_modes()});

  DenseMatrix h_blocked = block_matmul(fb.matrix, fb.layout.block_row_sizes,
                                       fb.layout.block_col_sizes, gb.matrix,
                                       gb.layout.block_col_sizes);

  const Shape out_shape = plan.result_shape(f.shape(), g.shape());
  if (plan.f() == 0 && plan.g() == 0) {
    return DenseTensor(out_shape, {h_blocked.at(1, 1)});
  }

  // Undo H_{R x C} = P_R H P_C^T, then fold the plain unfolding.
  UnfoldSpec out_spec;
  for (Index t = 1; t <= plan.f(); ++t) out_spec.row_modes.push_back(t);
  for (Index t = 1; t <= plan.g(); ++t) out_spec.col_modes.push_back(plan.f() + t);
  const Blocking h_blocking = bplan.result_blocking();
  const PermutationVector row_perm = unfolding_side_permutation(h_blocking, out_spec.row_modes);
  const PermutationVector col_perm = unfolding_side_permutation(h_blocking, out_spec.col_modes);
  DenseMatrix plain(h_blocked.rows(), h_blocked.cols());
  for (Index j = 1; j <= plain.cols(); ++j) {
    const Index dst_col = col_perm[j];
    for (Index i = 1; i <= plain.rows(); ++i) {
      plain.at(row_perm[i], dst_col) = h_blocked.at(i, j);
    }
  }
  return fold(UnfoldedMatrix{std::move(plain), std::move(out_spec), out_shape});
}

DenseMatrix contract_block_recipe(const DenseTensor& f, const DenseTensor& g,
                                  const BlockedContractionPlan& bplan, const MultiIndex& k) {
  const ContractionPlan& plan = bplan.plan();
  plan.validate(f.shape(), g.shape());
  const Blocking h_blocking = bplan.result_blocking();
  if (plan.f() + plan.g() > 0) {
    h_blocking.check_block_index(k);
  }

  const std::vector<Index> r = plan.row_modes();
  const std::vector<Index> lambda = plan.contracted_f_modes();
  const std::vector<Index> psi = plan.contracted_g_modes();
  const std::vector<Index> c = plan.col_modes();
  const UnfoldSpec f_spec{r, lambda};
  const UnfoldSpec g_spec{psi, c};

  Index rows = 1;
  for (Index t = 1; t <= plan.f(); ++t) {
    rows *= bplan.f_blocking().part_size(r[static_cast<std::size_t>(t - 1)], k[t]);
  }
  Index cols = 1;
  for (Index t = 1; t <= plan.g(); ++t) {
    cols *= bplan.g_blocking().part_size(c[static_cast<std::size_t>(t - 1)], k[plan.f() + t]);
  }

  DenseMatrix acc(rows, cols);
  std::vector<Index> shared_grid;
  for (Index m : lambda) shared_grid.push_back(bplan.f_blocking().block_count(m));
  for_each_index(std::span<const Index>(shared_grid), [&](const MultiIndex& q) {
    MultiIndex fi(std::vector<Index>(static_cast<std::size_t>(f.order()), 1));
    for (Index t = 1; t <= plan.f(); ++t) fi[r[static_cast<std::size_t>(t - 1)]] = k[t];
    for (Index t = 1; t <= plan.ell(); ++t) fi[lambda[static_cast<std::size_t>(t - 1)]] = q[t];
    MultiIndex gj(std::vector<Index>(static_cast<std::size_t>(g.order()), 1));
    for (Index t = 1; t <= plan.ell(); ++t) gj[psi[static_cast<std::size_t>(t - 1)]] = q[t];
    for (Index t = 1; t <= plan.g(); ++t) gj[c[static_cast<std::size_t>(t - 1)]] = k[plan.f() + t];

    UnfoldedMatrix fu = unfold(extract_block(f, bplan.f_blocking(), fi), f_spec);
    UnfoldedMatrix gu = unfold(extract_block(g, bplan.g_blocking(), gj), g_spec);
    DenseMatrix term = matmul(fu.matrix, gu.matrix);
    for (Index j = 1; j <= acc.cols(); ++j) {
      for (Index i = 1; i <= acc.rows(); ++i) {
        acc.at(i, j) += term.at(i, j);
      }
    }
  });
  return acc;
}

DenseTensor multilinear_naive(const DenseTensor& a, const std::vector<DenseMatrix>& bs) {
  const Index d = a.order();
  if (static_cast<Index>(bs.size()) != d) {
    throw ArgumentError("multilinear product needs one matrix per mode");
  }
  std::vector<Index> out_dims(static_cast<std::size_t>(d));
  for (Index k = 1; k <= d; ++k) {
    const DenseMatrix& b = bs[static_cast<std::size_t>(k - 1)];
    if (b.cols() != a.shape().dim(k)) {
      throw ArgumentError("matrix for mode " + std::to_string(k) + " has " +
                          std::to_string(b.cols()) + " columns, expected " +
                          std::to_string(a.shape().dim(k)));
    }
    out_dims[static_cast<std::size_t>(k - 1)] = b.rows();
  }
  DenseTensor out{Shape(out_dims)};
  for_each_index(out.shape(), [&](const MultiIndex& i) {
    double sum = 0.0;
    for_each_index(a.shape(), [&](const MultiIndex& k) {
      double term = a.at(k);
      for (Index t = 1; t <= d; ++t) {
        term *= bs[static_cast<std::size_t>(t - 1)].at(i[t], k[t]);
      }
      sum += term;
    });
    out.at(i) = sum;
  });
  return out;
}

DenseTensor multilinear_kron(const DenseTensor& a, const std::vector<DenseMatrix>& bs) {
  const Index d = a.order();
  if (static_cast<Index>(bs.size()) != d) {
    throw ArgumentError("multilinear product needs one matrix per mode");
  }
  std::vector<Index> out_dims(static_cast<std::size_t>(d));
  for (Index k = 1; k <= d; ++k) {
    const DenseMatrix& b = bs[static_cast<std::size_t>(k - 1)];
    if (b.cols() != a.shape().dim(k)) {
      throw ArgumentError("matrix for mode " + std::to_string(k) + " has " +
                          std::to_string(b.cols()) + " columns, expected " +
                          std::to_string(a.shape().dim(k)));
    }
    out_dims[static_cast<std::size_t>(k - 1)] = b.rows();
  }
  DenseMatrix big = bs[static_cast<std::size_t>(d - 1)];
  for (Index t = d - 1; t >= 1; --t) {
    big = kron(big, bs[static_cast<std::size_t>(t - 1)]);
  }
  return DenseTensor(Shape(std::move(out_dims)), matvec(big, a.vec()));
}

DenseTensor multilinear_mode_products(const DenseTensor& a, const std::vector<DenseMatrix>& bs) {
  const Index d = a.order();
  if (static_cast<Index>(bs.size()) != d) {
    throw ArgumentError("multilinear product needs one matrix per mode");
  }
  DenseTensor cur = a;
  for (Index i = 1; i <= d; ++i) {
    const DenseMatrix& b = bs[static_cast<std::size_t>(i - 1)];
    if (b.cols() != cur.shape().dim(i)) {
      throw ArgumentError("matrix for mode " + std::to_string(i) + " has " +
                          std::to_string(b.cols()) + " columns, expected " +
                          std::to_string(cur.shape().dim(i)));
    }
    UnfoldedMatrix u = mode_unfold(cur, i);
    DenseMatrix updated = matmul(b, u.matrix);
    std::vector<Index> dims = cur.shape().dims();
    dims[static_cast<std::size_t>(i - 1)] = b.rows();
    cur = fold(UnfoldedMatrix{std::move(updated), mode_unfold_spec(d, i), Shape(std::move(dims))});
  }
  return cur;
}

Blocking multilinear_result_blocking(const std::vector<BlockedMatrix>& bs) {
  std::vector<Index> dims;
  std::vector<std::vector<Index>> parts;
  for (const auto& b : bs) {
    dims.push_back(b.matrix.rows());
    parts.push_back(b.row_parts);
  }
  return Blocking(Shape(std::move(dims)), std::move(parts));
}

namespace {

void check_multilinear_blockings(const DenseTensor& a, const std::vector<BlockedMatrix>& bs,
                                 const Blocking& a_blocking) {
  const Index d = a.order();
  if (static_cast<Index>(bs.size()) != d) {
    throw ArgumentError("multilinear product needs one matrix per mode");
  }
  if (!(a_blocking.shape() == a.shape())) {
    throw ShapeError("blocking does not match tensor shape");
  }
  for (Index k = 1; k <= d; ++k) {
    const BlockedMatrix& b = bs[static_cast<std::size_t>(k - 1)];
    if (b.matrix.cols() != a.shape().dim(k)) {
      throw ArgumentError("matrix for mode " + std::to_string(k) + " has " +
                          std::to_string(b.matrix.cols()) + " columns, expected " +
                          std::to_string(a.shape().dim(k)));
    }
    if (b.col_parts != a_blocking.part(k)) {
      throw ArgumentError("column blocking of the mode-" + std::to_string(k) +
                          " matrix does not match the tensor blocking");
    }
  }
}

}  // namespace

DenseTensor multilinear_blocked(const DenseTensor& a, const std::vector<BlockedMatrix>& bs,
                                const Blocking& a_blocking) {
  check_multilinear_blockings(a, bs, a_blocking);
  TracySinghProduct ts = tracy_singh(bs);
  std::vector<double> x = vec_blocked(a, a_blocking);
  std::vector<double> y = matvec(ts.matrix, x);

  const Blocking r_blocking = multilinear_result_blocking(bs);
  const PermutationVector p_r = build_P_M(r_blocking);
  return DenseTensor(r_blocking.shape(), permute(invert(p_r), y));
}

DenseTensor multilinear_blocked_seq(const DenseTensor& a, const std::vector<BlockedMatrix>& bs,
                                    const Blocking& a_blocking) {
  check_multilinear_blockings(a, bs, a_blocking);
  const Index d = a.order();
  DenseTensor cur = a;
  Blocking cur_blocking = a_blocking;
  for (Index i = 1; i <= d; ++i) {
    const BlockedMatrix& b = bs[static_cast<std::size_t>(i - 1)];
    const UnfoldSpec spec = mode_unfold_spec(d, i);
    BlockUnfolding bu = block_unfold(cur, cur_blocking, spec);

    DenseMatrix updated = block_matmul(b.matrix, b.row_parts, b.col_parts, bu.matrix,
                                       bu.layout.block_col_sizes);

    // The mode-i blocking is replaced by the row blocking of B^(i).
    std::vector<Index> dims = cur.shape().dims();
    dims[static_cast<std::size_t>(i - 1)] = b.matrix.rows();
    std::vector<std::vector<Index>> parts = cur_blocking.parts();
    parts[static_cast<std::size_t>(i - 1)] = b.row_parts;
    Blocking next_blocking(Shape(dims), std::move(parts));

    const PermutationVector row_perm = unfolding_side_permutation(next_blocking, spec.row_modes);
    const PermutationVector col_perm = unfolding_side_permutation(next_blocking, spec.col_modes);
    DenseMatrix plain(updated.rows(), updated.cols());
    for (Index j = 1; j <= plain.cols(); ++j) {
      const Index dst_col = col_perm[j];
      for (Index ii = 1; ii <= plain.rows(); ++ii) {
        plain.at(row_perm[ii], dst_col) = updated.at(ii, j);
      }
    }
    cur = fold(UnfoldedMatrix{std::move(plain), spec, Shape(std::move(dims))});
    cur_blocking = std::move(next_blocking);
  }
  return cur;
}

}  // namespace btl
