#include "btl/verify.hpp"

#include <cmath>
#include <optional>
#include <random>
#include <sstream>

#include "btl/blocking.hpp"
#include "btl/contraction.hpp"
#include "btl/figure.hpp"
#include "btl/permutation.hpp"
#include "btl/tensor.hpp"
#include "btl/transpose.hpp"
#include "btl/unfolding.hpp"

namespace btl {
namespace {

constexpr double kTol = 1e-12;

// mt19937_64 plus hand-rolled draws, so reports are identical across
// standard libraries for a given seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  Index uniform(Index lo, Index hi) {
    return lo + static_cast<Index>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  double real() {  // [-1, 1)
    return static_cast<double>(gen_() >> 11) * (2.0 / 9007199254740992.0) - 1.0;
  }

 private:
  std::mt19937_64 gen_;
};

std::vector<double> random_data(Rng& rng, Index count) {
  std::vector<double> data(static_cast<std::size_t>(count));
  for (auto& v : data) v = rng.real();
  return data;
}

DenseTensor random_tensor(Rng& rng, const Shape& n) {
  return DenseTensor(n, random_data(rng, n.count()));
}

Shape random_shape(Rng& rng, Index max_order, Index max_dim, Index max_total) {
  const Index d = rng.uniform(1, max_order);
  std::vector<Index> dims;
  Index total = 1;
  for (Index k = 0; k < d; ++k) {
    const Index cap = std::max<Index>(1, std::min(max_dim, max_total / total));
    const Index nk = rng.uniform(1, cap);
    dims.push_back(nk);
    total *= nk;
  }
  return Shape(std::move(dims));
}

std::vector<Index> random_partition(Rng& rng, Index n) {
  std::vector<Index> parts;
  Index rest = n;
  while (rest > 0) {
    const Index take = rng.uniform(1, rest);
    parts.push_back(take);
    rest -= take;
  }
  return parts;
}

Blocking random_blocking(Rng& rng, const Shape& n) {
  std::vector<std::vector<Index>> parts;
  parts.reserve(static_cast<std::size_t>(n.order()));
  for (Index k = 1; k <= n.order(); ++k) {
    parts.push_back(random_partition(rng, n.dim(k)));
  }
  return Blocking(n, std::move(parts));
}

PermutationVector random_perm(Rng& rng, Index n) {
  std::vector<Index> v(static_cast<std::size_t>(n));
  for (Index k = 0; k < n; ++k) v[static_cast<std::size_t>(k)] = k + 1;
  for (Index k = n - 1; k > 0; --k) {
    const Index j = rng.uniform(0, k);
    std::swap(v[static_cast<std::size_t>(k)], v[static_cast<std::size_t>(j)]);
  }
  return PermutationVector(std::move(v));
}

// f (x) g for plain vectors.
std::vector<double> kron_vec(std::span<const double> f, std::span<const double> g) {
  std::vector<double> out;
  out.reserve(f.size() * g.size());
  for (double fv : f) {
    for (double gv : g) out.push_back(fv * gv);
  }
  return out;
}

bool same_values(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) return false;
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k] != b[k]) return false;
  }
  return true;
}

bool same_entries(const std::vector<Index>& a, const std::vector<Index>& b) { return a == b; }

struct Collector {
  explicit Collector(std::string name_in) : name(std::move(name_in)) {}

  void fail(int instance, const std::string& msg) {
    if (detail.empty()) {
      detail = "instance " + std::to_string(instance) + ": " + msg;
    }
    failed = true;
  }

  CheckResult done() const { return CheckResult{name, instances, !failed, detail}; }

  std::string name;
  int instances = 0;
  bool failed = false;
  std::string detail;
};

CheckResult check_transpose_shuffle(Rng& rng) {
  Collector c(checks::kTransposeShuffle);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Index q = rng.uniform(1, 8);
    const Index r = rng.uniform(1, 8);
    DenseTensor a = random_tensor(rng, Shape({q, r}));
    const PermutationVector shuffle = perfect_shuffle(q, r);
    const DenseTensor direct = p_transpose(a, PermutationVector({2, 1}));
    const auto via_perm = permute(invert(shuffle), std::vector<double>(a.vec().begin(), a.vec().end()));
    const auto via_dense = matvec(transposed(to_dense(shuffle)), a.vec());
    if (!same_values(direct.vec(), via_perm) || !same_values(direct.vec(), via_dense)) {
      c.fail(t, "transpose vec disagrees with the shuffle");
    }
  }
  return c.done();
}

CheckResult check_shuffle_swaps_kron(Rng& rng) {
  Collector c(checks::kShuffleSwapsKron);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Index q = rng.uniform(1, 8);
    const Index r = rng.uniform(1, 8);
    const std::vector<double> f = random_data(rng, q);
    const std::vector<double> g = random_data(rng, r);
    const std::vector<double> fg = kron_vec(f, g);
    const std::vector<double> gf = kron_vec(g, f);
    const PermutationVector shuffle = perfect_shuffle(q, r);
    if (!same_values(permute(shuffle, fg), gf) || !same_values(matvec(to_dense(shuffle), fg), gf)) {
      c.fail(t, "shuffled f(x)g is not g(x)f");
    }
  }
  return c.done();
}

CheckResult check_blocked_kron_regroup(Rng& rng) {
  Collector c(checks::kBlockedKronRegroup);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Index q = rng.uniform(1, 6);
    const Index r = rng.uniform(1, 8);
    const std::vector<Index> rho = random_partition(rng, r);
    const std::vector<double> f = random_data(rng, q);
    const std::vector<double> g = random_data(rng, r);

    std::optional<PermutationVector> diag;
    for (Index part : rho) {
      PermutationVector s = perfect_shuffle(part, q);
      diag = diag ? direct_sum(*diag, std::move(s)) : std::move(s);
    }
    const PermutationVector p = compose(*diag, perfect_shuffle(q, r));

    std::vector<double> expected;
    std::size_t start = 0;
    for (Index part : rho) {
      std::span<const double> gi(g.data() + start, static_cast<std::size_t>(part));
      const std::vector<double> piece = kron_vec(f, gi);
      expected.insert(expected.end(), piece.begin(), piece.end());
      start += static_cast<std::size_t>(part);
    }
    const std::vector<double> x = kron_vec(f, g);
    if (!same_values(permute(p, x), expected) || !same_values(matvec(to_dense(p), x), expected)) {
      c.fail(t, "regrouped kronecker stack mismatch");
    }
  }
  return c.done();
}

CheckResult check_middle_pair_swap(Rng& rng) {
  Collector c(checks::kMiddlePairSwap);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    Index n1 = 1, n2 = 1, n3 = 1, n4 = 1;
    do {
      n1 = rng.uniform(1, 4);
      n2 = rng.uniform(1, 4);
      n3 = rng.uniform(1, 4);
      n4 = rng.uniform(1, 4);
    } while (n1 * n2 * n3 * n4 > 64);
    const PermutationVector w = lemma21_perm(n1, n2, n3, n4);
    DenseTensor a = random_tensor(rng, Shape({n1, n2, n3, n4}));
    const DenseTensor b = p_transpose(a, PermutationVector({1, 3, 2, 4}));
    if (!same_values(permute(w, std::vector<double>(a.vec().begin(), a.vec().end())), b.vec())) {
      c.fail(t, "vec permutation disagrees with the materialized transpose");
      continue;
    }
    const DenseMatrix dense = kron(kron(identity_matrix(n4), to_dense(perfect_shuffle(n3, n2))),
                                   identity_matrix(n1));
    if (!same_values(to_dense(w).data(), dense.data())) {
      c.fail(t, "dense matrix form mismatch");
    }
  }
  return c.done();
}

std::vector<Index> adjacent_swap_mode_list(Index d, Index k) {
  std::vector<Index> p;
  for (Index m = 1; m <= d; ++m) p.push_back(m);
  std::swap(p[static_cast<std::size_t>(k - 1)], p[static_cast<std::size_t>(k)]);
  return p;
}

CheckResult check_adjacent_swap(Rng& rng) {
  Collector c(checks::kAdjacentSwap);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    Shape n = random_shape(rng, 4, 4, 64);
    while (n.order() < 2) n = random_shape(rng, 4, 4, 64);
    const Index k = rng.uniform(1, n.order() - 1);
    const PermutationVector w = adjacent_swap_perm(n, k);
    DenseTensor a = random_tensor(rng, n);
    const PermutationVector p{adjacent_swap_mode_list(n.order(), k)};
    const DenseTensor b = p_transpose(a, p);
    if (!same_values(permute(w, std::vector<double>(a.vec().begin(), a.vec().end())), b.vec())) {
      c.fail(t, "swap permutation disagrees with the transpose");
      continue;
    }
    const auto& dims = n.dims();
    const Index left = product(std::span<const Index>(dims).subspan(0, static_cast<std::size_t>(k - 1)));
    const Index right = product(std::span<const Index>(dims).subspan(static_cast<std::size_t>(k + 1)));
    const DenseMatrix dense =
        kron(kron(identity_matrix(right), to_dense(perfect_shuffle(n.dim(k + 1), n.dim(k)))),
             identity_matrix(left));
    if (!same_values(to_dense(w).data(), dense.data())) {
      c.fail(t, "dense matrix form mismatch");
    }
  }
  return c.done();
}

CheckResult check_mode_to_front(Rng& rng) {
  Collector c(checks::kModeToFront);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Shape n = random_shape(rng, 4, 4, 64);
    const Index d = n.order();
    const Index k = rng.uniform(1, d);
    const PermutationVector w = to_front_perm(n, k);
    DenseTensor a = random_tensor(rng, n);
    std::vector<Index> p{k};
    for (Index m = 1; m <= d; ++m) {
      if (m != k) p.push_back(m);
    }
    const DenseTensor b = p_transpose(a, PermutationVector(p));
    if (!same_values(permute(w, std::vector<double>(a.vec().begin(), a.vec().end())), b.vec())) {
      c.fail(t, "to-front permutation disagrees with the transpose");
      continue;
    }
    const auto& dims = n.dims();
    const Index before = product(std::span<const Index>(dims).subspan(0, static_cast<std::size_t>(k - 1)));
    const Index after = product(std::span<const Index>(dims).subspan(static_cast<std::size_t>(k)));
    const DenseMatrix dense =
        kron(identity_matrix(after), to_dense(perfect_shuffle(n.dim(k), before)));
    if (!same_values(to_dense(w).data(), dense.data())) {
      c.fail(t, "dense matrix form mismatch");
    }
  }
  return c.done();
}

CheckResult check_shuffle_vector_form(Rng& rng) {
  Collector c(checks::kShuffleVectorForm);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Index q = rng.uniform(1, 8);
    const Index r = rng.uniform(1, 8);
    const Index s = q * r;
    const PermutationVector w = perfect_shuffle(q, r);
    const std::vector<double> z = random_data(rng, s);
    // stacking of the strided slices z(1:r:s), z(2:r:s), ...
    std::vector<double> stacked;
    stacked.reserve(static_cast<std::size_t>(s));
    for (Index start = 1; start <= r; ++start) {
      for (Index e = start; e <= s; e += r) {
        stacked.push_back(z[static_cast<std::size_t>(e - 1)]);
      }
    }
    if (!same_values(permute(w, z), stacked)) {
      c.fail(t, "shuffle does not stack the strided slices");
      continue;
    }
    const DenseMatrix dense = to_dense(w);
    for (Index i = 1; i <= s; ++i) {
      double row_sum = 0.0;
      double col_sum = 0.0;
      for (Index j = 1; j <= s; ++j) {
        row_sum += dense.at(i, j);
        col_sum += dense.at(j, i);
      }
      if (row_sum != 1.0 || col_sum != 1.0) {
        c.fail(t, "dense form is not a permutation matrix");
        break;
      }
    }
  }
  return c.done();
}

CheckResult check_compose_oracle(Rng& rng) {
  Collector c(checks::kComposeOracle);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Index n = rng.uniform(1, 64);
    const PermutationVector u = random_perm(rng, n);
    const PermutationVector v = random_perm(rng, n);
    const PermutationVector w = compose(u, v);
    if (!same_values(to_dense(w).data(), matmul(to_dense(u), to_dense(v)).data())) {
      c.fail(t, "dense compose mismatch");
      continue;
    }
    const std::vector<double> x = random_data(rng, n);
    if (!same_values(permute(w, x), permute(u, permute(v, x)))) {
      c.fail(t, "compose application mismatch");
      continue;
    }
    if (!same_entries(compose(invert(v), invert(u)).entries(), invert(w).entries())) {
      c.fail(t, "inverse of a composition mismatch");
    }
  }
  return c.done();
}

CheckResult check_kron_oracle(Rng& rng) {
  Collector c(checks::kKronOracle);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Index n = rng.uniform(1, 8);
    const Index m = rng.uniform(1, 8);
    const PermutationVector u = random_perm(rng, n);
    const PermutationVector v = random_perm(rng, m);
    if (!same_values(to_dense(kron(u, v)).data(), kron(to_dense(u), to_dense(v)).data())) {
      c.fail(t, "dense kron mismatch");
      continue;
    }
    // (I_s (x) Pi_{r,q}) Pi_{q,rs} = Pi_{q,s} (x) I_r
    const Index q = rng.uniform(1, 4);
    const Index r = rng.uniform(1, 4);
    const Index s = rng.uniform(1, 4);
    const PermutationVector lhs =
        compose(kron(PermutationVector::identity(s), perfect_shuffle(r, q)), perfect_shuffle(q, r * s));
    const PermutationVector rhs = kron(perfect_shuffle(q, s), PermutationVector::identity(r));
    if (!same_entries(lhs.entries(), rhs.entries())) {
      c.fail(t, "shuffle factorization identity mismatch");
    }
  }
  return c.done();
}

CheckResult check_direct_sum_oracle(Rng& rng) {
  Collector c(checks::kDirectSumOracle);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Index n = rng.uniform(1, 8);
    const Index m = rng.uniform(1, 8);
    const PermutationVector u = random_perm(rng, n);
    const PermutationVector v = random_perm(rng, m);
    const DenseMatrix du = to_dense(u);
    const DenseMatrix dv = to_dense(v);
    DenseMatrix block_diag(n + m, n + m);
    for (Index i = 1; i <= n; ++i) {
      for (Index j = 1; j <= n; ++j) block_diag.at(i, j) = du.at(i, j);
    }
    for (Index i = 1; i <= m; ++i) {
      for (Index j = 1; j <= m; ++j) block_diag.at(n + i, n + j) = dv.at(i, j);
    }
    if (!same_values(to_dense(direct_sum(u, v)).data(), block_diag.data())) {
      c.fail(t, "dense direct sum mismatch");
    }
  }
  return c.done();
}

CheckResult check_block_vec_permutation(Rng& rng, bool corrupt_pm) {
  Collector c(checks::kBlockVecPermutation);
  for (int t = 0; t < 500; ++t) {
    ++c.instances;
    const Shape n = random_shape(rng, 5, 16, 4096);
    const Blocking m = random_blocking(rng, n);
    DenseTensor a = random_tensor(rng, n);
    PermutationVector p = build_P_M(m);
    if (corrupt_pm && p.size() >= 2) {
      std::vector<Index> broken = p.entries();
      std::swap(broken[0], broken[1]);
      p = PermutationVector(std::move(broken));
    }
    if (!same_values(permute(p, std::vector<double>(a.vec().begin(), a.vec().end())),
                     vec_blocked(a, m))) {
      c.fail(t, "permuted vec does not equal the blocked vec");
    }
  }
  return c.done();
}

CheckResult check_stepwise_block_vec(Rng& rng) {
  Collector c(checks::kStepwiseBlockVec);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Shape n = random_shape(rng, 5, 12, 2048);
    const Blocking m = random_blocking(rng, n);
    DenseTensor a = random_tensor(rng, n);
    std::vector<double> state(a.vec().begin(), a.vec().end());
    for (const PermutationVector& q : P_M_factors(m)) {
      state = permute(q, state);
    }
    if (!same_values(state, vec_blocked(a, m))) {
      c.fail(t, "factor-by-factor application misses the blocked vec");
    }
  }
  return c.done();
}

CheckResult check_entry_decomposition(Rng& rng) {
  Collector c(checks::kEntryDecomposition);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Shape n = random_shape(rng, 4, 8, 512);
    const Blocking m = random_blocking(rng, n);
    DenseTensor a = random_tensor(rng, n);

    // index -> (block, offset) tables per mode
    std::vector<std::vector<std::pair<Index, Index>>> table(static_cast<std::size_t>(n.order()));
    for (Index k = 1; k <= n.order(); ++k) {
      auto& tk = table[static_cast<std::size_t>(k - 1)];
      tk.resize(static_cast<std::size_t>(n.dim(k)));
      for (Index j = 1; j <= m.block_count(k); ++j) {
        for (Index i = m.lower(k, j); i <= m.upper(k, j); ++i) {
          tk[static_cast<std::size_t>(i - 1)] = {j, i - m.lower(k, j) + 1};
        }
      }
    }
    bool ok = true;
    for_each_index(n, [&](const MultiIndex& i) {
      if (!ok) return;
      std::vector<Index> beta(static_cast<std::size_t>(n.order()));
      std::vector<Index> delta(static_cast<std::size_t>(n.order()));
      for (Index k = 1; k <= n.order(); ++k) {
        const auto& entry = table[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(i[k] - 1)];
        beta[static_cast<std::size_t>(k - 1)] = entry.first;
        delta[static_cast<std::size_t>(k - 1)] = entry.second;
      }
      const DenseTensor block = extract_block(a, m, MultiIndex(beta));
      if (a.at(i) != block.at(MultiIndex(delta))) ok = false;
    });
    if (!ok) c.fail(t, "entry does not match its block/offset address");
  }
  return c.done();
}

CheckResult check_uniform_shortcut(Rng& rng) {
  Collector c(checks::kUniformShortcut);
  for (int t = 0; t < 200; ++t) {
    ++c.instances;
    Index d = 0;
    std::vector<Index> mu;
    std::vector<Index> dims;
    do {
      d = rng.uniform(1, 4);
      mu.clear();
      dims.clear();
      for (Index k = 0; k < d; ++k) {
        const Index m = rng.uniform(1, 4);
        const Index b = rng.uniform(1, 4);
        mu.push_back(m);
        dims.push_back(m * b);
      }
    } while (product(dims) > 1296);
    const UniformParams params(Shape(dims), mu);
    const PermutationVector fast = build_P_M_uniform(params);
    const PermutationVector general = build_P_M(params.to_blocking());
    if (!same_entries(fast.entries(), general.entries())) {
      c.fail(t, "uniform shortcut and general construction differ");
    }
  }
  return c.done();
}

UnfoldSpec random_spec(Rng& rng, Index d, bool allow_degenerate) {
  const PermutationVector p = random_perm(rng, d);
  const Index e = allow_degenerate ? rng.uniform(0, d) : rng.uniform(1, d - 1);
  UnfoldSpec spec;
  for (Index t = 1; t <= e; ++t) spec.row_modes.push_back(p[t]);
  for (Index t = e + 1; t <= d; ++t) spec.col_modes.push_back(p[t]);
  return spec;
}

CheckResult check_block_unfold_blocks(Rng& rng) {
  Collector c(checks::kBlockUnfoldBlocks);
  for (int t = 0; t < 300; ++t) {
    ++c.instances;
    const Shape n = random_shape(rng, 5, 8, 512);
    const Blocking m = random_blocking(rng, n);
    const UnfoldSpec spec = random_spec(rng, n.order(), true);
    DenseTensor a = random_tensor(rng, n);
    const BlockUnfolding bu = block_unfold(a, m, spec);
    bool ok = true;
    for_each_index(std::span<const Index>(m.block_counts()), [&](const MultiIndex& k) {
      if (!ok) return;
      const DenseMatrix lhs = get_block(bu, k);
      const UnfoldedMatrix rhs = unfold(extract_block(a, m, k), spec);
      if (lhs.rows() != rhs.matrix.rows() || lhs.cols() != rhs.matrix.cols() ||
          !same_values(lhs.data(), rhs.matrix.data())) {
        ok = false;
      }
    });
    if (!ok) c.fail(t, "a block of the block unfolding is not the block's unfolding");
  }
  return c.done();
}

CheckResult check_block_grid_geometry() {
  Collector c(checks::kBlockGridGeometry);
  c.instances = 1;
  const Shape n({9, 5, 8});
  const Blocking m(n, {{2, 3, 4}, {3, 2}, {2, 2, 2, 2}});
  Rng data_rng(1234);
  DenseTensor a = random_tensor(data_rng, n);
  const BlockUnfolding bu = block_unfold(a, m, mode_unfold_spec(3, 1));
  const std::vector<Index> expected_rows{2, 3, 4};
  std::vector<Index> expected_cols;
  for (int rep = 0; rep < 4; ++rep) {
    expected_cols.push_back(6);
    expected_cols.push_back(4);
  }
  if (bu.layout.block_row_sizes != expected_rows) {
    c.fail(0, "block row heights are not 2,3,4");
  } else if (bu.layout.block_col_sizes != expected_cols) {
    c.fail(0, "block column widths are not 6,4 repeating");
  } else {
    const DenseMatrix first = get_block(bu, MultiIndex({1, 1, 1}));
    const UnfoldedMatrix direct = unfold(extract_block(a, m, MultiIndex({1, 1, 1})),
                                         mode_unfold_spec(3, 1));
    if (first.rows() != 2 || first.cols() != 6 || !same_values(first.data(), direct.matrix.data())) {
      c.fail(0, "leading block is not the 2x6 unfolding of the first block");
    }
  }
  return c.done();
}

struct ContractionInstance {
  DenseTensor f;
  DenseTensor g;
  ContractionPlan plan;
  Blocking f_blocking;
  Blocking g_blocking;
};

ContractionInstance random_contraction(Rng& rng) {
  const Index f = rng.uniform(0, 3);
  const Index g = rng.uniform(0, 3);
  const Index ell = rng.uniform(1, 3);

  std::vector<Index> f_dims;
  for (Index k = 0; k < f + ell; ++k) f_dims.push_back(rng.uniform(1, 4));
  const Shape f_shape(f_dims);
  const PermutationVector p = random_perm(rng, f + ell);
  const PermutationVector q = random_perm(rng, g + ell);

  ContractionPlan plan(p, q, f);
  const std::vector<Index> lambda = plan.contracted_f_modes();
  const std::vector<Index> psi = plan.contracted_g_modes();

  std::vector<Index> g_dims(static_cast<std::size_t>(g + ell), 0);
  for (Index t = 0; t < ell; ++t) {
    g_dims[static_cast<std::size_t>(psi[static_cast<std::size_t>(t)] - 1)] =
        f_shape.dim(lambda[static_cast<std::size_t>(t)]);
  }
  for (auto& dim : g_dims) {
    if (dim == 0) dim = rng.uniform(1, 4);
  }
  const Shape g_shape(g_dims);

  Blocking f_blocking = random_blocking(rng, f_shape);
  std::vector<std::vector<Index>> g_parts(static_cast<std::size_t>(g + ell));
  for (Index t = 0; t < ell; ++t) {
    g_parts[static_cast<std::size_t>(psi[static_cast<std::size_t>(t)] - 1)] =
        f_blocking.part(lambda[static_cast<std::size_t>(t)]);
  }
  for (Index k = 1; k <= g_shape.order(); ++k) {
    auto& part = g_parts[static_cast<std::size_t>(k - 1)];
    if (part.empty()) part = random_partition(rng, g_shape.dim(k));
  }
  Blocking g_blocking(g_shape, std::move(g_parts));

  return ContractionInstance{random_tensor(rng, f_shape), random_tensor(rng, g_shape),
                             std::move(plan), std::move(f_blocking), std::move(g_blocking)};
}

std::pair<CheckResult, CheckResult> check_contraction(Rng& rng) {
  Collector routes(checks::kContractionRoutes);
  Collector recipe(checks::kBlockRecipe);
  for (int t = 0; t < 300; ++t) {
    ++routes.instances;
    ++recipe.instances;
    ContractionInstance inst = random_contraction(rng);
    const DenseTensor naive = contract_naive(inst.f, inst.g, inst.plan);
    const DenseTensor unfolded = contract_unfolded(inst.f, inst.g, inst.plan);
    if (!approx_equal(naive, unfolded, kTol)) {
      routes.fail(t, "unfolded route disagrees with direct summation");
      continue;
    }
    BlockedContractionPlan bplan(inst.plan, inst.f_blocking, inst.g_blocking);
    const DenseTensor blocked = contract_blocked(inst.f, inst.g, bplan);
    if (!approx_equal(naive, blocked, kTol)) {
      routes.fail(t, "blocked route disagrees with direct summation");
      continue;
    }

    // Per-block recipe against the blocks of the blocked result.
    if (inst.plan.f() + inst.plan.g() == 0) {
      const DenseMatrix scalar = contract_block_recipe(inst.f, inst.g, bplan, MultiIndex({1}));
      const double lhs[] = {scalar.at(1, 1)};
      if (!approx_equal(std::span<const double>(lhs), blocked.vec(), kTol)) {
        recipe.fail(t, "full inner product recipe disagrees with the blocked result");
      }
      continue;
    }
    const Blocking h_blocking = bplan.result_blocking();
    UnfoldSpec out_spec;
    for (Index i = 1; i <= inst.plan.f(); ++i) out_spec.row_modes.push_back(i);
    for (Index i = 1; i <= inst.plan.g(); ++i) out_spec.col_modes.push_back(inst.plan.f() + i);
    bool ok = true;
    for_each_index(std::span<const Index>(h_blocking.block_counts()), [&](const MultiIndex& k) {
      if (!ok) return;
      const DenseMatrix lhs = contract_block_recipe(inst.f, inst.g, bplan, k);
      const UnfoldedMatrix rhs = unfold(extract_block(blocked, h_blocking, k), out_spec);
      if (lhs.rows() != rhs.matrix.rows() || lhs.cols() != rhs.matrix.cols() ||
          !approx_equal(lhs.data(), rhs.matrix.data(), kTol)) {
        ok = false;
      }
    });
    if (!ok) recipe.fail(t, "per-block recipe disagrees with the blocked result");
  }
  return {routes.done(), recipe.done()};
}

CheckResult check_multilinear(Rng& rng) {
  Collector c(checks::kMultilinearForms);
  for (int t = 0; t < 200; ++t) {
    ++c.instances;
    const Index d = rng.uniform(1, 4);
    std::vector<Index> n_dims;
    std::vector<Index> q_dims;
    for (Index k = 0; k < d; ++k) {
      n_dims.push_back(rng.uniform(1, 4));
      q_dims.push_back(rng.uniform(1, 4));
    }
    const bool identity_case = (t % 10 == 0);
    if (identity_case) q_dims = n_dims;

    const Shape n(n_dims);
    DenseTensor a = random_tensor(rng, n);

    std::vector<DenseMatrix> bs;
    std::vector<BlockedMatrix> blocked_bs;
    std::vector<std::vector<Index>> a_parts;
    for (Index k = 0; k < d; ++k) {
      DenseMatrix b = identity_case
                          ? identity_matrix(n_dims[static_cast<std::size_t>(k)])
                          : DenseMatrix(q_dims[static_cast<std::size_t>(k)],
                                        n_dims[static_cast<std::size_t>(k)],
                                        random_data(rng, q_dims[static_cast<std::size_t>(k)] *
                                                             n_dims[static_cast<std::size_t>(k)]));
      std::vector<Index> col_parts = random_partition(rng, b.cols());
      std::vector<Index> row_parts =
          identity_case ? col_parts : random_partition(rng, b.rows());
      a_parts.push_back(col_parts);
      bs.push_back(b);
      blocked_bs.emplace_back(std::move(b), std::move(row_parts), std::move(col_parts));
    }
    const Blocking a_blocking(n, a_parts);

    const DenseTensor naive = multilinear_naive(a, bs);
    const DenseTensor via_kron = multilinear_kron(a, bs);
    const DenseTensor via_modes = multilinear_mode_products(a, bs);
    const DenseTensor via_blocked = multilinear_blocked(a, blocked_bs, a_blocking);
    const DenseTensor via_seq = multilinear_blocked_seq(a, blocked_bs, a_blocking);
    if (!approx_equal(naive, via_kron, kTol) || !approx_equal(naive, via_modes, kTol) ||
        !approx_equal(naive, via_blocked, kTol) || !approx_equal(naive, via_seq, kTol)) {
      c.fail(t, "the multilinear routes disagree");
      continue;
    }
    if (identity_case) {
      if (!same_values(naive.vec(), a.vec()) || !same_values(via_kron.vec(), a.vec()) ||
          !same_values(via_modes.vec(), a.vec()) || !same_values(via_blocked.vec(), a.vec()) ||
          !same_values(via_seq.vec(), a.vec())) {
        c.fail(t, "identity matrices do not reproduce the tensor exactly");
      }
    }
  }
  return c.done();
}

CheckResult check_rank1(Rng& rng) {
  Collector c(checks::kRank1Structure);
  for (int t = 0; t < 100; ++t) {
    ++c.instances;
    const Index d = rng.uniform(1, 4);
    std::vector<DenseTensor> factors;
    std::vector<std::vector<double>> raw;
    for (Index k = 0; k < d; ++k) {
      raw.push_back(random_data(rng, rng.uniform(1, 4)));
      factors.push_back(DenseTensor::vector(raw.back()));
    }
    const DenseTensor a = rank1(factors);

    // vec equals the reversed kronecker chain of the factors.
    std::vector<double> expected = raw[static_cast<std::size_t>(d - 1)];
    for (Index k = d - 2; k >= 0; --k) {
      expected = kron_vec(expected, raw[static_cast<std::size_t>(k)]);
    }
    if (!approx_equal(a.vec(), expected, kTol)) {
      c.fail(t, "rank-1 vec is not the reversed kronecker product");
      continue;
    }

    if (d >= 2) {
      // Unfolding = outer product of the side vecs, and it has rank 1.
      const UnfoldSpec spec = random_spec(rng, d, false);
      const UnfoldedMatrix u = unfold(a, spec);
      std::vector<DenseTensor> row_factors;
      for (Index mode : spec.row_modes) row_factors.push_back(factors[static_cast<std::size_t>(mode - 1)]);
      std::vector<DenseTensor> col_factors;
      for (Index mode : spec.col_modes) col_factors.push_back(factors[static_cast<std::size_t>(mode - 1)]);
      const DenseTensor row_vec = rank1(row_factors);
      const DenseTensor col_vec = rank1(col_factors);
      DenseMatrix outer(u.matrix.rows(), u.matrix.cols());
      for (Index j = 1; j <= outer.cols(); ++j) {
        for (Index i = 1; i <= outer.rows(); ++i) {
          outer.at(i, j) = row_vec.vec()[static_cast<std::size_t>(i - 1)] *
                           col_vec.vec()[static_cast<std::size_t>(j - 1)];
        }
      }
      if (!approx_equal(u.matrix.data(), outer.data(), kTol)) {
        c.fail(t, "unfolding is not the outer product of side vecs");
        continue;
      }
      // columns proportional to the strongest column
      Index pivot = 1;
      double best = -1.0;
      for (Index j = 1; j <= u.matrix.cols(); ++j) {
        double norm = 0.0;
        for (Index i = 1; i <= u.matrix.rows(); ++i) norm += std::abs(u.matrix.at(i, j));
        if (norm > best) {
          best = norm;
          pivot = j;
        }
      }
      bool rank_one = true;
      const double denom = col_vec.vec()[static_cast<std::size_t>(pivot - 1)];
      for (Index j = 1; j <= u.matrix.cols() && rank_one; ++j) {
        const double scale = denom == 0.0 ? 0.0 : col_vec.vec()[static_cast<std::size_t>(j - 1)] / denom;
        for (Index i = 1; i <= u.matrix.rows(); ++i) {
          if (std::abs(u.matrix.at(i, j) - scale * u.matrix.at(i, pivot)) > kTol * (1.0 + std::abs(best))) {
            rank_one = false;
            break;
          }
        }
      }
      if (!rank_one) {
        c.fail(t, "unfolding of a rank-1 tensor is not rank 1");
        continue;
      }
    }

    if (t % 3 == 0) {
      // Interleaved unfolding of an outer product of matrices equals the
      // reversed kronecker product of the matrices.
      const Index dm = rng.uniform(1, 3);
      std::vector<DenseMatrix> mats;
      std::optional<DenseTensor> outer_tensor;
      for (Index k = 0; k < dm; ++k) {
        const Index rows = rng.uniform(1, 3);
        const Index cols = rng.uniform(1, 3);
        DenseMatrix b(rows, cols, random_data(rng, rows * cols));
        DenseTensor piece(Shape({rows, cols}),
                          std::vector<double>(b.data().begin(), b.data().end()));
        outer_tensor = outer_tensor ? outer_product(*outer_tensor, piece) : piece;
        mats.push_back(std::move(b));
      }
      UnfoldSpec spec;
      for (Index k = 1; k <= dm; ++k) spec.row_modes.push_back(2 * k - 1);
      for (Index k = 1; k <= dm; ++k) spec.col_modes.push_back(2 * k);
      const UnfoldedMatrix u = unfold(*outer_tensor, spec);
      DenseMatrix expected_mat = mats[static_cast<std::size_t>(dm - 1)];
      for (Index k = dm - 1; k >= 1; --k) {
        expected_mat = kron(expected_mat, mats[static_cast<std::size_t>(k - 1)]);
      }
      if (!approx_equal(u.matrix.data(), expected_mat.data(), kTol)) {
        c.fail(t, "interleaved unfolding is not the reversed matrix kron");
      }
    }
  }
  return c.done();
}

// Maximal runs of consecutive integers in a sorted unique list.
int count_runs(std::vector<Index> values) {
  if (values.empty()) return 0;
  int runs = 1;
  for (std::size_t k = 1; k < values.size(); ++k) {
    if (values[k] != values[k - 1] + 1) ++runs;
  }
  return runs;
}

CheckResult check_contiguity() {
  Collector c(checks::kContiguity);
  c.instances = 1;
  const Shape n({9, 5, 8});
  const Blocking m(n, {{2, 3, 4}, {3, 2}, {2, 2, 2, 2}});

  const BlockMap plain = block_map(n, m, 1, false);
  std::vector<Index> plain_cols;
  for (Index j = 1; j <= plain.cols; ++j) {
    for (Index i = 1; i <= plain.rows; ++i) {
      if (plain.label(i, j) == "311") {
        plain_cols.push_back(j);
        break;
      }
    }
  }
  if (count_runs(plain_cols) < 2) {
    c.fail(0, "block 311 is contiguous in the plain unfolding");
    return c.done();
  }

  const BlockMap blocked = block_map(n, m, 1, true);
  Index min_row = blocked.rows + 1, max_row = 0, min_col = blocked.cols + 1, max_col = 0;
  Index cells = 0;
  for (Index i = 1; i <= blocked.rows; ++i) {
    for (Index j = 1; j <= blocked.cols; ++j) {
      if (blocked.label(i, j) == "311") {
        min_row = std::min(min_row, i);
        max_row = std::max(max_row, i);
        min_col = std::min(min_col, j);
        max_col = std::max(max_col, j);
        ++cells;
      }
    }
  }
  const Index height = max_row - min_row + 1;
  const Index width = max_col - min_col + 1;
  if (cells == 0 || cells != height * width || height != 4 || width != 6) {
    c.fail(0, "block 311 is not one contiguous 4x6 rectangle after block unfolding");
  }
  return c.done();
}

}  // namespace

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
  Rng rng(options.seed);
  std::vector<CheckResult> results;
  results.push_back(check_transpose_shuffle(rng));
  results.push_back(check_shuffle_swaps_kron(rng));
  results.push_back(check_blocked_kron_regroup(rng));
  results.push_back(check_middle_pair_swap(rng));
  results.push_back(check_adjacent_swap(rng));
  results.push_back(check_mode_to_front(rng));
  results.push_back(check_shuffle_vector_form(rng));
  results.push_back(check_compose_oracle(rng));
  results.push_back(check_kron_oracle(rng));
  results.push_back(check_direct_sum_oracle(rng));
  results.push_back(check_block_vec_permutation(rng, options.corrupt_pm));
  results.push_back(check_stepwise_block_vec(rng));
  results.push_back(check_entry_decomposition(rng));
  results.push_back(check_uniform_shortcut(rng));
  results.push_back(check_block_unfold_blocks(rng));
  results.push_back(check_block_grid_geometry());
  {
    auto [routes, recipe] = check_contraction(rng);
    results.push_back(std::move(routes));
    results.push_back(std::move(recipe));
  }
  results.push_back(check_multilinear(rng));
  results.push_back(check_rank1(rng));
  results.push_back(check_contiguity());
  return results;
}

int count_failures(const std::vector<CheckResult>& results) {
  int failures = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failures;
  }
  return failures;
}

std::string format_report(const VerifyOptions& options, const std::vector<CheckResult>& results) {
  std::ostringstream out;
  out << "seed: " << options.seed << '\n';
  if (options.corrupt_pm) out << "fault injection: P_M off-by-one\n";
  for (const auto& r : results) {
    out << (r.passed ? "[pass] " : "[FAIL] ") << r.name << " (" << r.instances << " instances)";
    if (!r.passed) out << ": " << r.detail;
    out << '\n';
  }
  const int failures = count_failures(results);
  out << "result: " << (failures == 0 ? "PASS" : "FAIL") << " (" << results.size() << " checks, "
      << failures << " failed)\n";
  return out.str();
}

}  // namespace btl
