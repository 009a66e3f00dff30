#include "doctest.h"

#include "btl/contraction.hpp"
#include "btl/unfolding.hpp"
#include "oracles.hpp"

using namespace btl;
using testing::Rng;
using testing::same_values;

namespace {

constexpr double kTol = 1e-12;

ContractionPlan identity_plan(Index f_order, Index g_order, Index f) {
  return ContractionPlan(PermutationVector::identity(f_order),
                         PermutationVector::identity(g_order), f);
}

}  // namespace

TEST_CASE("an ordinary matrix product is the simplest plan") {
  Rng rng(61);
  const DenseTensor f = testing::random_tensor(rng, Shape({3, 4}));
  const DenseTensor g = testing::random_tensor(rng, Shape({4, 5}));
  const ContractionPlan plan = identity_plan(2, 2, 1);
  const DenseTensor h = contract_naive(f, g, plan);
  CHECK(h.shape() == Shape({3, 5}));

  const DenseMatrix fm(3, 4, std::vector<double>(f.vec().begin(), f.vec().end()));
  const DenseMatrix gm(4, 5, std::vector<double>(g.vec().begin(), g.vec().end()));
  const DenseMatrix expected = matmul(fm, gm);
  CHECK(approx_equal(h.vec(), expected.data(), kTol));

  const DenseTensor h2 = contract_unfolded(f, g, plan);
  CHECK(same_values(h2.vec(), h.vec()));
}

TEST_CASE("contracting rank-1 tensors scales the outer product of the free parts") {
  const std::vector<double> u{1, 2};
  const std::vector<double> v{3, 1, 2};
  const std::vector<double> w{2, 5};
  const DenseTensor f = rank1({DenseTensor::vector(u), DenseTensor::vector(v)});
  const DenseTensor g = rank1({DenseTensor::vector(v), DenseTensor::vector(w)});
  // contract mode 2 of F against mode 1 of G
  const ContractionPlan plan = identity_plan(2, 2, 1);
  const DenseTensor h = contract_naive(f, g, plan);
  const double scale = 3 * 3 + 1 * 1 + 2 * 2;
  for (Index i = 1; i <= 2; ++i) {
    for (Index j = 1; j <= 2; ++j) {
      CHECK(h.at(MultiIndex({i, j})) ==
            doctest::Approx(scale * u[static_cast<std::size_t>(i - 1)] *
                            w[static_cast<std::size_t>(j - 1)])
                .epsilon(kTol));
    }
  }
}

TEST_CASE("an order-4 against order-5 contraction matches a direct loop") {
  Rng rng(62);
  const Shape fs({2, 3, 2, 2});
  const Shape gs({2, 2, 3, 2, 2});
  const DenseTensor f = testing::random_tensor(rng, fs);
  const DenseTensor g = testing::random_tensor(rng, gs);
  // contract modes 3,4 of F against modes 1,2 of G
  const ContractionPlan plan = identity_plan(4, 5, 2);
  const DenseTensor h = contract_naive(f, g, plan);
  CHECK(h.shape() == Shape({2, 3, 3, 2, 2}));

  for_each_index(h.shape(), [&](const MultiIndex& idx) {
    double sum = 0;
    for (Index k1 = 1; k1 <= 2; ++k1) {
      for (Index k2 = 1; k2 <= 2; ++k2) {
        sum += f.at(MultiIndex({idx[1], idx[2], k1, k2})) *
               g.at(MultiIndex({k1, k2, idx[3], idx[4], idx[5]}));
      }
    }
    CHECK(h.at(idx) == doctest::Approx(sum).epsilon(kTol));
  });

  const DenseTensor h2 = contract_unfolded(f, g, plan);
  CHECK(approx_equal(h, h2, kTol));
}

TEST_CASE("a g=0 contraction is a matrix-vector product of unfoldings") {
  Rng rng(63);
  const Shape fs({2, 3, 2, 2, 3});
  const Shape gs({2, 3});  // alpha_2 = 3 pairs with mode 2 of G, alpha_3 = 2 with mode 1
  const DenseTensor f = testing::random_tensor(rng, fs);
  const DenseTensor g = testing::random_tensor(rng, gs);
  const ContractionPlan plan(PermutationVector({5, 1, 4, 2, 3}), PermutationVector({2, 1}), 3);
  CHECK(plan.ell() == 2);
  CHECK(plan.g() == 0);

  const DenseTensor h = contract_naive(f, g, plan);
  CHECK(h.shape() == Shape({3, 2, 2}));

  // elementwise against the definition
  for_each_index(h.shape(), [&](const MultiIndex& i) {
    double sum = 0;
    for (Index k1 = 1; k1 <= 3; ++k1) {
      for (Index k2 = 1; k2 <= 2; ++k2) {
        sum += f.at(MultiIndex({i[2], k1, k2, i[3], i[1]})) * g.at(MultiIndex({k2, k1}));
      }
    }
    CHECK(h.at(i) == doctest::Approx(sum).epsilon(kTol));
  });

  // vec(H) = F_{[5 1 4] x [2 3]} * vec(G^T)
  const UnfoldedMatrix fu = unfold(f, UnfoldSpec{{5, 1, 4}, {2, 3}});
  const UnfoldedMatrix gt = unfold(g, UnfoldSpec{{2, 1}, {}});
  const std::vector<double> hv =
      matvec(fu.matrix, std::vector<double>(gt.matrix.data().begin(), gt.matrix.data().end()));
  CHECK(approx_equal(h.vec(), hv, kTol));

  const DenseTensor h2 = contract_unfolded(f, g, plan);
  CHECK(approx_equal(h, h2, kTol));
}

TEST_CASE("plans validate their inputs") {
  CHECK_THROWS_AS(ContractionPlan(PermutationVector::identity(2),
                                  PermutationVector::identity(2), 2),
                  ArgumentError);  // no contracted mode
  CHECK_THROWS_AS(ContractionPlan(PermutationVector::identity(3),
                                  PermutationVector::identity(1), 0),
                  ArgumentError);  // G too small

  const DenseTensor f{Shape({2, 3})};
  const DenseTensor g{Shape({4, 2})};
  const ContractionPlan plan = identity_plan(2, 2, 1);
  CHECK_THROWS_WITH_AS(contract_naive(f, g, plan), doctest::Contains("mode"),
                       ArgumentError);
}

TEST_CASE("blocked contraction with trivial blockings equals the unfolded route") {
  Rng rng(64);
  const DenseTensor f = testing::random_tensor(rng, Shape({3, 4, 2}));
  const DenseTensor g = testing::random_tensor(rng, Shape({4, 3, 5}));
  const ContractionPlan plan(PermutationVector({3, 1, 2}), PermutationVector({2, 1, 3}), 1);
  const BlockedContractionPlan bplan(plan, Blocking::trivial(f.shape()),
                                     Blocking::trivial(g.shape()));
  const DenseTensor blocked = contract_blocked(f, g, bplan);
  const DenseTensor unfolded = contract_unfolded(f, g, plan);
  CHECK(same_values(blocked.vec(), unfolded.vec()));
}

TEST_CASE("a 3x4x2-blocked star contraction sums over fiber blocks") {
  Rng rng(65);
  const Shape fs({6, 8, 4});
  const Shape gs({4, 6, 5});
  const Blocking fm(fs, {{2, 2, 2}, {2, 2, 2, 2}, {2, 2}});
  const Blocking gm(gs, {{2, 2}, {2, 2, 2}, {1, 1, 1, 1, 1}});
  const DenseTensor f = testing::random_tensor(rng, fs);
  const DenseTensor g = testing::random_tensor(rng, gs);
  const ContractionPlan plan = identity_plan(3, 3, 2);
  const BlockedContractionPlan bplan(plan, fm, gm);

  const DenseTensor h = contract_blocked(f, g, bplan);
  CHECK(approx_equal(h, contract_naive(f, g, plan), kTol));

  // H_{abcd} = F_{ab1} * G_{1cd} + F_{ab2} * G_{2cd}, blockwise
  const Blocking hm = bplan.result_blocking();
  for_each_index(std::span<const Index>(hm.block_counts()), [&](const MultiIndex& k) {
    const DenseMatrix direct = contract_block_recipe(f, g, bplan, k);
    DenseMatrix expected(direct.rows(), direct.cols());
    for (Index qblock = 1; qblock <= 2; ++qblock) {
      const DenseTensor fb = extract_block(f, fm, MultiIndex({k[1], k[2], qblock}));
      const DenseTensor gb = extract_block(g, gm, MultiIndex({qblock, k[3], k[4]}));
      const DenseTensor term = contract_naive(fb, gb, plan);
      const UnfoldedMatrix tm = unfold(term, UnfoldSpec{{1, 2}, {3, 4}});
      for (Index j = 1; j <= expected.cols(); ++j) {
        for (Index i = 1; i <= expected.rows(); ++i) {
          expected.at(i, j) += tm.matrix.at(i, j);
        }
      }
    }
    CHECK(approx_equal(direct.data(), expected.data(), kTol));

    const UnfoldedMatrix from_h =
        unfold(extract_block(h, hm, k), UnfoldSpec{{1, 2}, {3, 4}});
    CHECK(approx_equal(direct.data(), from_h.matrix.data(), kTol));
  });

  // the result blocking partitions each mode as the operands prescribe
  CHECK(hm.part(1) == fm.part(1));
  CHECK(hm.part(2) == fm.part(2));
  CHECK(hm.part(3) == gm.part(2));
  CHECK(hm.part(4) == gm.part(3));
}

TEST_CASE("non-conformal blockings are rejected naming the mode pair") {
  const Shape fs({4, 4});
  const Shape gs({4, 4});
  const ContractionPlan plan = identity_plan(2, 2, 1);
  const Blocking fm(fs, {{4}, {2, 2}});
  const Blocking gm(gs, {{1, 3}, {4}});
  CHECK_THROWS_WITH_AS(BlockedContractionPlan(plan, fm, gm),
                       doctest::Contains("F mode 2"), ArgumentError);
}

TEST_CASE("contraction is bilinear") {
  Rng rng(66);
  const Shape fs({3, 2, 2});
  const Shape gs({2, 4});
  const ContractionPlan plan = identity_plan(3, 2, 2);
  const DenseTensor f1 = testing::random_tensor(rng, fs);
  const DenseTensor f2 = testing::random_tensor(rng, fs);
  const DenseTensor g = testing::random_tensor(rng, gs);
  const double alpha = 0.37;
  const double beta = -1.25;

  DenseTensor mix{fs};
  for (std::size_t k = 0; k < mix.raw().size(); ++k) {
    mix.raw()[k] = alpha * f1.vec()[k] + beta * f2.vec()[k];
  }
  const DenseTensor lhs = contract_naive(mix, g, plan);
  const DenseTensor h1 = contract_naive(f1, g, plan);
  const DenseTensor h2 = contract_naive(f2, g, plan);
  for (std::size_t k = 0; k < lhs.raw().size(); ++k) {
    CHECK(lhs.vec()[k] ==
          doctest::Approx(alpha * h1.vec()[k] + beta * h2.vec()[k]).epsilon(1e-10));
  }
}

TEST_CASE("three contraction routes agree on random plans") {
  Rng rng(67);
  for (int t = 0; t < 60; ++t) {
    const Index ffree = rng.uniform(0, 3);
    const Index gfree = rng.uniform(0, 3);
    const Index ell = rng.uniform(1, 3);

    std::vector<Index> fdims;
    for (Index k = 0; k < ffree + ell; ++k) fdims.push_back(rng.uniform(1, 4));
    const Shape fs(fdims);
    const PermutationVector p = testing::random_perm(rng, ffree + ell);
    const PermutationVector q = testing::random_perm(rng, gfree + ell);
    ContractionPlan plan(p, q, ffree);

    const std::vector<Index> lambda = plan.contracted_f_modes();
    const std::vector<Index> psi = plan.contracted_g_modes();
    std::vector<Index> gdims(static_cast<std::size_t>(gfree + ell), 0);
    for (Index k = 0; k < ell; ++k) {
      gdims[static_cast<std::size_t>(psi[static_cast<std::size_t>(k)] - 1)] =
          fs.dim(lambda[static_cast<std::size_t>(k)]);
    }
    for (auto& d : gdims) {
      if (d == 0) d = rng.uniform(1, 4);
    }
    const Shape gs(gdims);

    const DenseTensor f = testing::random_tensor(rng, fs);
    const DenseTensor g = testing::random_tensor(rng, gs);
    const DenseTensor naive = contract_naive(f, g, plan);
    const DenseTensor unfolded = contract_unfolded(f, g, plan);
    CHECK(approx_equal(naive, unfolded, kTol));

    const Blocking fb = testing::random_blocking(rng, fs);
    std::vector<std::vector<Index>> gparts(static_cast<std::size_t>(gfree + ell));
    for (Index k = 0; k < ell; ++k) {
      gparts[static_cast<std::size_t>(psi[static_cast<std::size_t>(k)] - 1)] =
          fb.part(lambda[static_cast<std::size_t>(k)]);
    }
    for (Index k = 1; k <= gs.order(); ++k) {
      auto& part = gparts[static_cast<std::size_t>(k - 1)];
      if (part.empty()) part = testing::random_partition(rng, gs.dim(k));
    }
    const BlockedContractionPlan bplan(plan, fb, Blocking(gs, std::move(gparts)));
    const DenseTensor blocked = contract_blocked(f, g, bplan);
    CHECK(approx_equal(naive, blocked, kTol));
  }
}

TEST_CASE("the multilinear product in its simplest forms") {
  Rng rng(68);

  // identity matrices reproduce the tensor
  const Shape n({3, 2, 4});
  const DenseTensor a = testing::random_tensor(rng, n);
  const std::vector<DenseMatrix> ids{identity_matrix(3), identity_matrix(2), identity_matrix(4)};
  const DenseTensor id_naive = multilinear_naive(a, ids);
  const DenseTensor id_kron = multilinear_kron(a, ids);
  const DenseTensor id_modes = multilinear_mode_products(a, ids);
  CHECK(same_values(id_naive.vec(), a.vec()));
  CHECK(same_values(id_kron.vec(), a.vec()));
  CHECK(same_values(id_modes.vec(), a.vec()));

  // d = 1 is a matrix-vector product
  const DenseTensor v = DenseTensor::vector({1, 2, 3});
  const DenseMatrix b(2, 3, {1, 0, 0, 1, 1, 1});
  const DenseTensor mv = multilinear_naive(v, {b});
  CHECK(approx_equal(mv.vec(), matvec(b, v.vec()), kTol));

  // d = 2 is B1 A B2^T
  const DenseTensor m = testing::random_tensor(rng, Shape({3, 4}));
  const DenseMatrix b1(2, 3, testing::random_data(rng, 6));
  const DenseMatrix b2(5, 4, testing::random_data(rng, 20));
  const DenseTensor c = multilinear_naive(m, {b1, b2});
  const DenseMatrix am(3, 4, std::vector<double>(m.vec().begin(), m.vec().end()));
  const DenseMatrix expected = matmul(matmul(b1, am), transposed(b2));
  CHECK(approx_equal(c.vec(), expected.data(), kTol));

  CHECK_THROWS_WITH_AS(multilinear_naive(m, {b1, b1}), doctest::Contains("mode 2"),
                       ArgumentError);
}

TEST_CASE("mode products commute for disjoint updates") {
  Rng rng(69);
  const Shape n({3, 2, 4});
  const DenseTensor a = testing::random_tensor(rng, n);
  const DenseMatrix b1(2, 3, testing::random_data(rng, 6));
  const DenseMatrix b3(3, 4, testing::random_data(rng, 12));

  const DenseTensor first = multilinear_mode_products(a, {b1, identity_matrix(2), b3});
  // apply mode 3 before mode 1 by chaining two single-mode products
  const DenseTensor three_only =
      multilinear_mode_products(a, {identity_matrix(3), identity_matrix(2), b3});
  const DenseTensor then_one =
      multilinear_mode_products(three_only, {b1, identity_matrix(2), identity_matrix(3)});
  CHECK(approx_equal(first, then_one, kTol));
  CHECK(approx_equal(first, multilinear_naive(a, {b1, identity_matrix(2), b3}), kTol));
}

TEST_CASE("all multilinear routes agree on random instances") {
  Rng rng(70);
  for (int t = 0; t < 40; ++t) {
    const Index d = rng.uniform(1, 4);
    std::vector<Index> ndims;
    std::vector<Index> qdims;
    for (Index k = 0; k < d; ++k) {
      ndims.push_back(rng.uniform(1, 4));
      qdims.push_back(rng.uniform(1, 4));
    }
    const Shape n(ndims);
    const DenseTensor a = testing::random_tensor(rng, n);

    std::vector<DenseMatrix> bs;
    std::vector<BlockedMatrix> blocked;
    std::vector<std::vector<Index>> aparts;
    for (Index k = 0; k < d; ++k) {
      DenseMatrix b(qdims[static_cast<std::size_t>(k)], ndims[static_cast<std::size_t>(k)],
                    testing::random_data(
                        rng, qdims[static_cast<std::size_t>(k)] * ndims[static_cast<std::size_t>(k)]));
      std::vector<Index> cols = testing::random_partition(rng, b.cols());
      std::vector<Index> rows = testing::random_partition(rng, b.rows());
      aparts.push_back(cols);
      bs.push_back(b);
      blocked.emplace_back(std::move(b), std::move(rows), std::move(cols));
    }
    const Blocking ablock(n, aparts);

    const DenseTensor naive = multilinear_naive(a, bs);
    CHECK(approx_equal(naive, multilinear_kron(a, bs), kTol));
    CHECK(approx_equal(naive, multilinear_mode_products(a, bs), kTol));
    const DenseTensor via_blocked = multilinear_blocked(a, blocked, ablock);
    CHECK(approx_equal(naive, via_blocked, kTol));
    CHECK(approx_equal(naive, multilinear_blocked_seq(a, blocked, ablock), kTol));

    // the result inherits the row blockings
    const Blocking result = multilinear_result_blocking(blocked);
    CHECK(result.shape() == naive.shape());
    for (Index k = 1; k <= d; ++k) {
      CHECK(result.part(k) == blocked[static_cast<std::size_t>(k - 1)].row_parts);
    }
  }
}

TEST_CASE("blocked multilinear validation names the offending mode") {
  Rng rng(71);
  const Shape n({4, 4});
  const DenseTensor a = testing::random_tensor(rng, n);
  const Blocking ablock(n, {{2, 2}, {2, 2}});
  std::vector<BlockedMatrix> bs;
  bs.emplace_back(DenseMatrix(4, 4, testing::random_data(rng, 16)), std::vector<Index>{2, 2},
                  std::vector<Index>{2, 2});
  bs.emplace_back(DenseMatrix(4, 4, testing::random_data(rng, 16)), std::vector<Index>{2, 2},
                  std::vector<Index>{1, 3});
  CHECK_THROWS_WITH_AS(multilinear_blocked(a, bs, ablock), doctest::Contains("mode-2"),
                       ArgumentError);
}

TEST_CASE("trivial blockings reduce the blocked multilinear product to the kron route") {
  Rng rng(72);
  const Shape n({3, 4});
  const DenseTensor a = testing::random_tensor(rng, n);
  std::vector<BlockedMatrix> bs;
  std::vector<DenseMatrix> plain;
  for (Index k = 1; k <= 2; ++k) {
    DenseMatrix b(3, n.dim(k), testing::random_data(rng, 3 * n.dim(k)));
    plain.push_back(b);
    bs.emplace_back(std::move(b), std::vector<Index>{3}, std::vector<Index>{n.dim(k)});
  }
  const DenseTensor lhs = multilinear_blocked(a, bs, Blocking::trivial(n));
  const DenseTensor rhs = multilinear_kron(a, plain);
  CHECK(approx_equal(lhs, rhs, kTol));
}
