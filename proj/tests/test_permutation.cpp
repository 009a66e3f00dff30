#include "doctest.h"

#include "btl/permutation.hpp"
#include "oracles.hpp"

using namespace btl;
using testing::Rng;
using testing::oracle_kron_mat;
using testing::oracle_kron_vec;
using testing::random_perm;
using testing::same_values;

TEST_CASE("perfect shuffle vector and action") {
  const PermutationVector w = perfect_shuffle(2, 3);
  CHECK(w.entries() == std::vector<Index>{1, 4, 2, 5, 3, 6});
  const std::vector<double> x{10, 20, 30, 40, 50, 60};
  CHECK(same_values(permute(w, x), std::vector<double>{10, 40, 20, 50, 30, 60}));

  CHECK(perfect_shuffle(1, 5).is_identity());
  CHECK(perfect_shuffle(5, 1).is_identity());
}

TEST_CASE("apply checks lengths and round-trips through the inverse") {
  const PermutationVector p = perfect_shuffle(3, 4);
  CHECK_THROWS_AS(permute(p, std::vector<double>{1, 2, 3}), ShapeError);

  Rng rng(21);
  const std::vector<double> x = testing::random_data(rng, 12);
  CHECK(same_values(permute(PermutationVector::identity(12), x), x));
  CHECK(same_values(permute(p, permute(invert(p), x)), x));
  CHECK(same_values(permute(invert(p), permute(p, x)), x));
}

TEST_CASE("the transpose of a shuffle is the reversed shuffle") {
  CHECK(invert(perfect_shuffle(2, 3)) == perfect_shuffle(3, 2));
  CHECK(perfect_shuffle(3, 2).entries() == std::vector<Index>{1, 3, 5, 2, 4, 6});
  CHECK(invert(PermutationVector::identity(7)).is_identity());

  Rng rng(22);
  for (int t = 0; t < 20; ++t) {
    const PermutationVector p = random_perm(rng, rng.uniform(1, 32));
    CHECK(invert(invert(p)) == p);
  }
}

TEST_CASE("compose is the matrix product of the represented matrices") {
  Rng rng(23);
  const PermutationVector p = random_perm(rng, 7);
  CHECK(compose(p, PermutationVector::identity(7)) == p);
  CHECK(compose(PermutationVector::identity(7), p) == p);
  CHECK(compose(p, invert(p)).is_identity());
  CHECK_THROWS_AS(compose(p, PermutationVector::identity(6)), ShapeError);

  for (int t = 0; t < 30; ++t) {
    const PermutationVector u = random_perm(rng, 7);
    const PermutationVector v = random_perm(rng, 7);
    CHECK(same_values(to_dense(compose(u, v)).data(),
                      matmul(to_dense(u), to_dense(v)).data()));
  }

  // associativity and the inverse rule, against the dense oracle
  for (int t = 0; t < 20; ++t) {
    const Index n = rng.uniform(1, 8);
    const PermutationVector a = random_perm(rng, n);
    const PermutationVector b = random_perm(rng, n);
    const PermutationVector c = random_perm(rng, n);
    CHECK(compose(compose(a, b), c) == compose(a, compose(b, c)));
    CHECK(invert(compose(a, b)) == compose(invert(b), invert(a)));
  }
}

TEST_CASE("kron of permutation vectors matches the dense kronecker product") {
  CHECK(kron(PermutationVector::identity(2), PermutationVector::identity(3)) ==
        PermutationVector::identity(6));

  const PermutationVector mixed = kron(PermutationVector::identity(2), perfect_shuffle(2, 3));
  CHECK(same_values(to_dense(mixed).data(),
                    oracle_kron_mat(identity_matrix(2), to_dense(perfect_shuffle(2, 3))).data()));

  Rng rng(24);
  for (int t = 0; t < 30; ++t) {
    const PermutationVector u = random_perm(rng, rng.uniform(1, 8));
    const PermutationVector v = random_perm(rng, rng.uniform(1, 8));
    CHECK(same_values(to_dense(kron(u, v)).data(),
                      oracle_kron_mat(to_dense(u), to_dense(v)).data()));
  }

  // (I_s (x) Pi_{r,q}) Pi_{q,rs} = Pi_{q,s} (x) I_r at q=2, r=3, s=2
  const PermutationVector lhs = compose(
      kron(PermutationVector::identity(2), perfect_shuffle(3, 2)), perfect_shuffle(2, 6));
  const PermutationVector rhs = kron(perfect_shuffle(2, 2), PermutationVector::identity(3));
  CHECK(lhs == rhs);
}

TEST_CASE("direct sum acts block-diagonally") {
  CHECK(direct_sum(PermutationVector::identity(2), PermutationVector::identity(3)) ==
        PermutationVector::identity(5));
  CHECK(direct_sum(PermutationVector({2, 1}), PermutationVector({1, 3, 2})).entries() ==
        std::vector<Index>{2, 1, 3, 5, 4});

  Rng rng(25);
  for (int t = 0; t < 30; ++t) {
    const Index n = rng.uniform(1, 6);
    const Index m = rng.uniform(1, 6);
    const PermutationVector u = random_perm(rng, n);
    const PermutationVector v = random_perm(rng, m);
    const DenseMatrix du = to_dense(u);
    const DenseMatrix dv = to_dense(v);
    DenseMatrix expected(n + m, n + m);
    for (Index i = 1; i <= n; ++i) {
      for (Index j = 1; j <= n; ++j) expected.at(i, j) = du.at(i, j);
    }
    for (Index i = 1; i <= m; ++i) {
      for (Index j = 1; j <= m; ++j) expected.at(n + i, n + j) = dv.at(i, j);
    }
    CHECK(same_values(to_dense(direct_sum(u, v)).data(), expected.data()));
  }
}

TEST_CASE("to_dense produces the permutation matrix") {
  CHECK(same_values(to_dense(PermutationVector::identity(3)).data(), identity_matrix(3).data()));
  CHECK(same_values(to_dense(PermutationVector({2, 1})).data(),
                    std::vector<double>{0, 1, 1, 0}));

  Rng rng(26);
  const PermutationVector p = random_perm(rng, 17);
  const DenseMatrix d = to_dense(p);
  for (Index i = 1; i <= 17; ++i) {
    double row = 0;
    double col = 0;
    for (Index j = 1; j <= 17; ++j) {
      row += d.at(i, j);
      col += d.at(j, i);
    }
    CHECK(row == 1.0);
    CHECK(col == 1.0);
  }
}

TEST_CASE("permutation vectors validate their entries") {
  CHECK_THROWS_AS(PermutationVector({}), ArgumentError);
  CHECK_THROWS_AS(PermutationVector({1, 3}), ArgumentError);
  CHECK_THROWS_AS(PermutationVector({2, 2}), ArgumentError);
  CHECK_THROWS_AS(PermutationVector({0, 1}), ArgumentError);
}

TEST_CASE("a shuffle swaps kronecker factors") {
  Rng rng(27);
  for (int t = 0; t < 40; ++t) {
    const Index q = rng.uniform(1, 8);
    const Index r = rng.uniform(1, 8);
    const std::vector<double> f = testing::random_data(rng, q);
    const std::vector<double> g = testing::random_data(rng, r);
    CHECK(same_values(permute(perfect_shuffle(q, r), oracle_kron_vec(f, g)),
                      oracle_kron_vec(g, f)));
  }
}

TEST_CASE("shuffles regroup a kronecker product against a split factor") {
  Rng rng(28);
  for (int t = 0; t < 40; ++t) {
    const Index q = rng.uniform(1, 6);
    const Index r = rng.uniform(1, 8);
    const std::vector<Index> rho = testing::random_partition(rng, r);
    const std::vector<double> f = testing::random_data(rng, q);
    const std::vector<double> g = testing::random_data(rng, r);

    PermutationVector block_diag = perfect_shuffle(rho.front(), q);
    for (std::size_t i = 1; i < rho.size(); ++i) {
      block_diag = direct_sum(block_diag, perfect_shuffle(rho[i], q));
    }
    const PermutationVector p = compose(block_diag, perfect_shuffle(q, r));

    std::vector<double> expected;
    std::size_t start = 0;
    for (Index part : rho) {
      const std::span<const double> gi(g.data() + start, static_cast<std::size_t>(part));
      const std::vector<double> piece = oracle_kron_vec(f, gi);
      expected.insert(expected.end(), piece.begin(), piece.end());
      start += static_cast<std::size_t>(part);
    }
    CHECK(same_values(permute(p, oracle_kron_vec(f, g)), expected));
  }
}
