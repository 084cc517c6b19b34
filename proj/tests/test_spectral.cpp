#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lpeq/builtin_problems.hpp"
#include "lpeq/spectral.hpp"
#include "oracles.hpp"

namespace lpeq {
namespace {

TEST(LambdaRatio, Examples) {
  EXPECT_NEAR(lambda_ratio(builtin_problem(1)), 11.2155, 0.01);
  EXPECT_NEAR(lambda_ratio(builtin_problem(2)), 10.7818, 0.02);

  // Cross-check against the closed-form cubic on A A^T.
  for (int id : {1, 2}) {
    const SensingProblem p = builtin_problem(id);
    const auto ev = oracle::symmetric3_eigenvalues(p.A() * p.A().transpose());
    EXPECT_NEAR(lambda_ratio(p), ev[0] / ev[2], 1e-10);
  }

  Matrix a(2, 3);
  const double s = 1.0 / std::sqrt(2.0);
  a << s, s, 0,
       0, 0, 1;
  EXPECT_NEAR(lambda_ratio(SensingProblem::make(a, Vector::Ones(2))), 1.0, 1e-14);
}

TEST(LambdaRatio, ScaleInvariant) {
  for (int id : {1, 2}) {
    const SensingProblem p = builtin_problem(id);
    const double base = lambda_ratio(p);
    for (double alpha : {-3.0, 0.01, 250.0}) {
      EXPECT_NEAR(lambda_ratio(p.scaled(alpha)), base, 1e-10 * base);
    }
  }
}

TEST(Spark, Examples) {
  EXPECT_EQ(spark(builtin_problem(1)), 4);
  EXPECT_EQ(spark(builtin_problem(2)), oracle::spark_by_elimination(builtin_problem(2).A()));
  EXPECT_EQ(spark(builtin_problem(2)), 4);

  Matrix a(3, 4);
  a << 1, 0, 0, 1,
       0, 1, 0, 0,
       0, 0, 1, 0;
  EXPECT_EQ(spark(SensingProblem::make(a, Vector::Ones(3))), 2);
}

TEST(Spark, SizeGuard) {
  const SensingProblem p = SensingProblem::make(Matrix::Identity(2, 3) + Matrix::Ones(2, 3), Vector::Ones(2));
  try {
    spark(p, {}, 2);
    FAIL() << "guard not enforced";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeGuard);
  }
}

TEST(Spark, MatchesEliminationOracleOnRandomProblems) {
  std::mt19937_64 rng(0x5EED);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 2 + trial % 3;
    const int m = n + 1 + trial % 3;
    Matrix a = oracle::random_matrix(rng, n, m);
    // Plant a repeated or combined column half the time.
    if (coin(rng)) a.col(m - 1) = a.col(0);
    if (coin(rng) && m - 2 >= 2) a.col(m - 2) = a.col(0) - 2.0 * a.col(1);
    if (oracle::gauss_rank(a) < n) continue;
    const SensingProblem p = SensingProblem::make(a, Vector::Ones(n));
    const int sp = spark(p);
    EXPECT_EQ(sp, oracle::spark_by_elimination(a)) << "trial " << trial;
    EXPECT_GE(sp, 2);
    EXPECT_LE(sp, n + 1);
  }
}

TEST(Spark, EqualsMinKernelSparsityForOneDimensionalKernels) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = 2 + trial % 3;
    Matrix a = oracle::random_matrix(rng, n, n + 1);
    if (trial % 3 == 0) a.col(n) = a.col(0) + a.col(1);  // kernel vector with zeros
    const SensingProblem p = SensingProblem::make(a, Vector::Ones(n));
    const Vector v = kernel_basis(p).basis.col(0);
    EXPECT_EQ(spark(p), static_cast<int>(support(v).size()));
  }
}

TEST(FrameBounds, Example1) {
  const SensingProblem p = builtin_problem(1);
  const FrameBounds s1 = restricted_frame_bounds(p, 1);
  EXPECT_NEAR(s1.u_sq, 1.74, 1e-12);
  EXPECT_NEAR(s1.w_sq, 6.5, 1e-12);
  EXPECT_EQ(s1.u_support, (IndexSet{2}));
  EXPECT_EQ(s1.w_support, (IndexSet{1}));

  const FrameBounds s2 = restricted_frame_bounds(p, 2);
  EXPECT_NEAR(s2.u_sq, 0.16503665728555916, 1e-10);
  EXPECT_NEAR(s2.w_sq, 7.6134060117684275, 1e-10);

  // Full 4-column Gram has rank 3.
  const FrameBounds s4 = restricted_frame_bounds(p, 4);
  EXPECT_EQ(s4.u_sq, 0.0);
  EXPECT_NEAR(s4.w_sq, 9.788119598153344, 1e-9);
}

TEST(FrameBounds, UnitColumns) {
  Matrix a(2, 3);
  a << 1, 0, 0.6,
       0, 1, 0.8;
  const FrameBounds f = restricted_frame_bounds(SensingProblem::make(a, Vector::Ones(2)), 1);
  EXPECT_NEAR(f.u_sq, 1.0, 1e-14);
  EXPECT_NEAR(f.w_sq, 1.0, 1e-14);
}

TEST(FrameBounds, NestingAndSpectralCap) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const int m = n + 2;
    const SensingProblem p = SensingProblem::make(oracle::random_matrix(rng, n, m), Vector::Ones(n));
    const double lmax = gram_eigenvalues(p)(0);
    FrameBounds prev = restricted_frame_bounds(p, 1);
    for (int s = 2; s <= m; ++s) {
      const FrameBounds cur = restricted_frame_bounds(p, s);
      EXPECT_LE(cur.u_sq, prev.u_sq + 1e-12);
      EXPECT_GE(cur.w_sq, prev.w_sq - 1e-12);
      EXPECT_LE(cur.u_sq, cur.w_sq);
      EXPECT_LE(cur.w_sq, lmax + 1e-10);
      prev = cur;
    }
    EXPECT_EQ(restricted_frame_bounds(p, m).u_sq, 0.0);
  }
}

TEST(FrameBounds, Guards) {
  const SensingProblem p = builtin_problem(2);
  EXPECT_THROW(restricted_frame_bounds(p, 0), Error);
  EXPECT_THROW(restricted_frame_bounds(p, 6), Error);
  try {
    restricted_frame_bounds(p, 2, {}, 5);
    FAIL() << "guard not enforced";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeGuard);
  }
}

TEST(Lemma3, Example2) {
  const Lemma3Report r = lemma3_check(builtin_problem(2), 2, 500);
  EXPECT_TRUE(r.holds);
  EXPECT_LE(r.max_slack, 1e-10);
  EXPECT_EQ(r.bounds.s, 4);
}

TEST(Lemma3, ZeroSecondVectorIsBoundary) {
  const SensingProblem p = builtin_problem(2);
  const FrameBounds f = restricted_frame_bounds(p, 4);
  Vector z1 = Vector::Zero(5);
  z1(0) = 1.0;
  EXPECT_EQ(lemma3_slack(p.A(), f, z1, Vector::Zero(5)), 0.0);
}

TEST(Lemma3, ExactIsometry) {
  // u = w on an isometric block: disjoint supports stay orthogonal and the
  // bound collapses to 0.
  const Matrix a = Matrix::Identity(3, 3);
  FrameBounds f;
  f.u_sq = 1.0;
  f.w_sq = 1.0;
  Vector z1 = Vector::Zero(3);
  Vector z2 = Vector::Zero(3);
  z1(0) = 2.0;
  z2(1) = -3.0;
  EXPECT_EQ(lemma3_slack(a, f, z1, z2), 0.0);
}

TEST(SpectralSummary, Consistent) {
  const SpectralSummary s = spectral_summary(builtin_problem(1));
  EXPECT_EQ(s.rank, 3);
  ASSERT_TRUE(s.spark);
  EXPECT_EQ(*s.spark, 4);
  EXPECT_NEAR(s.lambda_ratio, s.lambda_max / s.lambda_min_plus, 1e-15);
  EXPECT_GE(s.lambda_ratio, 1.0);
}

}  // namespace
}  // namespace lpeq
