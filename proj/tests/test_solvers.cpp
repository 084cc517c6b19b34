#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "lpeq/builtin_problems.hpp"
#include "lpeq/solvers.hpp"
#include "oracles.hpp"

namespace lpeq {
namespace {

Vector Vec(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// For an n x (n+1) system the solution set is a line x0 + s v. On each
// interval between the zero crossings of its entries, sum |x_i|^p is concave
// (p <= 1), so the minimum sits on a crossing. Kernel vector by cofactors,
// particular solution by LU on the leading square block.
struct LineOracle {
  Vector x0;
  Vector v;
  std::vector<Vector> crossings;
};

LineOracle line_oracle(const Matrix& a, const Vector& b) {
  const int n = static_cast<int>(a.rows());
  LineOracle o;
  o.v.resize(n + 1);
  for (int j = 0; j <= n; ++j) {
    Matrix minor(n, n);
    int c = 0;
    for (int k = 0; k <= n; ++k) {
      if (k != j) minor.col(c++) = a.col(k);
    }
    o.v(j) = ((j % 2) ? -1.0 : 1.0) * minor.determinant();
  }
  o.x0 = Vector::Zero(n + 1);
  o.x0.head(n) = a.leftCols(n).fullPivLu().solve(b);
  for (int i = 0; i <= n; ++i) {
    if (std::abs(o.v(i)) < 1e-12) continue;
    Vector x = o.x0 - (o.x0(i) / o.v(i)) * o.v;
    x(i) = 0.0;
    for (int k = 0; k <= n; ++k) {
      if (std::abs(x(k)) < 1e-11) x(k) = 0.0;
    }
    o.crossings.push_back(x);
  }
  return o;
}

TEST(SolveL0, Examples) {
  const SparseSolution s1 = solve_l0(builtin_problem(1));
  EXPECT_EQ(s1.support, (IndexSet{0, 1}));
  EXPECT_LT((s1.x - Vec({0.6, 0.7, 0, 0})).norm(), 1e-12);
  EXPECT_EQ(s1.unique, std::optional<bool>(true));
  EXPECT_EQ(s1.objective, 2.0);

  const SparseSolution s2 = solve_l0(builtin_problem(2));
  EXPECT_EQ(s2.support, (IndexSet{0, 1}));
  EXPECT_LT((s2.x - Vec({1, 0.5, 0, 0, 0})).norm(), 1e-12);
  EXPECT_EQ(s2.unique, std::optional<bool>(true));
}

TEST(SolveL0, SingleColumnRhs) {
  const SensingProblem base = builtin_problem(1);
  const SensingProblem prob = SensingProblem::make(base.A(), base.A().col(3));
  const SparseSolution s = solve_l0(prob);
  EXPECT_EQ(s.support, (IndexSet{3}));
  EXPECT_LT((s.x - Vector::Unit(4, 3)).norm(), 1e-12);
  EXPECT_EQ(s.unique, std::optional<bool>(true));
}

TEST(SolveL0, DetectsNonUniqueness) {
  Matrix a(2, 3);
  a << 1, 1, 0,
       0, 0, 1;
  const SensingProblem prob = SensingProblem::make(a, Vec({1, 0}));
  const SparseSolution s = solve_l0(prob);
  EXPECT_EQ(s.objective, 1.0);
  EXPECT_EQ(s.unique, std::optional<bool>(false));
  EXPECT_EQ(s.competitors.size(), 1u);

  const SparseSolution l1 = solve_lp_exact(prob, 1.0);
  EXPECT_EQ(l1.unique, std::optional<bool>(false));
  EXPECT_EQ(l1.support, (IndexSet{0}));  // lexicographic tie-break
}

TEST(SolveL0, GuardAndMaxSupport) {
  try {
    solve_l0(builtin_problem(2), {}, -1, 3);
    FAIL() << "guard not enforced";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeGuard);
  }
  try {
    solve_l0(builtin_problem(2), {}, 1);
    FAIL() << "size-1 support reported";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Infeasible);
  }
}

TEST(SolveLpExact, FigureValuesRecoverL0Solution) {
  for (int id : {1, 2}) {
    const SensingProblem prob = builtin_problem(id);
    const Vector x_star = solve_l0(prob).x;
    for (double p : builtin_figure_p_values(id)) {
      const SparseSolution s = solve_lp_exact(prob, p);
      EXPECT_LT((s.x - x_star).norm(), 1e-9) << "example " << id << " p=" << p;
      EXPECT_NEAR(s.objective, oracle::lp_power(x_star, p), 1e-12);
      EXPECT_EQ(s.unique, std::optional<bool>(true));
    }
  }
}

TEST(SolveLpExact, Example2AtOneIsNotTheSparsest) {
  const SparseSolution s = solve_lp_exact(builtin_problem(2), 1.0);
  EXPECT_EQ(s.support.size(), 3u);
  EXPECT_LT(s.objective, 1.5);
}

TEST(SolveLpExact, MatchesLineOracleOnRandomEnsemble) {
  std::mt19937_64 rng(0x5EED);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 2;
    const Matrix a = oracle::random_matrix(rng, n, n + 1);
    const Vector b = oracle::random_matrix(rng, n, 1).col(0);
    const SensingProblem prob = SensingProblem::make(a, b);
    const LineOracle o = line_oracle(a, b);
    for (double p : {0.3, 0.7, 1.0}) {
      double best = INFINITY;
      for (const Vector& x : o.crossings) best = std::min(best, oracle::lp_power(x, p));
      const SparseSolution s = solve_lp_exact(prob, p);
      EXPECT_NEAR(s.objective, best, 1e-9 * (1 + best)) << "trial " << trial << " p=" << p;
      EXPECT_LT((a * s.x - b).norm(), 1e-9);
      ++checked;
    }
    int sparsest = n + 1;
    for (const Vector& x : o.crossings) {
      int nz = 0;
      for (Eigen::Index i = 0; i < x.size(); ++i) nz += x(i) != 0.0;
      sparsest = std::min(sparsest, nz);
    }
    EXPECT_EQ(static_cast<int>(solve_l0(prob).support.size()), sparsest);
  }
  EXPECT_EQ(checked, 150);
}

TEST(SolveLpExact, ObjectiveIsConsistentAndFeasible) {
  for (int id : {1, 2}) {
    const SensingProblem prob = builtin_problem(id);
    for (double p : {0.05, 0.3, 0.6, 1.0}) {
      const SparseSolution s = solve_lp_exact(prob, p);
      EXPECT_NEAR(s.objective, oracle::lp_power(s.x, p), 1e-10);
      EXPECT_LT((prob.A() * s.x - prob.b()).norm(), 1e-9);
      for (const Vector& x : basic_solutions(prob)) {
        EXPECT_GE(lp_objective(x, p), s.objective - 1e-12);
      }
    }
  }
}

TEST(SolveLpExact, SupportSizeShrinksAsPDecreases) {
  for (int id : {1, 2}) {
    const SensingProblem prob = builtin_problem(id);
    size_t prev = SIZE_MAX;
    for (double p : {1.0, 0.8, 0.6, 0.4, 0.2, 0.1, 0.05, 0.01}) {
      const size_t k = solve_lp_exact(prob, p).support.size();
      EXPECT_LE(k, prev) << "example " << id << " p=" << p;
      prev = k;
    }
  }
}

TEST(SolveLpExact, ArgminIsScaleInvariant) {
  for (int id : {1, 2}) {
    const SensingProblem prob = builtin_problem(id);
    for (double p : {0.1, 0.5, 1.0}) {
      const Vector x = solve_lp_exact(prob, p).x;
      for (double alpha : {-2.0, 0.25, 0.5, 3.0, 9.0}) {
        EXPECT_LT((solve_lp_exact(prob.scaled(alpha), p).x - x).cwiseAbs().maxCoeff(), Tolerances{}.solver_eq_tol);
      }
    }
  }
}

TEST(SolveLpExact, ParameterErrors) {
  EXPECT_THROW(solve_lp_exact(builtin_problem(1), 0.0), Error);
  EXPECT_THROW(solve_lp_exact(builtin_problem(1), 1.01), Error);
}

TEST(SolveLpGrid, AgreesWithExact) {
  const std::vector<std::pair<int, double>> cases = {{1, 0.15}, {1, 0.2290}, {1, 1.0},
                                                     {2, 0.05}, {2, 0.1248}, {2, 1.0}};
  for (const auto& [id, p] : cases) {
    const SensingProblem prob = builtin_problem(id);
    const GridSolution g = solve_lp_grid(prob, p);
    const SparseSolution e = solve_lp_exact(prob, p);
    EXPECT_LT((g.solution.x - e.x).norm(), 1e-6) << "example " << id << " p=" << p;
    EXPECT_LT((prob.A() * g.solution.x - prob.b()).norm(), 1e-9);
    EXPECT_GT(g.points_per_dim, 1);
  }
}

TEST(SolveLpGrid, AgreesWithExactOnRandomEnsemble) {
  std::mt19937_64 rng(0x5EED);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 2;
    const int m = n + 1 + trial % 3;
    const SensingProblem prob =
        SensingProblem::make(oracle::random_matrix(rng, n, m), oracle::random_matrix(rng, n, 1).col(0));
    for (double p : {0.3, 1.0}) {
      const SparseSolution e = solve_lp_exact(prob, p);
      if (!e.unique.value_or(false)) continue;
      const GridSolution g = solve_lp_grid(prob, p);
      EXPECT_NEAR(g.solution.objective, e.objective, 1e-8 * (1 + e.objective))
          << "trial " << trial << " p=" << p;
    }
  }
}

TEST(SolveLpGrid, KernelDimensionGuard) {
  Matrix a(2, 6);
  a << 1, 0, 1, 2, 3, 4,
       0, 1, 1, -1, 2, 5;
  try {
    solve_lp_grid(SensingProblem::make(a, Vec({1, 1})), 0.5);
    FAIL() << "d = 4 accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeGuard);
  }
}

TEST(LpCurve, Example1) {
  const SensingProblem prob = builtin_problem(1);
  const auto at0 = lp_curve(prob, 0.1, {{0.0, 0.0, 1}});
  ASSERT_EQ(at0.size(), 1u);
  EXPECT_NEAR(at0[0].objective, std::pow(0.6, 0.1) + std::pow(0.7, 0.1), 1e-14);
  EXPECT_NEAR(at0[0].objective, 1.9146, 1e-3);

  for (double p : builtin_figure_p_values(1)) {
    const auto pts = lp_curve(prob, p, {{-2.0, 2.0, 4001}});
    ASSERT_EQ(pts.size(), 4001u);
    EXPECT_DOUBLE_EQ(pts.front().params(0), -2.0);
    EXPECT_DOUBLE_EQ(pts.back().params(0), 2.0);
    EXPECT_NEAR(pts[curve_argmin(pts)].params(0), 0.0, 1e-12) << "p=" << p;
  }
}

TEST(LpCurve, Example2) {
  const SensingProblem prob = builtin_problem(2);
  for (double p : builtin_figure_p_values(2)) {
    const auto pts = lp_curve(prob, p, {{-1.0, 1.0, 201}, {-1.0, 1.0, 201}});
    ASSERT_EQ(pts.size(), 201u * 201u);
    // Row-major: the second coordinate moves fastest.
    EXPECT_DOUBLE_EQ(pts[1].params(0), -1.0);
    EXPECT_DOUBLE_EQ(pts[1].params(1), -0.99);
    const Vector best = pts[curve_argmin(pts)].params;
    EXPECT_LT(best.norm(), 1e-12) << "p=" << p;
  }
}

TEST(LpCurve, MatchesDirectEvaluation) {
  const SensingProblem prob = builtin_problem(2);
  const Parametrization& par = *prob.parametrization();
  for (const CurvePoint& pt : lp_curve(prob, 0.3, {{-0.5, 0.7, 7}, {0.1, 0.9, 5}})) {
    const Vector x = par.origin + par.directions * pt.params;
    EXPECT_LT((prob.A() * x - prob.b()).norm(), 1e-12);
    EXPECT_NEAR(pt.objective, oracle::lp_power(x, 0.3), 1e-13);
  }
}

TEST(LpCurve, Guards) {
  const SensingProblem prob = builtin_problem(1);
  EXPECT_THROW(lp_curve(prob, 0.5, {{-1, 1, 3}, {-1, 1, 3}}), Error);
  EXPECT_THROW(lp_curve(prob, 0.5, {{-1, 1, 0}}), Error);
  try {
    lp_curve(builtin_problem(2), 0.5, {{-1, 1, 400}, {-1, 1, 400}});
    FAIL() << "point budget not enforced";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SizeGuard);
  }
}

}  // namespace
}  // namespace lpeq
