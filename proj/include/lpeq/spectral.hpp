#ifndef LPEQ_SPECTRAL_HPP
#define LPEQ_SPECTRAL_HPP

// Matrix-level constants: the Gram eigenvalue ratio, spark, and restricted
// frame bounds computed exactly by support enumeration.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "lpeq/combinatorics.hpp"
#include "lpeq/linalg.hpp"

namespace lpeq {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

struct SpectralSummary {
  double lambda_max = 0.0;
  double lambda_min_plus = 0.0;
  double lambda_ratio = 1.0;
  int rank = 0;
  std::optional<int> spark;
  Vector gram_eigenvalues;
};

/// lambda_max(A^T A) / lambda_min+(A^T A).
inline double lambda_ratio(const SensingProblem& problem, const Tolerances& tol = {}) {
  const Vector ev = gram_eigenvalues(problem, tol);
  const int rank = detail::count_positive(ev);
  if (rank == 0) fail(ErrorKind::ModelAssumption, "A has no eigenvalue above the rank threshold");
  return ev(0) / ev(rank - 1);
}

/// Smallest number of linearly dependent columns. Exponential in m, so
/// problems wider than max_m are refused with a size-guard error.
inline int spark(const SensingProblem& problem, const Tolerances& tol = {}, int max_m = 20) {
  const int m = problem.cols();
  if (m > max_m) {
    fail(ErrorKind::SizeGuard, "spark: m = " + std::to_string(m) + " exceeds max_m = " +
                                   std::to_string(max_m) + "; skip spark-based diagnostics");
  }
  const Vector ev = gram_eigenvalues(problem, tol);
  const double lmax = ev(0);
  const int rank = detail::count_positive(ev);
  for (int k = 1; k <= rank; ++k) {
    const bool all_independent = for_each_subset(m, k, [&](const IndexSet& s) {
      return columns_independent(problem.A(), s, lmax, tol);
    });
    if (!all_independent) return k;
  }
  // Any rank + 1 columns are dependent, and rank < m here.
  return rank + 1;
}

struct FrameBounds {
  int s = 0;
  double u_sq = 0.0;  // min eigenvalue of A_S^T A_S over |S| = s
  double w_sq = 0.0;  // max eigenvalue over the same family
  IndexSet u_support;
  IndexSet w_support;
};

/// Exact extremal eigenvalues of A_S^T A_S over all supports of size s.
/// Ties keep the lexicographically first support. u_sq is reported as 0 when
/// it falls under the rank threshold.
inline FrameBounds restricted_frame_bounds(const SensingProblem& problem, int s,
                                           const Tolerances& tol = {},
                                           std::uint64_t guard = kEnumerationGuard) {
  const int m = problem.cols();
  if (s < 1 || s > m) fail(ErrorKind::Parameter, "restricted_frame_bounds: need 1 <= s <= m");
  require_enumerable(m, s, guard, "restricted_frame_bounds");
  const double lmax = gram_eigenvalues(problem, tol)(0);

  FrameBounds out;
  out.s = s;
  out.u_sq = std::numeric_limits<double>::infinity();
  out.w_sq = -1.0;
  for_each_subset(m, s, [&](const IndexSet& support) {
    const Matrix sub = columns(problem.A(), support);
    const SymmetricEigen eig = jacobi_eigen(sub.transpose() * sub, tol);
    const double hi = eig.values(0);
    double lo = eig.values(eig.values.size() - 1);
    if (lo <= tol.rank_rel_tol * lmax) lo = 0.0;
    if (lo < out.u_sq) {
      out.u_sq = lo;
      out.u_support = support;
    }
    if (hi > out.w_sq) {
      out.w_sq = hi;
      out.w_support = support;
    }
    return true;
  });
  return out;
}

inline SpectralSummary spectral_summary(const SensingProblem& problem, const Tolerances& tol = {},
                                        bool with_spark = true, int spark_max_m = 20) {
  SpectralSummary out;
  out.gram_eigenvalues = gram_eigenvalues(problem, tol);
  out.rank = detail::count_positive(out.gram_eigenvalues);
  out.lambda_max = out.gram_eigenvalues(0);
  out.lambda_min_plus = out.gram_eigenvalues(out.rank - 1);
  out.lambda_ratio = out.lambda_max / out.lambda_min_plus;
  if (with_spark && problem.cols() <= spark_max_m) out.spark = spark(problem, tol, spark_max_m);
  return out;
}

struct Lemma3Report {
  int s = 0;
  int trials = 0;
  FrameBounds bounds;  // at level min(2s, m)
  double max_slack = -std::numeric_limits<double>::infinity();
  Vector worst_z1;
  Vector worst_z2;
  bool holds = true;  // max_slack <= 1e-10
};

/// |<A z1, A z2>| - ((w^2 - u^2) / 2) |z1|_2 |z2|_2 for one disjoint pair.
inline double lemma3_slack(const Matrix& a, const FrameBounds& bounds, const Vector& z1,
                           const Vector& z2) {
  const double inner = std::abs((a * z1).dot(a * z2));
  return inner - 0.5 * (bounds.w_sq - bounds.u_sq) * z1.norm() * z2.norm();
}

/// Worst slack of the disjoint-support inner-product bound over seeded random
/// pairs with |supp z_i| <= s; frame bounds come from enumeration at 2s.
inline Lemma3Report lemma3_check(const SensingProblem& problem, int s, int trials,
                                 std::uint64_t seed = kDefaultSeed, const Tolerances& tol = {},
                                 std::uint64_t guard = kEnumerationGuard) {
  const int m = problem.cols();
  if (s < 1 || trials < 1) fail(ErrorKind::Parameter, "lemma3_check: need s >= 1, trials >= 1");
  Lemma3Report out;
  out.s = s;
  out.trials = trials;
  out.bounds = restricted_frame_bounds(problem, std::min(2 * s, m), tol, guard);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<int> perm(static_cast<size_t>(m));
  for (int trial = 0; trial < trials; ++trial) {
    for (int i = 0; i < m; ++i) perm[static_cast<size_t>(i)] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    const int k1 = std::uniform_int_distribution<int>(1, std::min(s, m))(rng);
    const int k2 = std::uniform_int_distribution<int>(1, std::min(s, m - k1))(rng);
    Vector z1 = Vector::Zero(m);
    Vector z2 = Vector::Zero(m);
    for (int i = 0; i < k1; ++i) z1(perm[static_cast<size_t>(i)]) = gauss(rng);
    for (int i = k1; i < k1 + k2; ++i) z2(perm[static_cast<size_t>(i)]) = gauss(rng);
    const double slack = lemma3_slack(problem.A(), out.bounds, z1, z2);
    if (slack > out.max_slack) {
      out.max_slack = slack;
      out.worst_z1 = z1;
      out.worst_z2 = z2;
    }
  }
  out.holds = out.max_slack <= 1e-10;
  return out;
}

}  // namespace lpeq

#endif  // LPEQ_SPECTRAL_HPP
