#ifndef LPEQ_EQUIVALENCE_HPP
#define LPEQ_EQUIVALENCE_HPP

// The computable threshold p*(A, b) below which lp minimization returns the
// unique l0 solution, the constants it is built from, and the null space
// constant / null space property checks used to audit it.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "lpeq/combinatorics.hpp"
#include "lpeq/linalg.hpp"
#include "lpeq/solvers.hpp"
#include "lpeq/spectral.hpp"

namespace lpeq {

namespace detail {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kSqrtHalf = 0.70710678118654752440;

inline void check_lambda_m(int m, double lambda) {
  if (m < 3) fail(ErrorKind::Parameter, "m must be >= 3");
  if (!(lambda >= 1.0) || !std::isfinite(lambda)) fail(ErrorKind::Parameter, "lambda must be >= 1");
}

// ((sqrt2 + 1) / 2) * ((lambda - 1)(m - 3) / 2 + lambda + sqrt(1/2)); > 2 for
// every admissible (m, lambda).
inline double threshold_base(int m, double lambda) {
  return 0.5 * (kSqrt2 + 1.0) * (0.5 * (lambda - 1.0) * (m - 3) + lambda + kSqrtHalf);
}

}  // namespace detail

/// h(x) = ln((x + 1) / x) / ln C(m, lambda). Strictly decreasing in x.
inline double h_of_x(int x, int m, double lambda) {
  if (x < 1) fail(ErrorKind::Parameter, "h_of_x: x must be >= 1");
  detail::check_lambda_m(m, lambda);
  return (std::log(x + 1.0) - std::log(static_cast<double>(x))) /
         std::log(detail::threshold_base(m, lambda));
}

/// Upper bound on the sparsity of a unique l0 solution: floor((m - 2.5) / 2) + 1.
inline int t_bound(int m) {
  if (m < 3) fail(ErrorKind::Parameter, "t_bound: m must be >= 3");
  return static_cast<int>(std::floor((m - 2.5) / 2.0)) + 1;
}

/// |support(A^T (A A^T)^{-1} b)|.
inline int s_star(const SensingProblem& problem, const Tolerances& tol = {}) {
  return static_cast<int>(support(min_norm_solution(problem), tol).size());
}

/// f(t, p) = C(m, lambda) (t / (t + 1))^{1/p}; increasing in t, decreasing in p.
inline double f_bound(int t, double p, int m, double lambda) {
  if (t < 1) fail(ErrorKind::Parameter, "f_bound: t must be >= 1");
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::Parameter, "f_bound: p must lie in (0, 1]");
  detail::check_lambda_m(m, lambda);
  return detail::threshold_base(m, lambda) * std::pow(t / (t + 1.0), 1.0 / p);
}

/// Computable stand-in for the null space constant at sparsity t:
/// ((sqrt2+1)/2) (t/(t+1))^{1/p} [(lambda-1)(m-2-t)/(2t) + (lambda + sqrt(1/(t+1))) t^{-1/2}].
inline double h_star(double p, int t, int m, double lambda) {
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::Parameter, "h_star: p must lie in (0, 1]");
  if (t < 1) fail(ErrorKind::Parameter, "h_star: t must be >= 1");
  if (m < t + 2) fail(ErrorKind::Parameter, "h_star: need m >= t + 2");
  detail::check_lambda_m(m, lambda);
  const double td = static_cast<double>(t);
  const double bracket = (lambda - 1.0) * (m - 2 - t) / (2.0 * td) +
                         (lambda + std::sqrt(1.0 / (td + 1.0))) / std::sqrt(td);
  return 0.5 * (detail::kSqrt2 + 1.0) * std::pow(td / (td + 1.0), 1.0 / p) * bracket;
}

// ---------------------------------------------------------------------------
// Null space constant
// ---------------------------------------------------------------------------

struct NscBudget {
  int points_per_slice = 4096;
  int polish_steps = 100;
  std::uint64_t seed = kDefaultSeed;
};

struct NscEstimate {
  double p = 0.0;
  int t = 0;
  double value = 0.0;  // +inf when a kernel vector has at most t nonzeros
  bool exact = false;  // true iff the kernel dimension is <= 1
  int kernel_dim = 0;
  Vector witness_kernel_vector;
  IndexSet witness_support;  // the t indices on the numerator side
};

/// max over |S| <= t of sum_{i in S} w_i / sum_{i not in S} w_i, with
/// w_i = |v_i|^p (indicator of a nonzero for p = 0). The maximizing S is the
/// t largest weights; entries under the zero threshold count as zero.
inline double nsc_ratio(const Vector& v, double p, int t, const Tolerances& tol = {},
                        IndexSet* top = nullptr) {
  const Vector clean = threshold_zeros(v, tol);
  const int m = static_cast<int>(clean.size());
  std::vector<double> w(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const double a = std::abs(clean(i));
    w[static_cast<size_t>(i)] = a == 0.0 ? 0.0 : (p == 0.0 ? 1.0 : std::pow(a, p));
  }
  std::vector<int> order(static_cast<size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return w[static_cast<size_t>(a)] > w[static_cast<size_t>(b)];
  });
  const int k = std::min(t, m);
  double num = 0.0;
  double den = 0.0;
  for (int r = 0; r < m; ++r) {
    (r < k ? num : den) += w[static_cast<size_t>(order[static_cast<size_t>(r)])];
  }
  if (top) {
    top->assign(order.begin(), order.begin() + k);
    std::sort(top->begin(), top->end());
  }
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

namespace detail {

inline double radical_inverse(std::uint64_t i, std::uint64_t base) {
  double inv = 1.0 / static_cast<double>(base);
  double f = inv;
  double out = 0.0;
  while (i > 0) {
    out += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return out;
}

}  // namespace detail

/// NSC estimate from an explicit kernel basis. Exact for d <= 1 (the ratio is
/// scale invariant, so a single direction decides it); for d >= 2 a seeded
/// low-discrepancy sample of the unit sphere in coefficient space followed by
/// a shrinking-step coordinate polish, which yields a lower bound.
inline NscEstimate nsc_estimate(const KernelBasis& kernel, double p, int t,
                                const NscBudget& budget = {}, const Tolerances& tol = {}) {
  const int m = static_cast<int>(kernel.basis.rows());
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::Parameter, "nsc_estimate: p must lie in [0, 1]");
  if (t < 0 || t > m - 1) fail(ErrorKind::Parameter, "nsc_estimate: need 0 <= t <= m - 1");
  const int d = kernel.dim();

  NscEstimate out;
  out.p = p;
  out.t = t;
  out.kernel_dim = d;
  out.exact = d <= 1;
  if (d == 0 || t == 0) {
    out.value = 0.0;
    out.witness_kernel_vector = d == 0 ? Vector::Zero(m) : Vector(kernel.basis.col(0));
    if (d > 0) nsc_ratio(out.witness_kernel_vector, p, t, tol, &out.witness_support);
    return out;
  }

  auto evaluate = [&](const Vector& coeffs, IndexSet* top) {
    return nsc_ratio(kernel.basis * coeffs, p, t, tol, top);
  };

  Vector best_c = Vector::Unit(d, 0);
  double best = evaluate(best_c, nullptr);
  if (d >= 2) {
    auto consider = [&](const Vector& c) {
      const double v = evaluate(c, nullptr);
      if (v > best) {
        best = v;
        best_c = c;
      }
    };
    std::mt19937_64 rng(budget.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double pi = std::acos(-1.0);
    // Great half-circles in every coordinate 2-plane; v and -v give the same ratio.
    for (int i = 0; i < d; ++i) {
      for (int j = i + 1; j < d; ++j) {
        const double shift = unit(rng);
        for (int k = 0; k < budget.points_per_slice; ++k) {
          const double theta = pi * (k + shift) / budget.points_per_slice;
          Vector c = Vector::Zero(d);
          c(i) = std::cos(theta);
          c(j) = std::sin(theta);
          consider(c);
        }
      }
    }
    // Off-plane directions for d >= 3: a Halton sequence with a random
    // Cranley-Patterson shift, pushed through Box-Muller onto the sphere.
    if (d >= 3) {
      static constexpr std::uint64_t kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37,
                                                  41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
      const int dims = 2 * ((d + 1) / 2);
      if (dims > static_cast<int>(std::size(kPrimes))) {
        fail(ErrorKind::SizeGuard, "nsc_estimate: kernel dimension too large for sampling");
      }
      std::vector<double> shift(static_cast<size_t>(dims));
      for (double& s : shift) s = unit(rng);
      for (int k = 1; k <= budget.points_per_slice; ++k) {
        Vector c(d);
        for (int q = 0; q < dims; q += 2) {
          const double u1 = std::fmod(detail::radical_inverse(k, kPrimes[q]) + shift[static_cast<size_t>(q)], 1.0);
          const double u2 = std::fmod(detail::radical_inverse(k, kPrimes[q + 1]) + shift[static_cast<size_t>(q + 1)], 1.0);
          const double r = std::sqrt(-2.0 * std::log(std::max(u1, 1e-300)));
          c(q) = r * std::cos(2.0 * pi * u2);
          if (q + 1 < d) c(q + 1) = r * std::sin(2.0 * pi * u2);
        }
        if (c.norm() > 0.0) consider(c / c.norm());
      }
    }
    double step = 0.1;
    for (int it = 0; it < budget.polish_steps; ++it) {
      bool improved = false;
      for (int k = 0; k < d; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector trial = best_c;
          trial(k) += sign * step;
          trial.normalize();
          const double v = evaluate(trial, nullptr);
          if (v > best) {
            best = v;
            best_c = trial;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
  }
  out.witness_kernel_vector = threshold_zeros(kernel.basis * best_c, tol);
  out.value = nsc_ratio(out.witness_kernel_vector, p, t, tol, &out.witness_support);
  return out;
}

inline NscEstimate nsc_estimate(const SensingProblem& problem, double p, int t,
                                const NscBudget& budget = {}, const Tolerances& tol = {}) {
  return nsc_estimate(kernel_basis(problem, tol), p, t, budget, tol);
}

// ---------------------------------------------------------------------------
// Null space property and corollary diagnostics
// ---------------------------------------------------------------------------

inline constexpr double kNspStrictness = 1e-12;

struct NspResult {
  bool holds = true;
  bool exact = true;  // false: sampled lower bound, violations may be missed
  int t = 0;
  NscEstimate estimate;
};

/// |x_S|_p < |x_{S^c}|_p for every kernel vector and |S| <= |supp x_star|.
inline NspResult nsp_check(const KernelBasis& kernel, const Vector& x_star, double p,
                           const NscBudget& budget = {}, const Tolerances& tol = {}) {
  NspResult out;
  out.t = static_cast<int>(support(x_star, tol).size());
  if (kernel.dim() == 0) {
    out.estimate.p = p;
    out.estimate.t = out.t;
    out.estimate.exact = true;
    out.holds = true;
    return out;
  }
  out.estimate = nsc_estimate(kernel, p, std::min(out.t, static_cast<int>(kernel.basis.rows()) - 1),
                              budget, tol);
  out.exact = out.estimate.exact;
  out.holds = out.estimate.value < 1.0 - kNspStrictness;
  return out;
}

inline NspResult nsp_check(const SensingProblem& problem, const Vector& x_star, double p,
                           const NscBudget& budget = {}, const Tolerances& tol = {}) {
  return nsp_check(kernel_basis(problem, tol), x_star, p, budget, tol);
}

struct Corollary3Diagnostics {
  int t = 0;
  int t_bound = 0;
  std::optional<int> min_kernel_l0;  // = spark(A)
  std::optional<bool> c3a;           // spark >= 2t + 1; empty when spark was skipped
  bool c3b = false;                  // t <= t_bound(m)
  std::string note;
};

inline Corollary3Diagnostics corollary3_diagnostics(const SensingProblem& problem, int t,
                                                    const Tolerances& tol = {},
                                                    int spark_max_m = 20) {
  Corollary3Diagnostics out;
  out.t = t;
  out.t_bound = t_bound(problem.cols());
  out.c3b = t <= out.t_bound;
  try {
    out.min_kernel_l0 = spark(problem, tol, spark_max_m);
    out.c3a = *out.min_kernel_l0 >= 2 * t + 1;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SizeGuard) throw;
    out.note = e.what();
  }
  return out;
}

/// True when the set of grid p with NSC(p, t) < 1 is downward closed.
/// Only meaningful in the exact regime (kernel dimension 1).
inline bool corollary2_monotonicity_probe(const SensingProblem& problem, int t,
                                          std::vector<double> p_grid,
                                          const Tolerances& tol = {}) {
  const KernelBasis kernel = kernel_basis(problem, tol);
  if (kernel.dim() != 1) {
    fail(ErrorKind::NotExact, "corollary2_monotonicity_probe: kernel dimension " +
                                  std::to_string(kernel.dim()) + " != 1, probe skipped");
  }
  std::sort(p_grid.begin(), p_grid.end());
  bool failed_below = false;
  for (double p : p_grid) {
    const bool ok = nsc_estimate(kernel, p, t, {}, tol).value < 1.0 - kNspStrictness;
    if (ok && failed_below) return false;
    if (!ok) failed_below = true;
  }
  return true;
}

// ---------------------------------------------------------------------------
// p*(A, b)
// ---------------------------------------------------------------------------

struct Lemma1Diagnostic {
  int level = 0;  // min(2t, m)
  FrameBounds bounds;
  double lambda_min_plus = 0.0;
  bool u_positive = false;
  bool u_sq_at_least_lambda_min_plus = false;
};

struct EquivalenceReport {
  double lambda = 0.0;
  int m = 0;
  int s_star = 0;
  int t_bound = 0;
  double h_s_star = 0.0;
  double h_t_bound = 0.0;
  double p_star = 0.0;
  double p_star_unclamped = 0.0;
  bool clamped = false;

  // Filled in by the diagnostics pass; empty when a size guard skipped them.
  std::optional<int> t_actual;
  std::optional<bool> l0_unique;
  std::optional<Vector> x_star;
  std::optional<Corollary3Diagnostics> corollary3;
  std::optional<bool> corollary3a_holds;
  std::optional<bool> corollary3b_holds;
  std::optional<NspResult> nsp_at_p0;
  std::optional<bool> nsp_order_t_holds_at_p0;
  std::optional<Lemma1Diagnostic> lemma1;
  std::optional<bool> lemma1_u_positive;
  std::vector<std::string> notes;
};

struct PStarOptions {
  bool diagnostics = true;
  int spark_max_m = 20;
  std::uint64_t guard = kEnumerationGuard;
  NscBudget nsc;
};

/// p*(A, b) = max{h(S*), h(t_bound(m))}, plus the diagnostics that audit the
/// hypotheses behind it. Guards only ever degrade the diagnostics.
inline EquivalenceReport p_star(const SensingProblem& problem, const Tolerances& tol = {},
                                const PStarOptions& opts = {}) {
  EquivalenceReport r;
  r.m = problem.cols();
  r.lambda = lambda_ratio(problem, tol);
  r.s_star = s_star(problem, tol);
  r.t_bound = t_bound(r.m);
  r.h_s_star = h_of_x(r.s_star, r.m, r.lambda);
  r.h_t_bound = h_of_x(r.t_bound, r.m, r.lambda);
  r.p_star_unclamped = std::max(r.h_s_star, r.h_t_bound);
  // h is decreasing, so the max is attained at the smaller argument.
  if (r.p_star_unclamped != h_of_x(std::min(r.s_star, r.t_bound), r.m, r.lambda)) {
    fail(ErrorKind::Numerical, "p_star: max{h(S*), h(t_bound)} disagrees with h(min)");
  }
  r.p_star = std::min(r.p_star_unclamped, 1.0);
  r.clamped = r.p_star_unclamped > 1.0;
  if (r.clamped) r.notes.push_back("p* formula exceeded 1 and was clamped");
  if (!opts.diagnostics) return r;

  try {
    const SparseSolution l0 = solve_l0(problem, tol, -1, opts.guard);
    r.t_actual = static_cast<int>(l0.support.size());
    r.l0_unique = l0.unique;
    r.x_star = l0.x;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SizeGuard) throw;
    r.notes.push_back(std::string("l0 diagnostics skipped: ") + e.what());
    return r;
  }
  const int t = *r.t_actual;

  r.corollary3 = corollary3_diagnostics(problem, t, tol, opts.spark_max_m);
  r.corollary3a_holds = r.corollary3->c3a;
  r.corollary3b_holds = r.corollary3->c3b;
  if (!r.corollary3->note.empty()) r.notes.push_back(r.corollary3->note);

  r.nsp_at_p0 = nsp_check(problem, *r.x_star, 0.0, opts.nsc, tol);
  r.nsp_order_t_holds_at_p0 = r.nsp_at_p0->holds;
  if (!r.nsp_at_p0->exact) {
    r.notes.push_back("NSP at p = 0 is a sampled lower-bound test (kernel dimension >= 2)");
  }

  try {
    Lemma1Diagnostic l1;
    l1.level = std::min(2 * t, r.m);
    l1.bounds = restricted_frame_bounds(problem, l1.level, tol, opts.guard);
    const Vector ev = gram_eigenvalues(problem, tol);
    l1.lambda_min_plus = ev(detail::count_positive(ev) - 1);
    l1.u_positive = l1.bounds.u_sq > 0.0;
    l1.u_sq_at_least_lambda_min_plus = l1.bounds.u_sq >= l1.lambda_min_plus;
    r.lemma1_u_positive = l1.u_positive;
    r.lemma1 = l1;
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SizeGuard) throw;
    r.notes.push_back(std::string("frame-bound diagnostics skipped: ") + e.what());
  }
  return r;
}

}  // namespace lpeq

#endif  // LPEQ_EQUIVALENCE_HPP
