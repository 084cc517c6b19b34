#ifndef LPEQ_SOLVERS_HPP
#define LPEQ_SOLVERS_HPP

// Ground-truth solvers for small systems: exact l0 by support enumeration,
// exact lp by enumeration of basic solutions, and an independent grid-search
// oracle over the kernel parametrization of the solution set.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "lpeq/combinatorics.hpp"
#include "lpeq/linalg.hpp"

namespace lpeq {

struct SparseSolution {
  Vector x;
  IndexSet support;
  double p = 0.0;          // 0 for the l0 problem
  double objective = 0.0;  // |x|_0, or sum |x_i|^p
  std::optional<bool> unique;
  std::vector<Vector> competitors;  // other optimal solutions, empty when unique
};

namespace detail {

inline bool same_solution(const Vector& a, const Vector& b, const Tolerances& tol) {
  return (a - b).cwiseAbs().maxCoeff() <= tol.solver_eq_tol;
}

inline void check_p(double p, const char* who) {
  if (!(p > 0.0 && p <= 1.0)) fail(ErrorKind::Parameter, std::string(who) + ": p must lie in (0, 1]");
}

// Lexicographic order on (support, coefficients).
inline bool lex_less(const IndexSet& sa, const Vector& xa, const IndexSet& sb, const Vector& xb) {
  if (sa != sb) return sa < sb;
  for (Eigen::Index i = 0; i < xa.size(); ++i) {
    if (xa(i) != xb(i)) return xa(i) < xb(i);
  }
  return false;
}

}  // namespace detail

/// min |x|_0 s.t. Ax = b. Supports are visited by increasing size and
/// lexicographically within a size; the whole optimal size is swept so that
/// uniqueness is certified rather than assumed.
inline SparseSolution solve_l0(const SensingProblem& problem, const Tolerances& tol = {},
                               int max_support = -1, std::uint64_t guard = kEnumerationGuard) {
  const int m = problem.cols();
  const Vector ev = gram_eigenvalues(problem, tol);
  const int rank = detail::count_positive(ev);
  const int limit = max_support < 0 ? rank : std::min(max_support, m);
  require_enumerable(m, limit, guard, "solve_l0");

  for (int k = 1; k <= limit; ++k) {
    std::vector<Vector> found;
    bool degenerate = false;
    for_each_subset(m, k, [&](const IndexSet& s) {
      const RestrictedFit fit = restricted_least_squares(problem, s);
      if (!is_consistent(problem, fit.residual, tol)) return true;
      // A consistent support with dependent columns carries a whole affine
      // family of solutions.
      if (!columns_independent(problem.A(), s, ev(0), tol)) degenerate = true;
      const Vector x = scatter(s, fit.coefficients, m);
      const bool seen = std::any_of(found.begin(), found.end(), [&](const Vector& y) {
        return detail::same_solution(x, y, tol);
      });
      if (!seen) found.push_back(x);
      return true;
    });
    if (found.empty()) continue;

    SparseSolution out;
    out.x = found.front();
    out.support = support(out.x, tol);
    out.p = 0.0;
    out.objective = static_cast<double>(out.support.size());
    out.competitors.assign(found.begin() + 1, found.end());
    out.unique = out.competitors.empty() && !degenerate;
    return out;
  }
  fail(ErrorKind::Infeasible,
       "solve_l0: no consistent support of size <= " + std::to_string(limit));
}

/// Every distinct basic solution: consistent supports of size <= rank(A)
/// with linearly independent columns, entries under the zero threshold
/// snapped to 0, duplicates (within solver_eq_tol) dropped.
inline std::vector<Vector> basic_solutions(const SensingProblem& problem, const Tolerances& tol = {},
                                           std::uint64_t guard = kEnumerationGuard) {
  const int m = problem.cols();
  const Vector ev = gram_eigenvalues(problem, tol);
  const int rank = detail::count_positive(ev);
  require_enumerable(m, rank, guard, "basic_solutions");

  std::vector<Vector> out;
  for (int k = 1; k <= rank; ++k) {
    for_each_subset(m, k, [&](const IndexSet& s) {
      if (!columns_independent(problem.A(), s, ev(0), tol)) return true;
      const RestrictedFit fit = restricted_least_squares(problem, s);
      if (!is_consistent(problem, fit.residual, tol)) return true;
      const Vector x = threshold_zeros(scatter(s, fit.coefficients, m), tol);
      const bool seen = std::any_of(out.begin(), out.end(), [&](const Vector& y) {
        return detail::same_solution(x, y, tol);
      });
      if (!seen) out.push_back(x);
      return true;
    });
  }
  return out;
}

/// min sum |x_i|^p s.t. Ax = b, exactly, by evaluating every basic solution.
/// Candidates within solver_eq_tol of the optimum are kept as competitors.
inline SparseSolution solve_lp_exact(const SensingProblem& problem, double p,
                                     const Tolerances& tol = {},
                                     std::uint64_t guard = kEnumerationGuard) {
  detail::check_p(p, "solve_lp_exact");
  const std::vector<Vector> candidates = basic_solutions(problem, tol, guard);
  if (candidates.empty()) fail(ErrorKind::Infeasible, "solve_lp_exact: no basic solution");

  std::vector<double> objective(candidates.size());
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < candidates.size(); ++i) {
    objective[i] = lp_objective(candidates[i], p);
    best = std::min(best, objective[i]);
  }

  // Exact ties (to rounding) go to the lexicographically smallest
  // (support, coefficients) pair.
  const double tie = 1e-12 * (1.0 + best);
  size_t chosen = candidates.size();
  IndexSet chosen_support;
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (objective[i] > best + tie) continue;
    const IndexSet s = support(candidates[i], tol);
    if (chosen == candidates.size() ||
        detail::lex_less(s, candidates[i], chosen_support, candidates[chosen])) {
      chosen = i;
      chosen_support = s;
    }
  }

  SparseSolution out;
  out.x = candidates[chosen];
  out.support = chosen_support;
  out.p = p;
  out.objective = objective[chosen];
  for (size_t i = 0; i < candidates.size(); ++i) {
    if (i != chosen && objective[i] <= best + tol.solver_eq_tol) {
      out.competitors.push_back(candidates[i]);
    }
  }
  out.unique = out.competitors.empty();
  return out;
}

// ---------------------------------------------------------------------------
// Grid-search oracle
// ---------------------------------------------------------------------------

struct GridOptions {
  double range_init = 1.0;
  double step = 0.0;       // lattice spacing; 0 picks a per-dimension default count
  double refine_tol = 1e-8;  // final coordinate-descent step in parameter space
  int polish_candidates = 32;
  std::uint64_t max_points = 20'000'000;
};

struct GridSolution {
  SparseSolution solution;
  Vector params;        // kernel coefficients of the returned point
  double range = 0.0;   // final half-width R of the search box
  int doublings = 0;
  int points_per_dim = 0;
};

namespace detail {

inline int default_grid_count(int d) {
  switch (d) {
    case 1: return 4001;
    case 2: return 401;
    default: return 61;
  }
}

// Visits every point of the lattice {-R + i*h}^d in row-major order.
template <typename Visitor>
void for_each_lattice_point(int d, int count, double range, Visitor&& visit) {
  const double h = count > 1 ? 2.0 * range / (count - 1) : 0.0;
  std::vector<int> idx(static_cast<size_t>(d), 0);
  Vector c(d);
  while (true) {
    for (int k = 0; k < d; ++k) c(k) = -range + h * idx[static_cast<size_t>(k)];
    visit(static_cast<const std::vector<int>&>(idx), static_cast<const Vector&>(c));
    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<size_t>(k)] == count) idx[static_cast<size_t>(k--)] = 0;
    if (k < 0) return;
  }
}

}  // namespace detail

/// Minimizes g(c) = sum |x0 + N c|_i^p over a uniform lattice on [-R, R]^d,
/// where x0 is the minimum-norm solution and N an orthonormal kernel basis.
/// R doubles from range_init until the boundary minimum exceeds g(0). The
/// best lattice local minima are then polished by shrinking-step coordinate
/// descent, and each polished point is snapped onto the nearest vertex of the
/// zero-hyperplane arrangement when that lowers g.
inline GridSolution solve_lp_grid(const SensingProblem& problem, double p,
                                  const GridOptions& opts = {}, const Tolerances& tol = {}) {
  detail::check_p(p, "solve_lp_grid");
  if (!(opts.range_init > 0.0)) fail(ErrorKind::Parameter, "solve_lp_grid: range_init must be > 0");
  const int m = problem.cols();
  const Vector x0 = min_norm_solution(problem);
  const Matrix n = kernel_basis(problem, tol).basis;
  const int d = static_cast<int>(n.cols());
  if (d > 3) {
    fail(ErrorKind::SizeGuard, "solve_lp_grid: kernel dimension " + std::to_string(d) + " > 3");
  }

  auto g = [&](const Vector& c) { return lp_objective(x0 + n * c, p); };
  GridSolution out;
  out.solution.p = p;
  out.solution.unique = std::nullopt;
  if (d == 0) {
    out.solution.x = x0;
    out.solution.support = support(x0, tol);
    out.solution.objective = lp_objective(x0, p);
    out.params = Vector(0);
    return out;
  }

  auto count_for = [&](double range) {
    if (opts.step > 0.0) return static_cast<int>(std::floor(2.0 * range / opts.step)) + 1;
    return detail::default_grid_count(d);
  };
  auto check_budget = [&](int count) {
    if (std::pow(static_cast<double>(count), d) > static_cast<double>(opts.max_points)) {
      fail(ErrorKind::SizeGuard, "solve_lp_grid: lattice exceeds max_points");
    }
  };

  const double g0 = g(Vector::Zero(d));
  double range = opts.range_init;
  int doublings = 0;
  while (true) {
    const int count = count_for(range);
    check_budget(count);
    double shell_min = std::numeric_limits<double>::infinity();
    detail::for_each_lattice_point(d, count, range, [&](const std::vector<int>& idx, const Vector& c) {
      const bool on_shell = std::any_of(idx.begin(), idx.end(), [&](int i) {
        return i == 0 || i == count - 1;
      });
      if (on_shell) shell_min = std::min(shell_min, g(c));
    });
    if (shell_min > g0 || doublings == 60) break;
    range *= 2.0;
    ++doublings;
  }
  const int count = count_for(range);
  const double h = count > 1 ? 2.0 * range / (count - 1) : range;

  // Full lattice evaluation, row-major.
  std::vector<double> values;
  std::vector<Vector> points;
  values.reserve(static_cast<size_t>(std::pow(count, d)));
  detail::for_each_lattice_point(d, count, range, [&](const std::vector<int>&, const Vector& c) {
    values.push_back(g(c));
    points.push_back(c);
  });

  // Lattice local minima (against axis neighbours), best first.
  std::vector<size_t> stride(static_cast<size_t>(d), 1);
  for (int k = d - 2; k >= 0; --k) stride[static_cast<size_t>(k)] = stride[static_cast<size_t>(k + 1)] * static_cast<size_t>(count);
  std::vector<size_t> minima;
  for (size_t flat = 0; flat < values.size(); ++flat) {
    bool is_min = true;
    for (int k = 0; k < d && is_min; ++k) {
      const size_t sk = stride[static_cast<size_t>(k)];
      const size_t coord = (flat / sk) % static_cast<size_t>(count);
      if (coord > 0 && values[flat - sk] < values[flat]) is_min = false;
      if (coord + 1 < static_cast<size_t>(count) && values[flat + sk] < values[flat]) is_min = false;
    }
    if (is_min) minima.push_back(flat);
  }
  std::stable_sort(minima.begin(), minima.end(),
                   [&](size_t a, size_t b) { return values[a] < values[b]; });
  if (minima.size() > static_cast<size_t>(opts.polish_candidates)) {
    minima.resize(static_cast<size_t>(opts.polish_candidates));
  }

  auto polish = [&](Vector c) {
    double value = g(c);
    double step = h;
    while (step >= opts.refine_tol) {
      bool improved = false;
      for (int k = 0; k < d; ++k) {
        for (double sign : {1.0, -1.0}) {
          Vector trial = c;
          trial(k) += sign * step;
          const double tv = g(trial);
          if (tv < value) {
            c = trial;
            value = tv;
            improved = true;
          }
        }
      }
      if (!improved) step *= 0.5;
    }
    return c;
  };

  // Vertex snap: zero the d smallest entries (and nearby choices) exactly by
  // solving for the kernel coefficients, then evaluate with exact zeros.
  auto snap = [&](const Vector& c, Vector& best_x, double& best_value, Vector& best_c) {
    const Vector x = x0 + n * c;
    std::vector<int> order(static_cast<size_t>(m));
    for (int i = 0; i < m; ++i) order[static_cast<size_t>(i)] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return std::abs(x(a)) < std::abs(x(b)); });
    const int pool = std::min(m, d + 2);
    for_each_subset(pool, d, [&](const IndexSet& pick) {
      Matrix nz(d, d);
      Vector rhs(d);
      for (int r = 0; r < d; ++r) {
        const int row = order[static_cast<size_t>(pick[static_cast<size_t>(r)])];
        nz.row(r) = n.row(row);
        rhs(r) = -x0(row);
      }
      const Eigen::FullPivLU<Matrix> lu(nz);
      if (!lu.isInvertible()) return true;
      const Vector cs = lu.solve(rhs);
      Vector xs = x0 + n * cs;
      for (int r = 0; r < d; ++r) xs(order[static_cast<size_t>(pick[static_cast<size_t>(r)])]) = 0.0;
      const double v = lp_objective(xs, p);
      if (v < best_value) {
        best_value = v;
        best_x = xs;
        best_c = cs;
      }
      return true;
    });
  };

  Vector best_x;
  Vector best_c;
  double best_value = std::numeric_limits<double>::infinity();
  for (size_t flat : minima) {
    const Vector c = polish(points[flat]);
    const double v = g(c);
    if (v < best_value) {
      best_value = v;
      best_x = x0 + n * c;
      best_c = c;
    }
    snap(c, best_x, best_value, best_c);
  }

  out.solution.x = best_x;
  out.solution.support = support(best_x, tol);
  out.solution.objective = best_value;
  out.params = best_c;
  out.range = range;
  out.doublings = doublings;
  out.points_per_dim = count;
  return out;
}

// ---------------------------------------------------------------------------
// Objective curves
// ---------------------------------------------------------------------------

struct CurveAxis {
  double min = 0.0;
  double max = 0.0;
  int count = 1;
};

struct CurvePoint {
  Vector params;
  double objective = 0.0;
};

/// The parametrization a curve is drawn in: the problem's own when it has
/// one, otherwise minimum-norm origin plus orthonormal kernel basis.
inline Parametrization curve_parametrization(const SensingProblem& problem,
                                             const Tolerances& tol = {}) {
  if (problem.parametrization()) return *problem.parametrization();
  return Parametrization{min_norm_solution(problem), kernel_basis(problem, tol).basis};
}

/// Samples sum |x(c)|_i^p on a lattice; the first axis varies slowest.
inline std::vector<CurvePoint> lp_curve(const SensingProblem& problem, double p,
                                        const std::vector<CurveAxis>& axes,
                                        const Tolerances& tol = {}) {
  detail::check_p(p, "lp_curve");
  const Parametrization param = curve_parametrization(problem, tol);
  const int d = static_cast<int>(param.directions.cols());
  if (d < 1 || d > 2) {
    fail(ErrorKind::SizeGuard, "lp_curve: kernel dimension " + std::to_string(d) +
                                   " is not 1 or 2");
  }
  if (static_cast<int>(axes.size()) != d) {
    fail(ErrorKind::Parameter, "lp_curve: expected " + std::to_string(d) + " grid axes, got " +
                                   std::to_string(axes.size()));
  }
  std::uint64_t total = 1;
  for (const CurveAxis& ax : axes) {
    if (ax.count < 1 || !std::isfinite(ax.min) || !std::isfinite(ax.max)) {
      fail(ErrorKind::Parameter, "lp_curve: each axis needs finite bounds and count >= 1");
    }
    total *= static_cast<std::uint64_t>(ax.count);
  }
  if (total > 100'000) fail(ErrorKind::SizeGuard, "lp_curve: more than 1e5 lattice points");

  auto coord = [](const CurveAxis& ax, int i) {
    if (ax.count == 1) return ax.min;
    return ax.min + (ax.max - ax.min) * static_cast<double>(i) / (ax.count - 1);
  };
  std::vector<CurvePoint> out;
  out.reserve(static_cast<size_t>(total));
  std::vector<int> idx(static_cast<size_t>(d), 0);
  while (true) {
    Vector c(d);
    for (int k = 0; k < d; ++k) c(k) = coord(axes[static_cast<size_t>(k)], idx[static_cast<size_t>(k)]);
    out.push_back(CurvePoint{c, lp_objective(param.origin + param.directions * c, p)});
    int k = d - 1;
    while (k >= 0 && ++idx[static_cast<size_t>(k)] == axes[static_cast<size_t>(k)].count) {
      idx[static_cast<size_t>(k--)] = 0;
    }
    if (k < 0) break;
  }
  return out;
}

/// Index of the first point attaining the smallest objective.
inline size_t curve_argmin(const std::vector<CurvePoint>& points) {
  size_t best = 0;
  for (size_t i = 1; i < points.size(); ++i) {
    if (points[i].objective < points[best].objective) best = i;
  }
  return best;
}

}  // namespace lpeq

#endif  // LPEQ_SOLVERS_HPP
