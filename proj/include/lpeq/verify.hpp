#ifndef LPEQ_VERIFY_HPP
#define LPEQ_VERIFY_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "lpeq/equivalence.hpp"
#include "lpeq/solvers.hpp"

namespace lpeq {

/// count log-spaced values from p_star / 100 up to p_star inclusive.
inline std::vector<double> default_p_grid(double p_star, int count = 8) {
  if (!(p_star > 0.0) || count < 1) fail(ErrorKind::Parameter, "default_p_grid: need p* > 0, count >= 1");
  std::vector<double> out;
  for (int k = 0; k < count; ++k) {
    const double frac = count == 1 ? 1.0 : static_cast<double>(k) / (count - 1);
    out.push_back(p_star * std::pow(100.0, frac - 1.0));
  }
  out.back() = p_star;
  return out;
}

struct VerifyEntry {
  double p = 0.0;
  bool guaranteed = false;  // p <= p*
  SparseSolution exact;
  bool matches_l0 = false;  // unique and equal to x* within solver_eq_tol
  std::optional<double> grid_distance;  // max-abs gap between grid and exact argmin
  bool grid_agrees = false;
};

struct VerifyReport {
  EquivalenceReport equivalence;
  SparseSolution l0;
  std::vector<VerifyEntry> entries;
  bool all_guaranteed_pass = true;  // every p <= p* matched the l0 solution
  std::vector<double> failures;     // p values (any) where the lp argmin differs from x*
};

/// Checks that solve_lp_exact returns the unique l0 solution at each p, and
/// cross-checks against the grid oracle when the kernel dimension allows.
inline VerifyReport equivalence_verify(const SensingProblem& problem, std::vector<double> p_grid = {},
                                       const Tolerances& tol = {},
                                       const PStarOptions& opts = {}) {
  VerifyReport out;
  out.l0 = solve_l0(problem, tol, -1, opts.guard);
  if (!out.l0.unique.value_or(false)) {
    fail(ErrorKind::NonUnique, "equivalence_verify: the l0 solution is not unique");
  }
  out.equivalence = p_star(problem, tol, opts);
  if (p_grid.empty()) p_grid = default_p_grid(out.equivalence.p_star);
  const int d = kernel_basis(problem, tol).dim();

  for (double p : p_grid) {
    VerifyEntry e;
    e.p = p;
    e.guaranteed = p <= out.equivalence.p_star;
    e.exact = solve_lp_exact(problem, p, tol, opts.guard);
    e.matches_l0 = e.exact.unique.value_or(false) &&
                   detail::same_solution(e.exact.x, out.l0.x, tol);
    if (d <= 3) {
      const GridSolution grid = solve_lp_grid(problem, p, {}, tol);
      e.grid_distance = (grid.solution.x - e.exact.x).cwiseAbs().maxCoeff();
      e.grid_agrees = *e.grid_distance <= tol.solver_eq_tol;
    }
    if (!e.matches_l0) {
      out.failures.push_back(p);
      if (e.guaranteed) out.all_guaranteed_pass = false;
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

}  // namespace lpeq

#endif  // LPEQ_VERIFY_HPP
