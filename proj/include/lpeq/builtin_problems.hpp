#ifndef LPEQ_BUILTIN_PROBLEMS_HPP
#define LPEQ_BUILTIN_PROBLEMS_HPP

// The two worked 3 x 4 and 3 x 5 systems, each with the hand-derived
// parametrization x = x* + sum_k c_k v_k of its solution set.

#include <vector>

#include "lpeq/linalg.hpp"

namespace lpeq {

inline SensingProblem builtin_problem(int id, const Tolerances& tol = {}) {
  if (id == 1) {
    Matrix a(3, 4);
    a << 1, 1.5, 0.7, 0,
         0, 2, 0.5, 1,
         1, 0.5, 1, 1;
    Vector b(3);
    b << 1.65, 1.4, 0.95;
    Parametrization param;
    param.origin = Vector(4);
    param.origin << 0.6, 0.7, 0, 0;
    param.directions = Matrix(4, 1);
    param.directions << 18.0 / 11, 2.0 / 11, -30.0 / 11, 1;
    return SensingProblem::make(a, b, "example-1", tol).with_parametrization(param);
  }
  if (id == 2) {
    Matrix a(3, 5);
    a << 1, 0, 3.5, 3, 2.7,
         0, 2, 0, 1.5, 4.5,
         2, 2, 4, 0.5, 1.5;
    Vector b(3);
    b << 1, 1, 3;
    Parametrization param;
    param.origin = Vector(5);
    param.origin << 1, 0.5, 0, 0, 0;
    param.directions = Matrix(5, 2);
    param.directions << 31.0 / 6, 7.1,
                        -0.75, -2.25,
                        -7.0 / 3, -2.8,
                        1, 0,
                        0, 1;
    return SensingProblem::make(a, b, "example-2", tol).with_parametrization(param);
  }
  fail(ErrorKind::Parameter, "unknown built-in example " + std::to_string(id) + " (expected 1 or 2)");
}

/// The p values at which the figures show the lp minimizer for each example.
inline std::vector<double> builtin_figure_p_values(int id) {
  if (id == 1) return {0.1, 0.15, 0.2, 0.2290};
  if (id == 2) return {0.01, 0.05, 0.1, 0.1248};
  return {};
}

}  // namespace lpeq

#endif  // LPEQ_BUILTIN_PROBLEMS_HPP
