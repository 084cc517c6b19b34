#ifndef LPEQ_LINALG_HPP
#define LPEQ_LINALG_HPP

// Dense linear algebra at desk scale (n, m up to ~30): the sensing problem
// type, a cyclic Jacobi eigensolver, minimum-norm solutions, kernel bases,
// restricted least squares and lp quasi-norms.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "lpeq/errors.hpp"

namespace lpeq {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Sorted, 0-based column indices.
using IndexSet = std::vector<int>;

struct Tolerances {
  double zero_thresh_rel = 1e-8;  // |x_i| <= this * max|x_j| counts as zero
  double eig_tol = 1e-12;         // Jacobi off-diagonal threshold, relative
  double rank_rel_tol = 1e-10;    // eigenvalues <= this * lambda_max are zero
  double solver_eq_tol = 1e-6;    // max-abs distance below which two solutions match
  double residual_tol = 1e-8;     // consistent when residual < this * (1 + |b|_2)

  void validate() const {
    for (double v : {zero_thresh_rel, eig_tol, rank_rel_tol, solver_eq_tol, residual_tol}) {
      if (!(v > 0.0) || !std::isfinite(v)) {
        fail(ErrorKind::Parameter, "tolerances must be strictly positive and finite");
      }
    }
  }
};

/// Affine description of the solution set, x = origin + directions * c.
/// The built-in problems carry a hand-written one so curve axes are stable.
struct Parametrization {
  Vector origin;
  Matrix directions;  // m x d
};

// ---------------------------------------------------------------------------
// Symmetric eigensolver
// ---------------------------------------------------------------------------

struct SymmetricEigen {
  Vector values;   // nonincreasing
  Matrix vectors;  // column k belongs to values(k)
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization. Converges once every off-diagonal magnitude
/// is at most eig_tol times the largest diagonal magnitude; throws a numerical
/// error after max_sweeps full sweeps.
inline SymmetricEigen jacobi_eigen(const Matrix& input, const Tolerances& tol = {},
                                   int max_sweeps = 100) {
  if (input.rows() != input.cols()) {
    fail(ErrorKind::Parameter, "jacobi_eigen: matrix must be square");
  }
  const Eigen::Index n = input.rows();
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);

  auto converged = [&]() {
    const double scale = n > 0 ? a.diagonal().cwiseAbs().maxCoeff() : 0.0;
    double off = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
    }
    return off <= tol.eig_tol * scale || off == 0.0;
  };

  int sweep = 0;
  while (!converged()) {
    if (sweep == max_sweeps) {
      fail(ErrorKind::Numerical, "jacobi_eigen: no convergence after " +
                                     std::to_string(max_sweeps) + " sweeps");
    }
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
    ++sweep;
  }

  std::vector<Eigen::Index> order(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) order[static_cast<size_t>(i)] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index l, Eigen::Index r) { return a(l, l) > a(r, r); });
  SymmetricEigen out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[static_cast<size_t>(k)], order[static_cast<size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<size_t>(k)]);
  }
  out.sweeps = sweep;
  return out;
}

// ---------------------------------------------------------------------------
// SensingProblem
// ---------------------------------------------------------------------------

namespace detail {

// Eigenvalues of A^T A (length m, nonincreasing) obtained from the smaller
// Gram matrix A A^T; entries at or below rank_rel_tol * lambda_max become 0.
inline Vector gram_spectrum(const Matrix& a, const Tolerances& tol) {
  const Eigen::Index n = a.rows();
  const Eigen::Index m = a.cols();
  const Matrix small = n <= m ? Matrix(a * a.transpose()) : Matrix(a.transpose() * a);
  const SymmetricEigen eig = jacobi_eigen(small, tol);
  Vector out = Vector::Zero(m);
  const double lmax = eig.values.size() > 0 ? std::max(eig.values(0), 0.0) : 0.0;
  for (Eigen::Index k = 0; k < eig.values.size() && k < m; ++k) {
    const double lk = eig.values(k);
    out(k) = lk > tol.rank_rel_tol * lmax ? lk : 0.0;
  }
  return out;
}

inline int count_positive(const Vector& spectrum) {
  return static_cast<int>((spectrum.array() > 0.0).count());
}

}  // namespace detail

/// The underdetermined system Ax = b. Construct through make(), which
/// enforces n >= 1, m >= 3, m > n, b != 0 and full row rank.
class SensingProblem {
 public:
  static SensingProblem make(Matrix a, Vector b, std::string name = {},
                             const Tolerances& tol = {}) {
    tol.validate();
    const Eigen::Index n = a.rows();
    const Eigen::Index m = a.cols();
    if (n < 1) fail(ErrorKind::Input, "A must have at least one row");
    if (b.size() != n) {
      std::ostringstream os;
      os << "dimension mismatch: A has " << n << " rows but b has length " << b.size();
      fail(ErrorKind::Input, os.str());
    }
    if (m < 3) fail(ErrorKind::Input, "A must have at least 3 columns (m >= 3)");
    if (m <= n) {
      std::ostringstream os;
      os << "system is not underdetermined: m = " << m << " <= n = " << n;
      fail(ErrorKind::Input, os.str());
    }
    if (!a.allFinite() || !b.allFinite()) fail(ErrorKind::Input, "non-finite entry in A or b");
    if (b.cwiseAbs().maxCoeff() == 0.0) {
      fail(ErrorKind::ModelAssumption, "b = 0: the sparsest solution is trivially x = 0");
    }
    const int rank = detail::count_positive(detail::gram_spectrum(a, tol));
    if (rank < n) {
      std::ostringstream os;
      os << "A is rank-deficient: numerical rank " << rank << " < n = " << n;
      fail(ErrorKind::ModelAssumption, os.str());
    }
    return SensingProblem(std::move(a), std::move(b), std::move(name));
  }

  const Matrix& A() const noexcept { return a_; }
  const Vector& b() const noexcept { return b_; }
  const std::string& name() const noexcept { return name_; }
  int rows() const noexcept { return static_cast<int>(a_.rows()); }
  int cols() const noexcept { return static_cast<int>(a_.cols()); }
  const std::optional<Parametrization>& parametrization() const noexcept { return param_; }

  /// Attach a solution-set parametrization; checks A*origin = b and A*dirs = 0.
  SensingProblem with_parametrization(Parametrization param, double tol = 1e-9) const {
    if (param.origin.size() != a_.cols() || param.directions.rows() != a_.cols()) {
      fail(ErrorKind::Input, "parametrization has the wrong length");
    }
    const double scale = 1.0 + a_.cwiseAbs().maxCoeff();
    if ((a_ * param.origin - b_).cwiseAbs().maxCoeff() > tol * scale * (1.0 + b_.norm())) {
      fail(ErrorKind::Input, "parametrization origin does not solve Ax = b");
    }
    if (param.directions.cols() > 0 &&
        (a_ * param.directions).cwiseAbs().maxCoeff() > tol * scale) {
      fail(ErrorKind::Input, "parametrization direction is not in Ker(A)");
    }
    SensingProblem out = *this;
    out.param_ = std::move(param);
    return out;
  }

  /// (alpha A, alpha b). The parametrization carries over unchanged.
  SensingProblem scaled(double alpha) const {
    if (alpha == 0.0 || !std::isfinite(alpha)) fail(ErrorKind::Parameter, "scale must be nonzero");
    SensingProblem out = *this;
    out.a_ *= alpha;
    out.b_ *= alpha;
    return out;
  }

 private:
  SensingProblem(Matrix a, Vector b, std::string name)
      : a_(std::move(a)), b_(std::move(b)), name_(std::move(name)) {}

  Matrix a_;
  Vector b_;
  std::string name_;
  std::optional<Parametrization> param_;
};

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

inline Matrix columns(const Matrix& a, const IndexSet& s) {
  Matrix out(a.rows(), static_cast<Eigen::Index>(s.size()));
  for (size_t k = 0; k < s.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = a.col(s[k]);
  return out;
}

/// Eigenvalues of A^T A, nonincreasing; exactly rank(A) entries are positive.
inline Vector gram_eigenvalues(const SensingProblem& problem, const Tolerances& tol = {}) {
  return detail::gram_spectrum(problem.A(), tol);
}

inline int numerical_rank(const SensingProblem& problem, const Tolerances& tol = {}) {
  return detail::count_positive(gram_eigenvalues(problem, tol));
}

/// True when the columns of A listed in s are linearly independent, judged on
/// the same eigenvalue scale (rank_rel_tol * lambda_max(A^T A)) as the rank.
inline bool columns_independent(const Matrix& a, const IndexSet& s, double lambda_max,
                                const Tolerances& tol = {}) {
  if (s.empty()) return true;
  const Matrix sub = columns(a, s);
  const SymmetricEigen eig = jacobi_eigen(sub.transpose() * sub, tol);
  return eig.values(eig.values.size() - 1) > tol.rank_rel_tol * lambda_max;
}

/// x = A^T (A A^T)^{-1} b.
inline Vector min_norm_solution(const SensingProblem& problem) {
  const Matrix& a = problem.A();
  const Eigen::LLT<Matrix> llt(a * a.transpose());
  if (llt.info() != Eigen::Success) {
    fail(ErrorKind::ModelAssumption, "A A^T is numerically singular");
  }
  return a.transpose() * llt.solve(problem.b());
}

/// Orthonormal basis of Ker(A), m x d with d = m - rank(A).
struct KernelBasis {
  Matrix basis;
  int dim() const noexcept { return static_cast<int>(basis.cols()); }
};

inline KernelBasis kernel_basis(const SensingProblem& problem, const Tolerances& tol = {}) {
  const int m = problem.cols();
  const int rank = numerical_rank(problem, tol);
  // Column-pivoted QR of A^T: the trailing m - rank columns of the full Q are
  // orthogonal to range(A^T), i.e. they span Ker(A).
  const Eigen::ColPivHouseholderQR<Matrix> qr(problem.A().transpose());
  const Matrix q = qr.householderQ() * Matrix::Identity(m, m);
  return KernelBasis{q.rightCols(m - rank)};
}

/// Indices with |x_i| > zero_thresh_rel * max_j |x_j|.
inline IndexSet support(const Vector& x, const Tolerances& tol = {}) {
  IndexSet out;
  if (x.size() == 0) return out;
  const double peak = x.cwiseAbs().maxCoeff();
  if (peak == 0.0) return out;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (std::abs(x(i)) > tol.zero_thresh_rel * peak) out.push_back(static_cast<int>(i));
  }
  return out;
}

/// Copy of x with entries below the relative zero threshold set to exactly 0.
inline Vector threshold_zeros(const Vector& x, const Tolerances& tol = {}) {
  Vector out = Vector::Zero(x.size());
  for (int i : support(x, tol)) out(i) = x(i);
  return out;
}

/// sum |x_i|^p for p in (0, 1]; the objective minimized by the lp solvers.
inline double lp_objective(const Vector& x, double p) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (x(i) != 0.0) acc += std::pow(std::abs(x(i)), p);
  }
  return acc;
}

/// |x|_p for p in (0, 1], the support size for p = 0, the Euclidean norm for p = 2.
inline double quasi_norm(const Vector& x, double p, const Tolerances& tol = {}) {
  if (p == 0.0) return static_cast<double>(support(x, tol).size());
  if (p == 2.0) return x.norm();
  if (!(p > 0.0 && p <= 1.0)) {
    fail(ErrorKind::Parameter, "quasi_norm: p must lie in [0, 1] or equal 2");
  }
  // Factor out the peak so small p does not over- or underflow.
  const double peak = x.size() > 0 ? x.cwiseAbs().maxCoeff() : 0.0;
  if (peak == 0.0) return 0.0;
  return peak * std::pow(lp_objective(x / peak, p), 1.0 / p);
}

struct RestrictedFit {
  Vector coefficients;  // one per index in S
  double residual = 0.0;
};

/// argmin |A_S z - b|_2; the minimum-norm z when A_S is rank-deficient.
inline RestrictedFit restricted_least_squares(const Matrix& a, const Vector& b, const IndexSet& s) {
  if (s.empty() || s.size() > static_cast<size_t>(a.cols())) {
    fail(ErrorKind::Parameter, "restricted_least_squares: need 1 <= |S| <= m");
  }
  const Matrix sub = columns(a, s);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(sub);
  RestrictedFit fit;
  fit.coefficients = cod.solve(b);
  fit.residual = (sub * fit.coefficients - b).norm();
  return fit;
}

inline RestrictedFit restricted_least_squares(const SensingProblem& problem, const IndexSet& s) {
  return restricted_least_squares(problem.A(), problem.b(), s);
}

/// Embed coefficients on S into a length-m vector.
inline Vector scatter(const IndexSet& s, const Vector& coefficients, int m) {
  Vector x = Vector::Zero(m);
  for (size_t k = 0; k < s.size(); ++k) x(s[k]) = coefficients(static_cast<Eigen::Index>(k));
  return x;
}

inline bool is_consistent(const SensingProblem& problem, double residual, const Tolerances& tol) {
  return residual < tol.residual_tol * (1.0 + problem.b().norm());
}

}  // namespace lpeq

#endif  // LPEQ_LINALG_HPP
