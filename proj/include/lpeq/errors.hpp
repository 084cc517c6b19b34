#ifndef LPEQ_ERRORS_HPP
#define LPEQ_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lpeq {

// Every failure the library raises derives from Error and carries a kind,
// which the CLI maps onto its exit-code table.
enum class ErrorKind {
  Parameter,        // argument outside its documented domain
  Input,            // malformed or dimensionally inconsistent input
  ModelAssumption,  // b = 0, rank-deficient A
  Numerical,        // eigensolver did not converge
  Infeasible,       // no consistent support found
  SizeGuard,        // enumeration budget exceeded
  NotExact,         // exact regime required (kernel dimension 1)
  NonUnique,        // l0 solution is not unique where uniqueness is required
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Input: return "input";
    case ErrorKind::ModelAssumption: return "model_assumption";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::Infeasible: return "infeasible";
    case ErrorKind::SizeGuard: return "size_guard";
    case ErrorKind::NotExact: return "not_exact";
    case ErrorKind::NonUnique: return "non_unique";
  }
  return "unknown";
}

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace lpeq

#endif  // LPEQ_ERRORS_HPP
