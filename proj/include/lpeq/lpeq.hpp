#ifndef LPEQ_LPEQ_HPP
#define LPEQ_LPEQ_HPP

#include "lpeq/builtin_problems.hpp"
#include "lpeq/combinatorics.hpp"
#include "lpeq/equivalence.hpp"
#include "lpeq/errors.hpp"
#include "lpeq/linalg.hpp"
#include "lpeq/solvers.hpp"
#include "lpeq/spectral.hpp"
#include "lpeq/verify.hpp"

#endif  // LPEQ_LPEQ_HPP
