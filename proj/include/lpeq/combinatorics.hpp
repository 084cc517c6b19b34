#ifndef LPEQ_COMBINATORICS_HPP
#define LPEQ_COMBINATORICS_HPP

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

#include "lpeq/errors.hpp"
#include "lpeq/linalg.hpp"

namespace lpeq {

/// Default cap on the number of supports any single enumeration may visit.
inline constexpr std::uint64_t kEnumerationGuard = 1'000'000;

/// binom(n, k), saturating at uint64 max.
inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t out = 1;
  for (int i = 1; i <= k; ++i) {
    const std::uint64_t num = static_cast<std::uint64_t>(n - k + i);
    if (out > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    out = out * num / static_cast<std::uint64_t>(i);
  }
  return out;
}

inline void require_enumerable(int m, int k, std::uint64_t guard, const char* what) {
  const std::uint64_t count = binomial(m, k);
  if (count > guard) {
    fail(ErrorKind::SizeGuard, std::string(what) + ": binom(" + std::to_string(m) + ", " +
                                   std::to_string(k) + ") = " + std::to_string(count) +
                                   " supports exceeds the enumeration guard of " +
                                   std::to_string(guard) + "; skip or raise the guard");
  }
}

/// Visit every k-subset of {0..m-1} in lexicographic order. The visitor
/// returns false to stop early; the function returns false if it stopped.
template <typename Visitor>
bool for_each_subset(int m, int k, Visitor&& visit) {
  if (k < 0 || k > m) return true;
  IndexSet s(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) s[static_cast<size_t>(i)] = i;
  while (true) {
    if (!visit(static_cast<const IndexSet&>(s))) return false;
    int i = k - 1;
    while (i >= 0 && s[static_cast<size_t>(i)] == m - k + i) --i;
    if (i < 0) return true;
    ++s[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) s[static_cast<size_t>(j)] = s[static_cast<size_t>(j - 1)] + 1;
  }
}

}  // namespace lpeq

#endif  // LPEQ_COMBINATORICS_HPP
