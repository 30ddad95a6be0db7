#pragma once

#include "core.hpp"

namespace p2s1 {

struct OracleResult {
  Time optimal = 0;
  Permutation best;            // lexicographically smallest optimal sequence
  std::uint64_t optima = 0;    // number of permutations decoding to optimal
  std::uint64_t examined = 0;  // always n!
};

// Exhaustive enumeration of all n! sequences through the decoder, in
// lexicographic order.  Optimal over list schedules; refuses to start when
// n exceeds the limit rather than run for hours.
inline OracleResult brute_force(const Instance& instance, int limit = 10) {
  const int n = instance.size();
  if (n > limit)
    throw InvalidInput("brute_force: n=" + std::to_string(n) +
                       " exceeds the enumeration limit " +
                       std::to_string(limit));
  Permutation perm = identity_permutation(n);
  ScheduleBuilder builder;
  OracleResult result;
  result.optimal = std::numeric_limits<Time>::max();
  do {
    const Time c = decode_makespan(instance, perm, builder);
    ++result.examined;
    if (c < result.optimal) {
      result.optimal = c;
      result.best = perm;
      result.optima = 1;
    } else if (c == result.optimal) {
      ++result.optima;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return result;
}

}  // namespace p2s1
