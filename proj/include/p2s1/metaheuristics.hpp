#pragma once

#include <chrono>
#include <optional>

#include "core.hpp"
#include "neighborhoods.hpp"
#include "rng.hpp"

namespace p2s1 {

struct SearchConfig {
  // Wall-clock budget, checked between descent calls (never inside one).
  double time_limit_s = 10.0;
  // Deterministic alternative: stop after this many rounds (one round = one
  // shake+descent, or one construct+descent).  When set, the wall clock is
  // ignored for stopping, and seeded runs replay bit-exactly.
  std::optional<std::uint64_t> max_rounds;
  int k_max = 15;
  // Fixed RCL width for the greedy randomized construction; empty redraws
  // uniformly from [0,1) every construction.
  std::optional<double> alpha;
  std::uint64_t seed = 1;
  enum class Initial { ImprovedIdentity, Random };
  Initial initial = Initial::ImprovedIdentity;
  // Stop as soon as the incumbent reaches this value (a known optimum or a
  // rounded-up lower bound); the run is then provably done early.
  std::optional<Time> target;
};

struct TracePoint {
  double seconds = 0;
  std::uint64_t round = 0;
  Time makespan = 0;
};

struct SearchResult {
  Permutation best;
  Time makespan = 0;
  double time_to_best_s = 0;
  std::uint64_t round_to_best = 0;  // 0 means the initial solution
  std::uint64_t rounds = 0;
  std::vector<TracePoint> trace;  // one point per strict improvement
};

// k cumulative random block reversals.  Consumes exactly 2k draws.
inline Permutation shake(Permutation perm, int k, Rng& rng) {
  const int n = static_cast<int>(perm.size());
  if (n < 2) return perm;
  for (int r = 0; r < k; ++r) {
    int a = static_cast<int>(rng.uniform_int(0, n - 1));
    int b = static_cast<int>(rng.uniform_int(0, n - 2));
    if (b >= a) ++b;  // uniform over distinct pairs
    if (a > b) std::swap(a, b);
    std::reverse(perm.begin() + a, perm.begin() + b + 1);
  }
  return perm;
}

// Greedy randomized construction.  Each step scores every unscheduled job
// by the completion time it would get appended to the partial schedule,
// keeps those within alpha of the best score, and picks one uniformly.
// alpha = 0 is pure greedy (ties drawn at random), alpha = 1 keeps all.
inline Permutation grc(const Instance& instance, double alpha, Rng& rng) {
  const int n = instance.size();
  ScheduleBuilder builder;
  builder.reset();
  std::vector<int> remaining = identity_permutation(n);
  std::vector<Time> score(static_cast<std::size_t>(n));
  std::vector<int> rcl;
  Permutation out;
  out.reserve(static_cast<std::size_t>(n));
  while (!remaining.empty()) {
    Time lo = std::numeric_limits<Time>::max();
    Time hi = std::numeric_limits<Time>::min();
    for (std::size_t i = 0; i < remaining.size(); ++i) {
      score[i] = builder.completion_if_appended(
          instance.jobs[static_cast<std::size_t>(remaining[i])]);
      lo = std::min(lo, score[i]);
      hi = std::max(hi, score[i]);
    }
    const double cut =
        static_cast<double>(lo) +
        alpha * static_cast<double>(hi - lo);
    rcl.clear();
    for (std::size_t i = 0; i < remaining.size(); ++i)
      if (static_cast<double>(score[i]) <= cut)
        rcl.push_back(static_cast<int>(i));
    const int pick =
        rcl[static_cast<std::size_t>(rng.uniform_int(
            0, static_cast<std::int64_t>(rcl.size()) - 1))];
    const int job = remaining[static_cast<std::size_t>(pick)];
    builder.append(instance.jobs[static_cast<std::size_t>(job)]);
    out.push_back(job);
    remaining.erase(remaining.begin() + pick);
  }
  return out;
}

namespace detail {

class SearchClock {
 public:
  explicit SearchClock(const SearchConfig& config)
      : start_(std::chrono::steady_clock::now()),
        limit_s_(config.time_limit_s),
        max_rounds_(config.max_rounds) {}

  double elapsed_s() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

  bool exhausted(std::uint64_t rounds_done) const {
    if (max_rounds_) return rounds_done >= *max_rounds_;
    return elapsed_s() >= limit_s_;
  }

 private:
  std::chrono::steady_clock::time_point start_;
  double limit_s_;
  std::optional<std::uint64_t> max_rounds_;
};

inline void record_best(SearchResult& result, const Permutation& perm,
                        Time makespan, const SearchClock& clock,
                        std::uint64_t round) {
  result.best = perm;
  result.makespan = makespan;
  result.time_to_best_s = clock.elapsed_s();
  result.round_to_best = round;
  result.trace.push_back({result.time_to_best_s, round, makespan});
}

inline bool hit_target(const SearchConfig& config, Time makespan) {
  return config.target && makespan <= *config.target;
}

}  // namespace detail

// General variable neighbourhood search.  The initial solution is either
// the relocation descent applied to the identity sequence or a uniformly
// random sequence; afterwards, rounds of shake(k) + descent run with k
// cycling 1..k_max (reset to 1 on every strict improvement) until the
// budget runs out or the target is reached.
inline SearchResult gvns(const Instance& instance, const SearchConfig& config) {
  const detail::SearchClock clock(config);
  Rng rng(config.seed);
  const int n = instance.size();

  Permutation current = identity_permutation(n);
  if (config.initial == SearchConfig::Initial::Random)
    rng.shuffle(current);
  else
    current = iterative_improvement(instance, current, rng);

  ScheduleBuilder builder;
  Time best = decode_makespan(instance, current, builder);
  SearchResult result;
  detail::record_best(result, current, best, clock, 0);
  if (n < 2 || detail::hit_target(config, best)) return result;

  std::uint64_t rounds = 0;
  bool stop = false;
  while (!stop && !clock.exhausted(rounds)) {
    int k = 1;
    while (k <= config.k_max) {
      if (clock.exhausted(rounds)) break;
      ++rounds;
      Permutation candidate = shake(current, k, rng);
      Time c = decode_makespan(instance, candidate, builder);
      vnd_inplace(instance, candidate, c, builder);
      if (c < best) {
        current = std::move(candidate);
        best = c;
        detail::record_best(result, current, best, clock, rounds);
        k = 1;
        if (detail::hit_target(config, best)) {
          stop = true;
          break;
        }
      } else {
        ++k;
      }
    }
  }
  result.rounds = rounds;
  return result;
}

// Greedy randomized construction + descent, keeping the best of all
// rounds.  At least one round always runs, whatever the budget.
inline SearchResult grasp(const Instance& instance,
                          const SearchConfig& config) {
  const detail::SearchClock clock(config);
  Rng rng(config.seed);
  ScheduleBuilder builder;
  SearchResult result;
  std::uint64_t rounds = 0;
  do {
    ++rounds;
    const double alpha = config.alpha ? *config.alpha : rng.uniform01();
    Permutation candidate = grc(instance, alpha, rng);
    Time c = decode_makespan(instance, candidate, builder);
    vnd_inplace(instance, candidate, c, builder);
    if (result.trace.empty() || c < result.makespan) {
      detail::record_best(result, candidate, c, clock, rounds);
      if (detail::hit_target(config, c)) break;
    }
  } while (!clock.exhausted(rounds));
  result.rounds = rounds;
  return result;
}

}  // namespace p2s1
