#pragma once

#include <optional>
#include <string>

#include "core.hpp"

namespace p2s1 {

// Exact value counted in halves.  The workload bound averages an integer
// total over two machines, so it can end in .5; storing twice the value
// keeps comparisons against integer makespans exact.
struct HalfIntegral {
  std::int64_t twice = 0;

  static HalfIntegral from_int(Time v) { return {2 * v}; }
  static HalfIntegral halves(std::int64_t t) { return {t}; }

  double value() const { return static_cast<double>(twice) / 2.0; }
  Time ceil() const { return (twice + 1) / 2; }  // twice is never negative here
  bool is_integral() const { return twice % 2 == 0; }

  std::string str() const {
    std::string s = std::to_string(twice / 2);
    if (!is_integral()) s += ".5";
    return s;
  }

  friend bool operator==(HalfIntegral, HalfIntegral) = default;
  friend auto operator<=>(HalfIntegral a, HalfIntegral b) {
    return a.twice <=> b.twice;
  }
};

inline bool operator<=(HalfIntegral a, Time b) { return a.twice <= 2 * b; }
inline bool operator<=(Time a, HalfIntegral b) { return 2 * a <= b.twice; }

// Average machine workload, plus the first load and last unload the idle
// machine must wait for: (min load + sum of lengths + min unload) / 2.
inline HalfIntegral workload_bound(const Instance& instance) {
  if (instance.jobs.empty()) return {0};
  Time min_load = std::numeric_limits<Time>::max();
  Time min_unload = std::numeric_limits<Time>::max();
  for (const Job& job : instance.jobs) {
    min_load = std::min(min_load, job.load);
    min_unload = std::min(min_unload, job.unload);
  }
  return {min_load + instance.total_length() + min_unload};
}

// The server performs every load and unload itself, one at a time.
inline Time server_bound(const Instance& instance) {
  Time sum = 0;
  for (const Job& job : instance.jobs) sum += job.load + job.unload;
  return sum;
}

// Best available lower bound: max of the two above.
inline HalfIntegral lb_t(const Instance& instance) {
  return std::max(workload_bound(instance),
                  HalfIntegral::from_int(server_bound(instance)));
}

struct LowerBounds {
  HalfIntegral workload;
  Time server = 0;
  HalfIntegral best;
};

inline LowerBounds lower_bounds(const Instance& instance) {
  return {workload_bound(instance), server_bound(instance), lb_t(instance)};
}

// Per-machine idle time inside the makespan window: makespan minus the
// total length assigned to that machine.  Their sum always equals
// 2*makespan - sum of lengths, whatever the assignment.
struct IdleTimes {
  std::array<Time, 2> machine{0, 0};
  Time total = 0;
};

inline IdleTimes idle_times(const Instance& instance,
                            const Schedule& schedule) {
  if (!validate(instance, schedule).empty())
    throw InvalidInput("idle_times: schedule is infeasible for the instance");
  IdleTimes out;
  std::array<Time, 2> assigned{0, 0};
  for (std::size_t j = 0; j < instance.jobs.size(); ++j)
    assigned[static_cast<std::size_t>(schedule.machine[j])] +=
        instance.jobs[j].length();
  out.machine = {schedule.makespan - assigned[0], schedule.makespan - assigned[1]};
  out.total = out.machine[0] + out.machine[1];
  return out;
}

// Instance families whose optimum is known in closed form.  For each kind,
// every permutation decodes to the optimal makespan.
enum class PolyCaseKind {
  UniformDurations,     // load = proc = unload = c for every job, n even
  DominantLoads,        // every proc shorter than every load
  IncreasingDurations,  // every load <= every proc, every proc < every unload
};

struct PolynomialCase {
  PolyCaseKind kind;
  Time optimal_makespan = 0;
};

inline const char* to_string(PolyCaseKind kind) {
  switch (kind) {
    case PolyCaseKind::UniformDurations: return "uniform-durations";
    case PolyCaseKind::DominantLoads: return "dominant-loads";
    case PolyCaseKind::IncreasingDurations: return "increasing-durations";
  }
  return "?";
}

// Checks the three families in a fixed order.
//
// UniformDurations requires an even job count: with all phases equal to c,
// a zero-idle server would tile [0, 2nc) with load slots paired to unload
// slots two positions later, which only matches up when n is even.  For odd
// n the true optimum is (2n+1)c, not the 2nc closed form, so the recognizer
// stays silent there (a unit test documents the n = 3 counterexample).
inline std::optional<PolynomialCase> recognize_polynomial_case(
    const Instance& instance) {
  if (instance.jobs.empty()) return std::nullopt;
  Time min_load = std::numeric_limits<Time>::max(), max_load = 0;
  Time min_proc = std::numeric_limits<Time>::max(), max_proc = 0;
  Time min_unload = std::numeric_limits<Time>::max(), max_unload = 0;
  for (const Job& job : instance.jobs) {
    min_load = std::min(min_load, job.load);
    max_load = std::max(max_load, job.load);
    min_proc = std::min(min_proc, job.proc);
    max_proc = std::max(max_proc, job.proc);
    min_unload = std::min(min_unload, job.unload);
    max_unload = std::max(max_unload, job.unload);
  }
  const Time c = min_load;
  const bool all_equal = max_load == c && min_proc == c && max_proc == c &&
                         min_unload == c && max_unload == c;
  if (all_equal && instance.size() % 2 == 0)
    return PolynomialCase{PolyCaseKind::UniformDurations,
                          server_bound(instance)};
  if (max_proc < min_load)
    return PolynomialCase{PolyCaseKind::DominantLoads,
                          instance.total_length()};
  if (max_load <= min_proc && max_proc < min_unload)
    return PolynomialCase{PolyCaseKind::IncreasingDurations,
                          instance.total_length()};
  return std::nullopt;
}

}  // namespace p2s1
