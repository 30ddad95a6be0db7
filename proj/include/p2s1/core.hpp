#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace p2s1 {

using Time = std::int64_t;

// Thrown for malformed user input (files, permutations, parameters).
// The CLI maps it to exit code 2.
struct InvalidInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when the surrounding environment fails (unreadable file, missing
// solver executable).  The CLI maps it to exit code 3.
struct EnvironmentError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One job on the two-machine, one-server shop.  The server loads the job
// onto a machine (load), the machine processes it alone (proc), then the
// server takes it off again (unload).  The three phases run back to back
// with no waiting allowed between them.
struct Job {
  Time load = 0;
  Time proc = 0;
  Time unload = 0;

  Time length() const { return load + proc + unload; }
  bool operator==(const Job&) const = default;
};

struct Instance {
  std::vector<Job> jobs;

  int size() const { return static_cast<int>(jobs.size()); }

  // Sum of all job lengths; doubles as the scheduling horizon and big-M.
  Time total_length() const {
    Time sum = 0;
    for (const Job& job : jobs) sum += job.length();
    return sum;
  }
};

// A job sequence; jobs are dispatched to machines in this order.
using Permutation = std::vector<int>;

inline Permutation identity_permutation(int n) {
  Permutation p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  return p;
}

inline bool is_permutation_of(const Permutation& perm, int n) {
  if (static_cast<int>(perm.size()) != n) return false;
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int v : perm) {
    if (v < 0 || v >= n || seen[static_cast<std::size_t>(v)]) return false;
    seen[static_cast<std::size_t>(v)] = true;
  }
  return true;
}

// Half-open busy window [begin, end).  Back-to-back windows do not clash.
struct Interval {
  Time begin = 0;
  Time end = 0;

  friend bool operator==(const Interval&, const Interval&) = default;
};

// The single server's occupied windows, kept sorted, disjoint and merged.
class ServerTimeline {
 public:
  void clear() { busy_.clear(); }

  // First busy interval intersecting [begin, end), or nullptr.
  const Interval* first_overlap(Time begin, Time end) const {
    auto it = std::partition_point(
        busy_.begin(), busy_.end(),
        [begin](const Interval& iv) { return iv.end <= begin; });
    if (it != busy_.end() && it->begin < end) return &*it;
    return nullptr;
  }

  bool window_free(Time begin, Time end) const {
    return first_overlap(begin, end) == nullptr;
  }

  // Insert a window the caller has already checked to be free; merges with
  // abutting neighbours so the candidate scan sees maximal busy blocks.
  void occupy(Time begin, Time end) {
    auto it = std::partition_point(
        busy_.begin(), busy_.end(),
        [begin](const Interval& iv) { return iv.end < begin; });
    if (it != busy_.end() && it->end == begin) {        // extend left neighbour
      it->end = end;
      auto next = it + 1;
      if (next != busy_.end() && next->begin == end) {  // bridge to the right
        it->end = next->end;
        busy_.erase(next);
      }
      return;
    }
    if (it != busy_.end() && it->begin == end) {        // extend right neighbour
      it->begin = begin;
      return;
    }
    busy_.insert(it, Interval{begin, end});
  }

  const std::vector<Interval>& intervals() const { return busy_; }

 private:
  std::vector<Interval> busy_;
};

// Smallest start sigma >= machine_free such that the server is free during
// the load window [sigma, sigma+load) and the unload window
// [sigma+load+proc, sigma+length).  A blocked load window can only clear
// where a busy block ends; a blocked unload window where a busy block end
// minus load+proc lands.  Both jumps strictly increase sigma, so the scan
// ends after at most two probes per busy block and returns the true minimum.
inline Time earliest_feasible_start(Time machine_free, const Job& job,
                                    const ServerTimeline& server) {
  Time sigma = machine_free;
  for (;;) {
    if (const Interval* hit = server.first_overlap(sigma, sigma + job.load)) {
      sigma = hit->end;
      continue;
    }
    const Time unload_begin = sigma + job.load + job.proc;
    if (const Interval* hit =
            server.first_overlap(unload_begin, unload_begin + job.unload)) {
      sigma = hit->end - job.load - job.proc;
      continue;
    }
    return sigma;
  }
}

// Incremental greedy placement used by the decoder, the constructive
// heuristic and every neighbourhood evaluation.  Search loops keep one
// builder around and reset() it instead of reallocating.
class ScheduleBuilder {
 public:
  struct Placement {
    Time start = 0;
    int machine = 0;
  };

  void reset() {
    server_.clear();
    machine_free_ = {0, 0};
    makespan_ = 0;
  }

  // Where the job would go if appended now; the earlier machine wins,
  // ties go to machine 0.
  Placement trial(const Job& job) const {
    const Time s0 = earliest_feasible_start(machine_free_[0], job, server_);
    const Time s1 = earliest_feasible_start(machine_free_[1], job, server_);
    if (s1 < s0) return {s1, 1};
    return {s0, 0};
  }

  Time completion_if_appended(const Job& job) const {
    return trial(job).start + job.length();
  }

  Placement append(const Job& job) {
    const Placement at = trial(job);
    const Time load_end = at.start + job.load;
    const Time unload_begin = load_end + job.proc;
    server_.occupy(at.start, load_end);
    server_.occupy(unload_begin, unload_begin + job.unload);
    machine_free_[static_cast<std::size_t>(at.machine)] =
        at.start + job.length();
    makespan_ = std::max(makespan_, at.start + job.length());
    return at;
  }

  Time makespan() const { return makespan_; }
  const ServerTimeline& server() const { return server_; }

 private:
  ServerTimeline server_;
  std::array<Time, 2> machine_free_{0, 0};
  Time makespan_ = 0;
};

struct Schedule {
  std::vector<Time> start;
  std::vector<int> machine;
  std::vector<Time> completion;
  std::vector<Interval> server_busy;  // merged union of all server windows
  Time makespan = 0;
};

// List-scheduling decoder: jobs take their earliest feasible start in
// permutation order.  Deterministic; the only degrees of freedom are the
// tie-break rules fixed in ScheduleBuilder::trial.
inline Schedule decode(const Instance& instance, const Permutation& perm) {
  if (!is_permutation_of(perm, instance.size()))
    throw InvalidInput("decode: sequence is not a permutation of 0.." +
                       std::to_string(instance.size() - 1));
  ScheduleBuilder builder;
  Schedule out;
  const auto n = static_cast<std::size_t>(instance.size());
  out.start.resize(n);
  out.machine.resize(n);
  out.completion.resize(n);
  for (int j : perm) {
    const Job& job = instance.jobs[static_cast<std::size_t>(j)];
    const auto at = builder.append(job);
    out.start[static_cast<std::size_t>(j)] = at.start;
    out.machine[static_cast<std::size_t>(j)] = at.machine;
    out.completion[static_cast<std::size_t>(j)] = at.start + job.length();
  }
  out.server_busy = builder.server().intervals();
  out.makespan = builder.makespan();
  return out;
}

// Hot path for search loops: no validation, no per-job bookkeeping.
// The caller guarantees perm is a valid permutation of the instance.
inline Time decode_makespan(const Instance& instance, const Permutation& perm,
                            ScheduleBuilder& builder) {
  builder.reset();
  for (int j : perm) builder.append(instance.jobs[static_cast<std::size_t>(j)]);
  return builder.makespan();
}

// Rebuild the derived schedule fields from bare starts and machine
// assignments (e.g. after reading a schedule file).  Performs no feasibility
// checking; run validate() on the result for that.
inline Schedule schedule_from_starts(const Instance& instance,
                                     std::vector<Time> start,
                                     std::vector<int> machine) {
  if (start.size() != instance.jobs.size() ||
      machine.size() != instance.jobs.size())
    throw InvalidInput("schedule_from_starts: size mismatch with instance");
  Schedule out;
  out.start = std::move(start);
  out.machine = std::move(machine);
  out.completion.resize(instance.jobs.size());
  std::vector<Interval> windows;
  for (std::size_t j = 0; j < instance.jobs.size(); ++j) {
    const Job& job = instance.jobs[j];
    out.completion[j] = out.start[j] + job.length();
    out.makespan = std::max(out.makespan, out.completion[j]);
    windows.push_back({out.start[j], out.start[j] + job.load});
    windows.push_back({out.start[j] + job.load + job.proc, out.completion[j]});
  }
  std::sort(windows.begin(), windows.end(),
            [](const Interval& a, const Interval& b) {
              return a.begin < b.begin || (a.begin == b.begin && a.end < b.end);
            });
  for (const Interval& w : windows) {
    if (!out.server_busy.empty() && w.begin <= out.server_busy.back().end)
      out.server_busy.back().end = std::max(out.server_busy.back().end, w.end);
    else
      out.server_busy.push_back(w);
  }
  return out;
}

struct Violation {
  std::string rule;  // "size", "machine", "start", "completion",
                     // "machine-overlap", "server-overlap", "makespan"
  int job_a = -1;
  int job_b = -1;
  std::string detail;
};

// Full feasibility audit of a schedule against its instance.  Returns one
// entry per violated rule instance; empty means feasible and consistent.
inline std::vector<Violation> validate(const Instance& instance,
                                       const Schedule& schedule) {
  std::vector<Violation> out;
  const int n = instance.size();
  if (static_cast<int>(schedule.start.size()) != n ||
      static_cast<int>(schedule.machine.size()) != n ||
      static_cast<int>(schedule.completion.size()) != n) {
    out.push_back({"size", -1, -1, "schedule arrays do not match n"});
    return out;
  }
  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const Job& job = instance.jobs[uj];
    if (schedule.machine[uj] != 0 && schedule.machine[uj] != 1)
      out.push_back({"machine", j, -1,
                     "machine " + std::to_string(schedule.machine[uj])});
    if (schedule.start[uj] < 0)
      out.push_back({"start", j, -1,
                     "negative start " + std::to_string(schedule.start[uj])});
    if (schedule.completion[uj] != schedule.start[uj] + job.length() ||
        schedule.completion[uj] < job.length())
      out.push_back({"completion", j, -1,
                     "completion " + std::to_string(schedule.completion[uj]) +
                         " does not equal start + length"});
  }

  // Machines: one job at a time.
  for (int m = 0; m < 2; ++m) {
    std::vector<int> on;
    for (int j = 0; j < n; ++j)
      if (schedule.machine[static_cast<std::size_t>(j)] == m) on.push_back(j);
    std::sort(on.begin(), on.end(), [&](int a, int b) {
      return schedule.start[static_cast<std::size_t>(a)] <
             schedule.start[static_cast<std::size_t>(b)];
    });
    for (std::size_t i = 1; i < on.size(); ++i) {
      const int prev = on[i - 1], cur = on[i];
      if (schedule.start[static_cast<std::size_t>(cur)] <
          schedule.completion[static_cast<std::size_t>(prev)])
        out.push_back({"machine-overlap", prev, cur,
                       "machine " + std::to_string(m)});
    }
  }

  // Server: every load and unload window, pairwise disjoint.
  struct Window {
    Time begin, end;
    int job;
  };
  std::vector<Window> windows;
  for (int j = 0; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const Job& job = instance.jobs[uj];
    const Time s = schedule.start[uj];
    windows.push_back({s, s + job.load, j});
    windows.push_back({s + job.load + job.proc, s + job.length(), j});
  }
  std::sort(windows.begin(), windows.end(), [](const Window& a, const Window& b) {
    return a.begin < b.begin || (a.begin == b.begin && a.end < b.end);
  });
  for (std::size_t i = 1; i < windows.size(); ++i) {
    if (windows[i].begin < windows[i - 1].end)
      out.push_back({"server-overlap", windows[i - 1].job, windows[i].job,
                     "[" + std::to_string(windows[i].begin) + "," +
                         std::to_string(windows[i].end) + ") overlaps"});
  }

  Time cmax = 0;
  for (Time c : schedule.completion) cmax = std::max(cmax, c);
  if (schedule.makespan != cmax)
    out.push_back({"makespan", -1, -1,
                   "stored " + std::to_string(schedule.makespan) +
                       ", max completion " + std::to_string(cmax)});
  return out;
}

// ---------------------------------------------------------------------------
// Text formats.
//
// Instance file: first line n, then one "load proc unload" line per job.
// Schedule file: first line n, then one "start machine" line per job, in
// job-id order.  Both round-trip byte-exactly through write/parse.
// ---------------------------------------------------------------------------

inline std::string write_instance(const Instance& instance) {
  std::ostringstream out;
  out << instance.size() << '\n';
  for (const Job& job : instance.jobs)
    out << job.load << ' ' << job.proc << ' ' << job.unload << '\n';
  return out.str();
}

inline Instance parse_instance(std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n < 0)
    throw InvalidInput("instance: expected a nonnegative job count on line 1");
  Instance instance;
  instance.jobs.reserve(static_cast<std::size_t>(n));
  for (long long j = 0; j < n; ++j) {
    Job job;
    if (!(in >> job.load >> job.proc >> job.unload))
      throw InvalidInput("instance: expected 'load proc unload' on line " +
                         std::to_string(j + 2));
    if (job.load < 1 || job.proc < 1 || job.unload < 1)
      throw InvalidInput("instance: durations must be >= 1 on line " +
                         std::to_string(j + 2));
    instance.jobs.push_back(job);
  }
  std::string rest;
  while (in >> rest)
    throw InvalidInput("instance: trailing content after " +
                       std::to_string(n) + " jobs");
  return instance;
}

inline Instance parse_instance(const std::string& text) {
  std::istringstream in(text);
  return parse_instance(in);
}

inline Instance read_instance_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnvironmentError("cannot open instance file: " + path);
  return parse_instance(in);
}

inline void write_instance_file(const std::string& path,
                                const Instance& instance) {
  std::ofstream out(path);
  if (!out) throw EnvironmentError("cannot write instance file: " + path);
  out << write_instance(instance);
  if (!out) throw EnvironmentError("write failed: " + path);
}

inline std::string write_schedule(const Schedule& schedule) {
  std::ostringstream out;
  out << schedule.start.size() << '\n';
  for (std::size_t j = 0; j < schedule.start.size(); ++j)
    out << schedule.start[j] << ' ' << schedule.machine[j] << '\n';
  return out.str();
}

inline Schedule parse_schedule(const Instance& instance, std::istream& in) {
  long long n = 0;
  if (!(in >> n) || n != instance.size())
    throw InvalidInput("schedule: job count does not match the instance");
  std::vector<Time> start(static_cast<std::size_t>(n));
  std::vector<int> machine(static_cast<std::size_t>(n));
  for (long long j = 0; j < n; ++j) {
    if (!(in >> start[static_cast<std::size_t>(j)] >>
          machine[static_cast<std::size_t>(j)]))
      throw InvalidInput("schedule: expected 'start machine' on line " +
                         std::to_string(j + 2));
  }
  return schedule_from_starts(instance, std::move(start), std::move(machine));
}

inline Schedule read_schedule_file(const Instance& instance,
                                   const std::string& path) {
  std::ifstream in(path);
  if (!in) throw EnvironmentError("cannot open schedule file: " + path);
  return parse_schedule(instance, in);
}

}  // namespace p2s1
