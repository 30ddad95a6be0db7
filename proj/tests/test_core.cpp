#include <catch2/catch_amalgamated.hpp>

#include "p2s1/core.hpp"
#include "support/oracles.hpp"

using namespace p2s1;
namespace oracle = p2s1::testing;

namespace {

ServerTimeline timeline_of(const std::vector<Interval>& windows) {
  ServerTimeline t;
  for (const Interval& w : windows) t.occupy(w.begin, w.end);
  return t;
}

}  // namespace

TEST_CASE("earliest start with an empty server timeline", "[core]") {
  ServerTimeline empty;
  CHECK(earliest_feasible_start(0, {1, 1, 1}, empty) == 0);
  CHECK(earliest_feasible_start(5, {2, 3, 4}, empty) == 5);
}

TEST_CASE("earliest start jumps over busy blocks", "[core]") {
  // Load fits at 1 but the unload would land inside [3,4); first feasible
  // start is 2 (load [2,3), unload [4,5)).  Frozen from the brute scan.
  const auto t1 = timeline_of({{0, 1}, {3, 4}});
  CHECK(earliest_feasible_start(0, {1, 1, 1}, t1) == 2);
  CHECK(oracle::brute_earliest_start(0, {1, 1, 1}, t1.intervals()) == 2);

  // A long busy block pushes the job entirely past it.
  const auto t2 = timeline_of({{2, 7}});
  CHECK(earliest_feasible_start(0, {1, 1, 1}, t2) == 7);
  CHECK(oracle::brute_earliest_start(0, {1, 1, 1}, t2.intervals()) == 7);
}

TEST_CASE("windows are half-open: abutting is not a clash", "[core]") {
  const auto t = timeline_of({{1, 3}});
  // For job (1,1,1) the load [0,1) only abuts the block, but the unload
  // [2,3) lands inside it, so the job is pushed to 3.
  CHECK(earliest_feasible_start(0, {1, 1, 1}, t) == 3);
  // Job (1,3,2): load [0,1) abuts the block, unload [4,6) clears it.
  CHECK(earliest_feasible_start(0, {1, 3, 2}, t) == 0);
}

TEST_CASE("earliest start matches the brute scan on random timelines",
          "[core][property]") {
  Rng rng(2024);
  for (int round = 0; round < 400; ++round) {
    ServerTimeline t;
    const int blocks = static_cast<int>(rng.uniform_int(0, 8));
    Time cursor = 0;
    for (int b = 0; b < blocks; ++b) {
      const Time begin = cursor + rng.uniform_int(0, 4);
      const Time end = begin + rng.uniform_int(1, 6);
      t.occupy(begin, end);
      cursor = end;
    }
    const Job job{rng.uniform_int(1, 5), rng.uniform_int(1, 5),
                  rng.uniform_int(1, 5)};
    const Time machine_free = rng.uniform_int(0, 10);
    const Time got = earliest_feasible_start(machine_free, job, t);
    const Time want =
        oracle::brute_earliest_start(machine_free, job, t.intervals());
    REQUIRE(got == want);
  }
}

TEST_CASE("server timeline merges abutting occupations", "[core]") {
  ServerTimeline t;
  t.occupy(0, 1);
  t.occupy(2, 3);
  t.occupy(1, 2);
  REQUIRE(t.intervals().size() == 1);
  CHECK(t.intervals().front() == Interval{0, 3});
  CHECK_FALSE(t.window_free(0, 1));
  CHECK(t.window_free(3, 9));
}

TEST_CASE("decode: two unit jobs interleave on both machines", "[core]") {
  const Instance inst{{{1, 1, 1}, {1, 1, 1}}};
  const Schedule s = decode(inst, {0, 1});
  CHECK(s.start == std::vector<Time>{0, 1});
  CHECK(s.machine == std::vector<int>{0, 1});
  CHECK(s.completion == std::vector<Time>{3, 4});
  CHECK(s.makespan == 4);
  // All four server windows fuse into one busy block.
  CHECK(s.server_busy == std::vector<Interval>{{0, 4}});
  CHECK(validate(inst, s).empty());
}

TEST_CASE("decode: a single job runs its three phases back to back",
          "[core]") {
  const Instance inst{{{2, 3, 4}}};
  const Schedule s = decode(inst, {0});
  CHECK(s.start == std::vector<Time>{0});
  CHECK(s.machine == std::vector<int>{0});
  CHECK(s.makespan == 9);
  CHECK(s.server_busy == std::vector<Interval>{{0, 2}, {5, 9}});
}

TEST_CASE("decode: a long unload blocks the second job until the server frees",
          "[core]") {
  const Instance inst{{{1, 1, 5}, {1, 1, 1}}};
  const Schedule s = decode(inst, {0, 1});
  // Starts 1 and 5 are infeasible for job 1 (its unload, then its load,
  // collide with the server busy on [2,7)); 7 is the first feasible start.
  CHECK(s.start[1] == 7);
  CHECK(s.makespan == 10);
  CHECK(validate(inst, s).empty());
}

TEST_CASE("decode rejects non-permutations", "[core]") {
  const Instance inst{{{1, 1, 1}, {1, 1, 1}}};
  CHECK_THROWS_AS(decode(inst, {0}), InvalidInput);
  CHECK_THROWS_AS(decode(inst, {0, 0}), InvalidInput);
  CHECK_THROWS_AS(decode(inst, {0, 2}), InvalidInput);
}

TEST_CASE("decode agrees with the reference decoder on random inputs",
          "[core][property]") {
  Rng rng(7);
  ScheduleBuilder builder;
  for (int round = 0; round < 300; ++round) {
    const int n = static_cast<int>(rng.uniform_int(1, 9));
    const Instance inst = oracle::random_instance(rng, n, 12);
    const Permutation perm = oracle::random_permutation(rng, n);
    const Time fast = decode_makespan(inst, perm, builder);
    REQUIRE(fast == oracle::brute_decode_makespan(inst, perm));
    REQUIRE(fast == decode(inst, perm).makespan);
  }
}

TEST_CASE("decoded schedules are feasible and bounded by the serial length",
          "[core][property]") {
  Rng rng(99);
  for (int round = 0; round < 200; ++round) {
    const int n = static_cast<int>(rng.uniform_int(1, 10));
    const Instance inst = oracle::random_instance(rng, n);
    const Permutation perm = oracle::random_permutation(rng, n);
    const Schedule s = decode(inst, perm);
    CAPTURE(round, n);
    REQUIRE(validate(inst, s).empty());
    REQUIRE(s.makespan <= inst.total_length());
    Time longest = 0;
    for (const Job& job : inst.jobs) longest = std::max(longest, job.length());
    REQUIRE(s.makespan >= longest);
  }
}

TEST_CASE("validate flags machine and server conflicts", "[core]") {
  const Instance inst{{{1, 1, 1}, {1, 1, 1}}};
  const Schedule s = schedule_from_starts(inst, {0, 0}, {0, 0});
  const auto violations = validate(inst, s);
  REQUIRE_FALSE(violations.empty());
  bool machine_overlap = false, server_overlap = false;
  for (const Violation& v : violations) {
    machine_overlap |= v.rule == "machine-overlap";
    server_overlap |= v.rule == "server-overlap";
  }
  CHECK(machine_overlap);
  CHECK(server_overlap);
}

TEST_CASE("validate flags inconsistent completions", "[core]") {
  const Instance inst{{{2, 3, 4}}};
  Schedule s = decode(inst, {0});
  s.completion[0] = 5;  // less than the job length
  s.makespan = 5;
  const auto violations = validate(inst, s);
  REQUIRE_FALSE(violations.empty());
  CHECK(violations.front().rule == "completion");
}

TEST_CASE("validate accepts jobs queued back to back on one machine",
          "[core]") {
  // Serial schedule on machine 0: feasible, just not parallel.
  const Instance inst{{{1, 1, 1}, {1, 1, 1}}};
  const Schedule s = schedule_from_starts(inst, {0, 3}, {0, 0});
  CHECK(validate(inst, s).empty());
  CHECK(s.makespan == 6);
}

TEST_CASE("instance text format round-trips", "[core]") {
  const Instance inst{{{1, 10, 2}, {3, 55, 4}, {5, 100, 6}}};
  const std::string text = write_instance(inst);
  CHECK(text == "3\n1 10 2\n3 55 4\n5 100 6\n");
  const Instance back = parse_instance(text);
  REQUIRE(back.size() == 3);
  CHECK(write_instance(back) == text);
}

TEST_CASE("instance parser rejects malformed input", "[core]") {
  CHECK_THROWS_AS(parse_instance("2\n1 1 1\n"), InvalidInput);        // short
  CHECK_THROWS_AS(parse_instance("1\n1 0 1\n"), InvalidInput);        // zero
  CHECK_THROWS_AS(parse_instance("1\n1 1 -2\n"), InvalidInput);       // negative
  CHECK_THROWS_AS(parse_instance("1\n1 1 1\n9 9 9\n"), InvalidInput); // extra
  CHECK_THROWS_AS(parse_instance("x\n"), InvalidInput);               // no count
}

TEST_CASE("schedule text format round-trips through parse", "[core]") {
  const Instance inst{{{1, 1, 5}, {1, 1, 1}}};
  const Schedule s = decode(inst, {0, 1});
  const std::string text = write_schedule(s);
  std::istringstream in(text);
  const Schedule back = parse_schedule(inst, in);
  CHECK(back.start == s.start);
  CHECK(back.machine == s.machine);
  CHECK(back.completion == s.completion);
  CHECK(back.makespan == s.makespan);
  CHECK(write_schedule(back) == text);
}
