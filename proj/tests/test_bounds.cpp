#include <catch2/catch_amalgamated.hpp>

#include "p2s1/bounds.hpp"
#include "p2s1/exact.hpp"
#include "support/oracles.hpp"

using namespace p2s1;
namespace oracle = p2s1::testing;

TEST_CASE("half-integral values format and round up exactly", "[bounds]") {
  CHECK(HalfIntegral::from_int(5).str() == "5");
  CHECK(HalfIntegral::halves(15).str() == "7.5");
  CHECK(HalfIntegral::from_int(5).ceil() == 5);
  CHECK(HalfIntegral::halves(15).ceil() == 8);
  CHECK(HalfIntegral::halves(15) <= Time{8});
  CHECK_FALSE(HalfIntegral::halves(15) <= Time{7});
}

TEST_CASE("lower bounds on the two worked examples", "[bounds]") {
  const Instance two{{{1, 2, 1}, {1, 2, 1}}};
  CHECK(workload_bound(two) == HalfIntegral::from_int(5));  // (1+8+1)/2
  CHECK(server_bound(two) == 4);
  CHECK(lb_t(two) == HalfIntegral::from_int(5));
  // The bound is tight here: enumeration reaches 5.
  CHECK(brute_force(two).optimal == 5);

  const Instance one{{{2, 3, 4}}};
  CHECK(workload_bound(one) == HalfIntegral::halves(15));  // (2+9+4)/2 = 7.5
  CHECK(server_bound(one) == 6);
  CHECK(lb_t(one).str() == "7.5");
  CHECK(decode(one, {0}).makespan == 9);
}

TEST_CASE("lb_t never exceeds a decoded makespan", "[bounds][property]") {
  Rng rng(314);
  ScheduleBuilder builder;
  for (int round = 0; round < 500; ++round) {
    const int n = static_cast<int>(rng.uniform_int(1, 10));
    const Instance inst = oracle::random_instance(rng, n);
    const Permutation perm = oracle::random_permutation(rng, n);
    const Time makespan = decode_makespan(inst, perm, builder);
    CAPTURE(round, n, makespan);
    REQUIRE(lb_t(inst) <= makespan);
  }
}

TEST_CASE("idle times follow the workload accounting identity", "[bounds]") {
  const Instance inst{{{1, 1, 1}, {1, 1, 1}}};
  const Schedule s = decode(inst, {0, 1});
  const IdleTimes idle = idle_times(inst, s);
  CHECK(idle.machine == std::array<Time, 2>{1, 1});
  CHECK(idle.total == 2);
  CHECK(idle.total == 2 * s.makespan - inst.total_length());
}

TEST_CASE("idle time total is 2*makespan - total length, always",
          "[bounds][property]") {
  Rng rng(2718);
  for (int round = 0; round < 200; ++round) {
    const int n = static_cast<int>(rng.uniform_int(1, 9));
    const Instance inst = oracle::random_instance(rng, n);
    const Schedule s = decode(inst, oracle::random_permutation(rng, n));
    const IdleTimes idle = idle_times(inst, s);
    REQUIRE(idle.total == 2 * s.makespan - inst.total_length());
    REQUIRE(idle.machine[0] >= 0);
    REQUIRE(idle.machine[1] >= 0);
  }
}

TEST_CASE("idle_times rejects infeasible schedules", "[bounds]") {
  const Instance inst{{{1, 1, 1}, {1, 1, 1}}};
  const Schedule bad = schedule_from_starts(inst, {0, 0}, {0, 0});
  CHECK_THROWS_AS(idle_times(inst, bad), InvalidInput);
}

TEST_CASE("polynomial case: uniform durations, even count", "[bounds]") {
  const Instance inst{{{1, 1, 1}, {1, 1, 1}}};
  const auto rec = recognize_polynomial_case(inst);
  REQUIRE(rec.has_value());
  CHECK(rec->kind == PolyCaseKind::UniformDurations);
  CHECK(rec->optimal_makespan == 4);
  CHECK(brute_force(inst).optimal == 4);
}

TEST_CASE("polynomial case: uniform durations need an even job count",
          "[bounds]") {
  // With three (1,1,1) jobs the closed form 2n*c = 6 is unreachable: the
  // server cannot pack three load/unload pairs without a gap.  Enumeration
  // confirms the true optimum is 7, so the recognizer must stay silent.
  const Instance odd{{{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}};
  CHECK_FALSE(recognize_polynomial_case(odd).has_value());
  CHECK(brute_force(odd).optimal == 7);
}

TEST_CASE("polynomial case: dominant loads serialize every job", "[bounds]") {
  const Instance inst{{{3, 2, 3}, {4, 1, 4}}};
  const auto rec = recognize_polynomial_case(inst);
  REQUIRE(rec.has_value());
  CHECK(rec->kind == PolyCaseKind::DominantLoads);
  CHECK(rec->optimal_makespan == 17);
  CHECK(brute_force(inst).optimal == 17);
}

TEST_CASE("polynomial case: increasing phase durations", "[bounds]") {
  const Instance inst{{{1, 2, 3}, {2, 2, 4}}};
  const auto rec = recognize_polynomial_case(inst);
  REQUIRE(rec.has_value());
  CHECK(rec->kind == PolyCaseKind::IncreasingDurations);
  CHECK(rec->optimal_makespan == 14);
  CHECK(brute_force(inst).optimal == 14);
}

TEST_CASE("polynomial case: none of the premises hold", "[bounds]") {
  const Instance inst{{{1, 2, 1}, {1, 2, 1}}};
  CHECK_FALSE(recognize_polynomial_case(inst).has_value());
}

TEST_CASE("recognized instances decode to the closed form on every sequence",
          "[bounds][property]") {
  Rng rng(55);
  ScheduleBuilder builder;
  for (int round = 0; round < 60; ++round) {
    Instance inst;
    const int kind = static_cast<int>(rng.uniform_int(0, 2));
    if (kind == 0) {  // uniform durations, even n
      const int n = 2 * static_cast<int>(rng.uniform_int(1, 3));
      const Time c = rng.uniform_int(1, 20);
      for (int j = 0; j < n; ++j) inst.jobs.push_back({c, c, c});
    } else if (kind == 1) {  // every proc < every load
      const int n = static_cast<int>(rng.uniform_int(1, 5));
      const Time floor = rng.uniform_int(5, 15);
      for (int j = 0; j < n; ++j)
        inst.jobs.push_back({rng.uniform_int(floor, floor + 10),
                             rng.uniform_int(1, floor - 1),
                             rng.uniform_int(1, 25)});
    } else {  // every load <= every proc < every unload
      const int n = static_cast<int>(rng.uniform_int(1, 5));
      const Time a = rng.uniform_int(2, 8);
      const Time b = a + rng.uniform_int(2, 8);
      for (int j = 0; j < n; ++j)
        inst.jobs.push_back({rng.uniform_int(1, a), rng.uniform_int(a, b - 1),
                             rng.uniform_int(b, b + 10)});
    }
    const auto rec = recognize_polynomial_case(inst);
    CAPTURE(round, kind, inst.size());
    REQUIRE(rec.has_value());
    Permutation perm = identity_permutation(inst.size());
    do {
      REQUIRE(decode_makespan(inst, perm, builder) == rec->optimal_makespan);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
}
