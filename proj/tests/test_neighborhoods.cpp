#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "p2s1/neighborhoods.hpp"
#include "support/oracles.hpp"

using namespace p2s1;
namespace oracle = p2s1::testing;

TEST_CASE("apply_move on worked examples", "[neighborhoods]") {
  const Permutation three{1, 2, 3};
  const Permutation four{1, 2, 3, 4};

  CHECK(apply_move(three, {MoveKind::Interchange, 0, 2}) ==
        Permutation{3, 2, 1});
  CHECK(apply_move(three, {MoveKind::Interchange, 2, 0}) ==
        Permutation{3, 2, 1});
  CHECK(apply_move(four, {MoveKind::Reverse, 1, 3}) == Permutation{1, 4, 3, 2});
  CHECK(apply_move(four, {MoveKind::Reverse, 3, 1}) == Permutation{1, 4, 3, 2});
  // Insert is directional: the element at a lands at position b.
  CHECK(apply_move(four, {MoveKind::Insert, 1, 3}) == Permutation{1, 3, 4, 2});
  CHECK(apply_move(four, {MoveKind::Insert, 3, 1}) == Permutation{1, 4, 2, 3});
}

TEST_CASE("apply_move rejects bad positions", "[neighborhoods]") {
  const Permutation perm{0, 1, 2};
  CHECK_THROWS_AS(apply_move(perm, {MoveKind::Interchange, 0, 3}),
                  InvalidInput);
  CHECK_THROWS_AS(apply_move(perm, {MoveKind::Insert, -1, 1}), InvalidInput);
  CHECK_THROWS_AS(apply_move(perm, {MoveKind::Reverse, 2, 2}), InvalidInput);
}

TEST_CASE("moves are invertible and preserve the elements",
          "[neighborhoods]") {
  Rng rng(404);
  for (int round = 0; round < 200; ++round) {
    const int n = 2 + static_cast<int>(rng.bounded(11));
    const Permutation perm = oracle::random_permutation(rng, n);
    const int a = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n)));
    int b = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(n) - 1));
    if (b >= a) ++b;
    for (const MoveKind kind :
         {MoveKind::Interchange, MoveKind::Insert, MoveKind::Reverse}) {
      const Permutation moved = apply_move(perm, {kind, a, b});
      CHECK(is_permutation_of(moved, n));
      // Interchange and Reverse are involutions; Insert undoes with the
      // swapped positions.
      const Permutation back = kind == MoveKind::Insert
                                   ? apply_move(moved, {kind, b, a})
                                   : apply_move(moved, {kind, a, b});
      CHECK(back == perm);
    }
  }
}

TEST_CASE("vnd result cannot be improved by any single move",
          "[neighborhoods]") {
  Rng rng(405);
  ScheduleBuilder builder;
  for (int round = 0; round < 25; ++round) {
    const int n = 3 + static_cast<int>(rng.bounded(5));
    const Instance instance = oracle::random_instance(rng, n);
    const Permutation start = oracle::random_permutation(rng, n);
    const Permutation local = vnd(instance, start);
    REQUIRE(is_permutation_of(local, n));

    const Time before = decode_makespan(instance, start, builder);
    const Time after = decode_makespan(instance, local, builder);
    CHECK(after <= before);
    for (const MoveKind kind :
         {MoveKind::Interchange, MoveKind::Insert, MoveKind::Reverse})
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          const Permutation moved = apply_move(local, {kind, a, b});
          CHECK(decode_makespan(instance, moved, builder) >= after);
        }
  }
}

TEST_CASE("vnd leaves an already optimal sequence alone", "[neighborhoods]") {
  // Loads dominate processing, so every sequence meets the serial optimum
  // and no move is a strict improvement.
  const Instance instance{{{3, 2, 3}, {4, 1, 4}, {5, 2, 5}}};
  const Permutation start{2, 0, 1};
  CHECK(vnd(instance, start) == start);
}

TEST_CASE("vnd rejects a non-permutation", "[neighborhoods]") {
  const Instance instance{{{1, 2, 1}, {1, 2, 1}}};
  CHECK_THROWS_AS(vnd(instance, Permutation{0, 0}), InvalidInput);
}

TEST_CASE("iterative improvement relocates the long job", "[neighborhoods]") {
  // Identity decodes to 10; starting with the short job brings it to 8,
  // and on two jobs the descent always finds that regardless of the seed.
  const Instance instance{{{1, 1, 5}, {1, 1, 1}}};
  ScheduleBuilder builder;
  for (const std::uint64_t seed : {1ull, 2ull, 99ull}) {
    Rng rng(seed);
    const Permutation out =
        iterative_improvement(instance, identity_permutation(2), rng);
    CHECK(out == Permutation{1, 0});
    CHECK(decode_makespan(instance, out, builder) == 8);
  }
}

TEST_CASE("iterative improvement is seeded and never worsens",
          "[neighborhoods]") {
  Rng meta(406);
  ScheduleBuilder builder;
  for (int round = 0; round < 50; ++round) {
    const int n = 2 + static_cast<int>(meta.bounded(7));
    const Instance instance = oracle::random_instance(meta, n);
    const Permutation start = oracle::random_permutation(meta, n);

    Rng r1(1000 + static_cast<std::uint64_t>(round));
    Rng r2(1000 + static_cast<std::uint64_t>(round));
    const Permutation out1 = iterative_improvement(instance, start, r1);
    const Permutation out2 = iterative_improvement(instance, start, r2);
    CHECK(out1 == out2);
    CHECK(is_permutation_of(out1, n));
    CHECK(decode_makespan(instance, out1, builder) <=
          decode_makespan(instance, start, builder));
  }
}

TEST_CASE("iterative improvement keeps tiny sequences", "[neighborhoods]") {
  const Instance one{{{2, 3, 4}}};
  Rng rng(7);
  CHECK(iterative_improvement(one, {0}, rng) == Permutation{0});
  const Instance empty{};
  CHECK(iterative_improvement(empty, {}, rng).empty());
}
