#pragma once

#include "core.hpp"
#include "rng.hpp"

namespace p2s1 {

enum class MoveKind { Interchange, Insert, Reverse };

// A move on sequence positions (not job ids).  Interchange swaps the
// entries at a and b; Reverse flips the closed block between them; Insert
// removes the entry at a and reinserts it so it ends up at position b.
struct Move {
  MoveKind kind;
  int a = 0;
  int b = 0;
};

// Move the element at `from` to position `to`, shifting the block between
// them.  Its own inverse with the arguments swapped.
inline void move_element(Permutation& perm, int from, int to) {
  if (from < to)
    std::rotate(perm.begin() + from, perm.begin() + from + 1,
                perm.begin() + to + 1);
  else
    std::rotate(perm.begin() + to, perm.begin() + from, perm.begin() + from + 1);
}

inline Permutation apply_move(const Permutation& perm, Move move) {
  const int n = static_cast<int>(perm.size());
  if (move.a < 0 || move.a >= n || move.b < 0 || move.b >= n)
    throw InvalidInput("apply_move: position out of range");
  if (move.a == move.b)
    throw InvalidInput("apply_move: positions must differ");
  Permutation out = perm;
  const auto [lo, hi] = std::minmax(move.a, move.b);
  switch (move.kind) {
    case MoveKind::Interchange:
      std::swap(out[static_cast<std::size_t>(lo)],
                out[static_cast<std::size_t>(hi)]);
      break;
    case MoveKind::Reverse:
      std::reverse(out.begin() + lo, out.begin() + hi + 1);
      break;
    case MoveKind::Insert:
      move_element(out, move.a, move.b);
      break;
  }
  return out;
}

// Variable neighbourhood descent over Interchange, then Insert, then
// Reverse.  First improvement: any strict makespan gain is taken at once
// and the scan restarts from the first neighbourhood; each neighbourhood
// is enumerated in lexicographic position order.  Moves are applied in
// place, evaluated by a full re-decode, and undone unless they improve.
// On return the sequence is a local optimum of all three neighbourhoods.
inline void vnd_inplace(const Instance& instance, Permutation& perm,
                        Time& best, ScheduleBuilder& builder) {
  const int n = static_cast<int>(perm.size());
  int level = 0;
  while (level < 3) {
    bool improved = false;
    if (level == 0) {
      for (int a = 0; a < n - 1 && !improved; ++a)
        for (int b = a + 1; b < n && !improved; ++b) {
          std::swap(perm[a], perm[b]);
          const Time c = decode_makespan(instance, perm, builder);
          if (c < best) {
            best = c;
            improved = true;
          } else {
            std::swap(perm[a], perm[b]);
          }
        }
    } else if (level == 1) {
      for (int a = 0; a < n && !improved; ++a)
        for (int b = 0; b < n && !improved; ++b) {
          if (a == b) continue;
          move_element(perm, a, b);
          const Time c = decode_makespan(instance, perm, builder);
          if (c < best) {
            best = c;
            improved = true;
          } else {
            move_element(perm, b, a);
          }
        }
    } else {
      for (int a = 0; a < n - 1 && !improved; ++a)
        for (int b = a + 1; b < n && !improved; ++b) {
          std::reverse(perm.begin() + a, perm.begin() + b + 1);
          const Time c = decode_makespan(instance, perm, builder);
          if (c < best) {
            best = c;
            improved = true;
          } else {
            std::reverse(perm.begin() + a, perm.begin() + b + 1);
          }
        }
    }
    level = improved ? 0 : level + 1;
  }
}

inline Permutation vnd(const Instance& instance, Permutation perm) {
  if (!is_permutation_of(perm, instance.size()))
    throw InvalidInput("vnd: sequence is not a permutation of the instance");
  ScheduleBuilder builder;
  Time best = decode_makespan(instance, perm, builder);
  vnd_inplace(instance, perm, best, builder);
  return perm;
}

// One-job relocation descent: n times per pass, pick a random position,
// try the removed job in every position and keep the best strict
// improvement.  Passes repeat until one finishes without improving.
// Always draws exactly n random positions per pass, so a seeded run
// replays exactly.
inline Permutation iterative_improvement(const Instance& instance,
                                         Permutation perm, Rng& rng) {
  if (!is_permutation_of(perm, instance.size()))
    throw InvalidInput(
        "iterative_improvement: sequence is not a permutation of the instance");
  const int n = static_cast<int>(perm.size());
  if (n < 2) return perm;
  ScheduleBuilder builder;
  Time best = decode_makespan(instance, perm, builder);
  bool pass_improved = true;
  while (pass_improved) {
    pass_improved = false;
    for (int i = 0; i < n; ++i) {
      const int from = static_cast<int>(rng.uniform_int(0, n - 1));
      int best_to = -1;
      Time best_c = best;
      for (int to = 0; to < n; ++to) {
        if (to == from) continue;
        move_element(perm, from, to);
        const Time c = decode_makespan(instance, perm, builder);
        if (c < best_c) {
          best_c = c;
          best_to = to;
        }
        move_element(perm, to, from);
      }
      if (best_to >= 0) {
        move_element(perm, from, best_to);
        best = best_c;
        pass_improved = true;
      }
    }
  }
  return perm;
}

}  // namespace p2s1
