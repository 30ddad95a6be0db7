#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>
#include <tuple>

#include "bounds.hpp"
#include "metaheuristics.hpp"

namespace p2s1 {

// ---------------------------------------------------------------------------
// Instance generation.  Processing times are uniform integers in [10, 100];
// load and unload times are a random fraction of the processing time, with
// the fraction range set by the class below.  Small fractions make the
// server a light constraint, large ones make it the bottleneck.
// ---------------------------------------------------------------------------

struct AlphaClass {
  std::string name;
  double lo = 0;
  double hi = 0;
  std::uint64_t id = 0;  // folded into derived seeds
};

inline const std::vector<AlphaClass>& alpha_classes() {
  static const std::vector<AlphaClass> classes = {
      {"a1", 0.01, 0.1, 1},
      {"a2", 0.1, 0.2, 2},
      {"a3", 0.1, 0.5, 3},
  };
  return classes;
}

inline const AlphaClass& alpha_class(const std::string& name) {
  for (const AlphaClass& c : alpha_classes())
    if (c.name == name) return c;
  throw InvalidInput("unknown alpha class: " + name);
}

struct GeneratorSpec {
  int n = 10;
  AlphaClass alpha = alpha_classes()[1];
  int count = 10;
  std::uint64_t seed = 1;
  // One fraction draw per job applied to both load and unload, instead of
  // independent draws.
  bool shared_alpha = false;
};

inline std::vector<Instance> generate(const GeneratorSpec& spec) {
  if (spec.n < 1) throw InvalidInput("generator: n must be at least 1");
  if (spec.count < 1) throw InvalidInput("generator: count must be at least 1");
  if (!(spec.alpha.lo > 0) || spec.alpha.hi < spec.alpha.lo)
    throw InvalidInput("generator: fraction range must satisfy 0 < lo <= hi");
  std::vector<Instance> out;
  out.reserve(static_cast<std::size_t>(spec.count));
  for (int rep = 0; rep < spec.count; ++rep) {
    Rng rng = Rng::derive(spec.seed, 0x67656eull, spec.alpha.id,
                          static_cast<std::uint64_t>(spec.n),
                          static_cast<std::uint64_t>(rep));
    Instance instance;
    instance.jobs.reserve(static_cast<std::size_t>(spec.n));
    for (int j = 0; j < spec.n; ++j) {
      const Time proc = static_cast<Time>(rng.uniform_int(10, 100));
      const auto draw = [&] {
        return spec.alpha.lo + rng.uniform01() * (spec.alpha.hi - spec.alpha.lo);
      };
      const double alpha_load = draw();
      const double alpha_unload = spec.shared_alpha ? alpha_load : draw();
      const Time load = std::max<Time>(
          1, std::llround(alpha_load * static_cast<double>(proc)));
      const Time unload = std::max<Time>(
          1, std::llround(alpha_unload * static_cast<double>(proc)));
      instance.jobs.push_back({load, proc, unload});
    }
    out.push_back(std::move(instance));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Experiment runner: every method solves every cell; gaps are reported
// against the bound and against the best result any method found on that
// cell.
// ---------------------------------------------------------------------------

enum class Method { Gvns1, Gvns2, Grasp };

inline const char* method_label(Method m) {
  switch (m) {
    case Method::Gvns1: return "gvns1";
    case Method::Gvns2: return "gvns2";
    case Method::Grasp: return "grasp";
  }
  return "?";
}

inline Method parse_method(const std::string& label) {
  for (Method m : {Method::Gvns1, Method::Gvns2, Method::Grasp})
    if (label == method_label(m)) return m;
  throw InvalidInput("unknown method: " + label);
}

struct BenchCell {
  Instance instance;
  std::string alpha;  // label only; the jobs are already drawn
  int rep = 0;
};

inline std::vector<BenchCell> make_cells(const std::vector<int>& sizes,
                                         const std::vector<AlphaClass>& classes,
                                         int count, std::uint64_t seed,
                                         bool shared_alpha = false) {
  std::vector<BenchCell> cells;
  for (int n : sizes)
    for (const AlphaClass& cls : classes) {
      GeneratorSpec spec{n, cls, count, seed, shared_alpha};
      std::vector<Instance> instances = generate(spec);
      for (int rep = 0; rep < count; ++rep)
        cells.push_back({std::move(instances[static_cast<std::size_t>(rep)]),
                         cls.name, rep});
    }
  return cells;
}

// Budget used when the config leaves it open: small instances settle in
// seconds, large ones need minutes.
inline double default_time_limit(int n) {
  if (n <= 50) return 10.0;
  if (n <= 100) return 100.0;
  return 300.0;
}

struct ExperimentConfig {
  std::uint64_t seed = 1;
  int k_max = 15;
  std::optional<double> time_limit_s;  // per-n default when unset
  std::optional<std::uint64_t> max_rounds;
  std::optional<double> alpha_rcl;  // GRASP width; redrawn per round when unset
  int threads = 1;
  // Sets each run's stop target to the rounded-up lower bound, so provably
  // optimal cells finish early.
  bool stop_at_lower_bound = false;
  std::vector<Method> methods = {Method::Gvns1, Method::Gvns2, Method::Grasp};
};

struct ResultRow {
  Method method = Method::Gvns1;
  int n = 0;
  std::string alpha;
  int rep = 0;
  Time makespan = 0;
  HalfIntegral lbt;
  Time best_of_cell = 0;  // best makespan any method reached on this cell
  std::uint64_t best_round = 0;
  std::uint64_t rounds = 0;
  double time_to_best_s = 0;
  bool timed = true;  // false when the budget was rounds, so times are noise
  int cell = 0;
};

inline std::vector<ResultRow> run_experiment(const std::vector<BenchCell>& cells,
                                             const ExperimentConfig& config) {
  const std::size_t method_count = config.methods.size();
  if (method_count == 0) throw InvalidInput("experiment: no methods selected");
  if (config.threads < 1) throw InvalidInput("experiment: threads must be >= 1");
  std::vector<ResultRow> rows(cells.size() * method_count);

  const auto run_task = [&](std::size_t task) {
    const std::size_t cell_index = task / method_count;
    const std::size_t method_index = task % method_count;
    const BenchCell& cell = cells[cell_index];
    const Method method = config.methods[method_index];
    const int n = cell.instance.size();

    SearchConfig sc;
    sc.time_limit_s = config.time_limit_s.value_or(default_time_limit(n));
    sc.max_rounds = config.max_rounds;
    sc.k_max = config.k_max;
    sc.alpha = config.alpha_rcl;
    // The seed depends only on the master seed, the method and the cell,
    // never on thread interleaving or on which other methods run.
    sc.seed = Rng::derive_seed(config.seed, static_cast<std::uint64_t>(method),
                               static_cast<std::uint64_t>(cell_index));
    sc.initial = method == Method::Gvns2 ? SearchConfig::Initial::Random
                                         : SearchConfig::Initial::ImprovedIdentity;
    const HalfIntegral bound = lb_t(cell.instance);
    if (config.stop_at_lower_bound) sc.target = bound.ceil();

    const SearchResult result = method == Method::Grasp
                                    ? grasp(cell.instance, sc)
                                    : gvns(cell.instance, sc);
    ResultRow& row = rows[task];
    row.method = method;
    row.n = n;
    row.alpha = cell.alpha;
    row.rep = cell.rep;
    row.makespan = result.makespan;
    row.lbt = bound;
    row.best_round = result.round_to_best;
    row.rounds = result.rounds;
    row.time_to_best_s = result.time_to_best_s;
    row.timed = !config.max_rounds.has_value();
    row.cell = static_cast<int>(cell_index);
  };

  if (config.threads == 1) {
    for (std::size_t task = 0; task < rows.size(); ++task) run_task(task);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const int workers =
        std::min<int>(config.threads, static_cast<int>(rows.size()));
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t task = next.fetch_add(1); task < rows.size();
             task = next.fetch_add(1))
          run_task(task);
      });
    for (std::thread& t : pool) t.join();
  }

  for (std::size_t cell_index = 0; cell_index < cells.size(); ++cell_index) {
    Time best = rows[cell_index * method_count].makespan;
    for (std::size_t m = 1; m < method_count; ++m)
      best = std::min(best, rows[cell_index * method_count + m].makespan);
    for (std::size_t m = 0; m < method_count; ++m)
      rows[cell_index * method_count + m].best_of_cell = best;
  }

  // Row order is part of the output contract: by size, class, instance,
  // then the methods in the order they were requested.
  std::vector<std::size_t> order(rows.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const ResultRow& ra = rows[a];
    const ResultRow& rb = rows[b];
    const auto key = [&](const ResultRow& r, std::size_t task) {
      return std::tuple(r.n, r.alpha, r.rep, r.cell, task % method_count);
    };
    return key(ra, a) < key(rb, b);
  });
  std::vector<ResultRow> sorted;
  sorted.reserve(rows.size());
  for (std::size_t i : order) sorted.push_back(std::move(rows[i]));
  return sorted;
}

// ---------------------------------------------------------------------------
// CSV export.  All ratio columns are computed in integers and rounded half
// up to four decimals, so equal inputs give byte-equal files; wall-clock
// columns print as "-" for rounds-budgeted runs, which are the reproducible
// ones.
// ---------------------------------------------------------------------------

// num/den rounded half up to four decimals, den > 0, num >= 0.
inline std::string format_ratio_4dp(Time num, Time den) {
  if (den <= 0) throw InvalidInput("format_ratio_4dp: denominator must be > 0");
  const Time scaled = num * 10000 + den / 2;
  const Time q = scaled / den;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%lld.%04lld",
                static_cast<long long>(q / 10000),
                static_cast<long long>(q % 10000));
  return buf;
}

// Percent gap of a makespan over the half-integral lower bound.
inline std::string format_gap_lbt(Time makespan, HalfIntegral bound) {
  return format_ratio_4dp(100 * (2 * makespan - bound.twice), bound.twice);
}

// Percent gap over the best makespan any method found on the same cell.
inline std::string format_gap_dev(Time makespan, Time best) {
  return format_ratio_4dp(100 * (makespan - best), best);
}

inline const char* csv_signature() { return "# p2s1 bench csv v1"; }

inline std::string to_csv(const std::vector<ResultRow>& rows) {
  std::string out = csv_signature();
  out +=
      "\nmethod,n,alpha,instance,makespan,lb_t,gap_lbt,gap_dev,best_round,"
      "rounds,time_to_best_s\n";
  char buf[48];
  for (const ResultRow& row : rows) {
    out += method_label(row.method);
    out += ',' + std::to_string(row.n);
    out += ',' + row.alpha;
    out += ',' + std::to_string(row.rep);
    out += ',' + std::to_string(row.makespan);
    out += ',' + row.lbt.str();
    out += ',' + format_gap_lbt(row.makespan, row.lbt);
    out += ',' + format_gap_dev(row.makespan, row.best_of_cell);
    out += ',' + std::to_string(row.best_round);
    out += ',' + std::to_string(row.rounds);
    if (row.timed) {
      std::snprintf(buf, sizeof buf, "%.4f", row.time_to_best_s);
      out += ',';
      out += buf;
    } else {
      out += ",-";
    }
    out += '\n';
  }
  return out;
}

inline double average_gap_dev(const std::vector<ResultRow>& rows, Method m) {
  double sum = 0;
  int count = 0;
  for (const ResultRow& row : rows)
    if (row.method == m) {
      sum += 100.0 * static_cast<double>(row.makespan - row.best_of_cell) /
             static_cast<double>(row.best_of_cell);
      ++count;
    }
  return count == 0 ? 0.0 : sum / count;
}

inline double average_gap_lbt(const std::vector<ResultRow>& rows, Method m) {
  double sum = 0;
  int count = 0;
  for (const ResultRow& row : rows)
    if (row.method == m) {
      sum += 100.0 *
             static_cast<double>(2 * row.makespan - row.lbt.twice) /
             static_cast<double>(row.lbt.twice);
      ++count;
    }
  return count == 0 ? 0.0 : sum / count;
}

}  // namespace p2s1
