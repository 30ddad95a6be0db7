#pragma once

#include <unistd.h>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <unordered_map>
#include <utility>

#include "bounds.hpp"
#include "core.hpp"

namespace p2s1 {

// Thrown when an external solver ran but its output could not be parsed;
// the raw output is attached to the message.
struct SolverProtocolError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class VarKind { Continuous, Binary };

struct Variable {
  std::string name;
  VarKind kind = VarKind::Continuous;
};

struct Term {
  int var = 0;
  Time coef = 0;
};

enum class Sense { LessEq, GreaterEq, Equal };

struct LinearRow {
  std::string tag;
  std::vector<Term> terms;
  Sense sense = Sense::LessEq;
  Time rhs = 0;
};

// A mixed integer program: minimize one variable subject to linear rows.
// All coefficients are integers; variables are binary or nonnegative
// continuous.
struct MilpModel {
  std::string name;
  std::vector<Variable> vars;
  std::vector<LinearRow> rows;
  int objective = 0;  // index of the minimized variable

  int add_var(std::string var_name, VarKind kind) {
    vars.push_back({std::move(var_name), kind});
    return static_cast<int>(vars.size()) - 1;
  }

  void add_row(std::string tag, std::vector<Term> terms, Sense sense,
               Time rhs) {
    rows.push_back({std::move(tag), std::move(terms), sense, rhs});
  }

  int binary_count() const {
    int count = 0;
    for (const Variable& v : vars) count += v.kind == VarKind::Binary;
    return count;
  }
  int continuous_count() const {
    return static_cast<int>(vars.size()) - binary_count();
  }
};

// ---------------------------------------------------------------------------
// Both formulations view the instance as 3n operations: operation i < n is
// the whole job (duration = its length), operation n+i its load and
// operation 2n+i its unload.  The machines process whole jobs; the server
// is the extra resource running all loads and unloads.
// ---------------------------------------------------------------------------

inline Time op_duration(const Instance& instance, int op) {
  const int n = instance.size();
  if (op < n) return instance.jobs[static_cast<std::size_t>(op)].length();
  if (op < 2 * n) return instance.jobs[static_cast<std::size_t>(op - n)].load;
  return instance.jobs[static_cast<std::size_t>(op - 2 * n)].unload;
}

// Variable layout of the completion-time formulation.  Fixed order:
// Cmax, C_1..C_3n, x_i_k, z_i_j (i != j), y_a_b (a != b over load/unload
// operations).  Names are 1-based to match the operation numbering above.
struct CfLayout {
  int n = 0;

  explicit CfLayout(int jobs) : n(jobs) {}

  int cmax() const { return 0; }
  int c(int op) const { return 1 + op; }
  int x(int job, int machine) const { return 1 + 3 * n + 2 * job + machine; }
  int z(int i, int j) const {
    return 1 + 5 * n + i * (n - 1) + (j > i ? j - 1 : j);
  }
  int y(int a, int b) const {  // a, b are operation ids in [n, 3n)
    const int ai = a - n, bi = b - n;
    return 1 + 5 * n + n * (n - 1) + ai * (2 * n - 1) + (bi > ai ? bi - 1 : bi);
  }
  int var_count() const {
    return 1 + 5 * n + n * (n - 1) + 2 * n * (2 * n - 1);
  }
};

struct CfOptions {
  // Adds the machine-workload cuts and the lowest-index symmetry breaker.
  bool valid_inequalities = false;
};

inline MilpModel build_cf(const Instance& instance, CfOptions options = {}) {
  const int n = instance.size();
  const CfLayout L(n);
  const Time big = instance.total_length();
  MilpModel m;
  m.name = options.valid_inequalities ? "cf_plus" : "cf";

  m.add_var("Cmax", VarKind::Continuous);
  for (int op = 0; op < 3 * n; ++op)
    m.add_var("C_" + std::to_string(op + 1), VarKind::Continuous);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < 2; ++k)
      m.add_var("x_" + std::to_string(i + 1) + "_" + std::to_string(k + 1),
                VarKind::Binary);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i)
        m.add_var("z_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                  VarKind::Binary);
  for (int a = n; a < 3 * n; ++a)
    for (int b = n; b < 3 * n; ++b)
      if (b != a)
        m.add_var("y_" + std::to_string(a + 1) + "_" + std::to_string(b + 1),
                  VarKind::Binary);
  m.objective = L.cmax();

  // Makespan covers every job completion.
  for (int i = 0; i < n; ++i)
    m.add_row("makespan_" + std::to_string(i + 1),
              {{L.cmax(), 1}, {L.c(i), -1}}, Sense::GreaterEq, 0);
  // Each job runs on exactly one machine.
  for (int i = 0; i < n; ++i)
    m.add_row("assign_" + std::to_string(i + 1),
              {{L.x(i, 0), 1}, {L.x(i, 1), 1}}, Sense::Equal, 1);
  // No operation completes before its own duration.
  for (int op = 0; op < 3 * n; ++op)
    m.add_row("duration_" + std::to_string(op + 1), {{L.c(op), 1}},
              Sense::GreaterEq, op_duration(instance, op));
  // Jobs sharing a machine follow their z order with no overlap.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < 2; ++k)
        m.add_row("mseq_" + std::to_string(i + 1) + "_" + std::to_string(j + 1) +
                      "_m" + std::to_string(k + 1),
                  {{L.c(i), 1},
                   {L.c(j), -1},
                   {L.x(i, k), big},
                   {L.x(j, k), big},
                   {L.z(i, j), big}},
                  Sense::LessEq, 3 * big - op_duration(instance, j));
    }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      m.add_row("mchoice_" + std::to_string(i + 1) + "_" + std::to_string(j + 1),
                {{L.z(i, j), 1}, {L.z(j, i), 1}}, Sense::Equal, 1);
  // The server runs one load/unload at a time, in the y order.
  for (int a = n; a < 3 * n; ++a)
    for (int b = n; b < 3 * n; ++b) {
      if (b == a) continue;
      m.add_row("sseq_" + std::to_string(a + 1) + "_" + std::to_string(b + 1),
                {{L.c(a), 1}, {L.c(b), -1}, {L.y(a, b), big}}, Sense::LessEq,
                big - op_duration(instance, b));
    }
  for (int a = n; a < 3 * n; ++a)
    for (int b = a + 1; b < 3 * n; ++b)
      m.add_row("schoice_" + std::to_string(a + 1) + "_" + std::to_string(b + 1),
                {{L.y(a, b), 1}, {L.y(b, a), 1}}, Sense::Equal, 1);
  // Load ends proc+unload before the job; unload ends with the job.
  for (int i = 0; i < n; ++i) {
    const Job& job = instance.jobs[static_cast<std::size_t>(i)];
    m.add_row("link_load_" + std::to_string(i + 1),
              {{L.c(i), 1}, {L.c(i + n), -1}}, Sense::Equal,
              job.proc + job.unload);
    m.add_row("link_unload_" + std::to_string(i + 1),
              {{L.c(i), 1}, {L.c(i + 2 * n), -1}}, Sense::Equal, 0);
  }

  if (options.valid_inequalities) {
    for (int k = 0; k < 2; ++k) {
      std::vector<Term> terms{{L.cmax(), 1}};
      for (int j = 0; j < n; ++j)
        terms.push_back(
            {L.x(j, k),
             -instance.jobs[static_cast<std::size_t>(j)].length()});
      m.add_row("workload_m" + std::to_string(k + 1), std::move(terms),
                Sense::GreaterEq, 0);
    }
    // Machine 2 only opens once a lower-indexed job sits on machine 1.
    for (int i = 0; i < n; ++i) {
      std::vector<Term> terms;
      for (int j = 0; j < i; ++j) terms.push_back({L.x(j, 0), 1});
      terms.push_back({L.x(i, 1), -1});
      m.add_row("sym_break_" + std::to_string(i + 1), std::move(terms),
                Sense::GreaterEq, 0);
    }
  }
  return m;
}

// Variable layout of the time-indexed formulation: Cmax, then xt_i_t for
// each operation i (1-based in names) and each start period
// t in [0, horizon - duration_i].
struct TifLayout {
  int n = 0;
  Time horizon = 0;
  std::vector<int> offset;  // per operation, into the xt block

  TifLayout(const Instance& instance, Time h) : n(instance.size()), horizon(h) {
    offset.resize(static_cast<std::size_t>(3 * n) + 1);
    offset[0] = 0;
    for (int op = 0; op < 3 * n; ++op)
      offset[static_cast<std::size_t>(op) + 1] =
          offset[static_cast<std::size_t>(op)] +
          static_cast<int>(horizon - op_duration(instance, op)) + 1;
  }

  int cmax() const { return 0; }
  int xt(int op, Time t) const {
    return 1 + offset[static_cast<std::size_t>(op)] + static_cast<int>(t);
  }
  int var_count() const {
    return 1 + offset[static_cast<std::size_t>(3 * n)];
  }
};

struct TifOptions {
  // Latest completion period considered; defaults to the serial horizon
  // (sum of all job lengths).  A known upper bound (e.g. a search result)
  // shrinks the model substantially.
  std::optional<Time> horizon;
};

inline MilpModel build_tif(const Instance& instance, TifOptions options = {}) {
  const int n = instance.size();
  Time longest = 0;
  for (const Job& job : instance.jobs)
    longest = std::max(longest, job.length());
  const Time horizon = options.horizon.value_or(instance.total_length());
  if (horizon < longest)
    throw InvalidInput("tif: horizon " + std::to_string(horizon) +
                       " is below the longest job length " +
                       std::to_string(longest));
  if (n > 0 && horizon < lb_t(instance).ceil())
    throw InvalidInput("tif: horizon " + std::to_string(horizon) +
                       " is below the lower bound " +
                       std::to_string(lb_t(instance).ceil()));

  const TifLayout L(instance, horizon);
  MilpModel m;
  m.name = options.horizon ? "tif_reduced" : "tif";
  m.add_var("Cmax", VarKind::Continuous);
  for (int op = 0; op < 3 * n; ++op)
    for (Time t = 0; t + op_duration(instance, op) <= horizon; ++t)
      m.add_var("xt_" + std::to_string(op + 1) + "_" + std::to_string(t),
                VarKind::Binary);
  m.objective = L.cmax();

  // A job starting at t completes at t + duration; Cmax covers them all.
  for (int i = 0; i < n; ++i) {
    const Time d = op_duration(instance, i);
    std::vector<Term> terms;
    for (Time t = 0; t + d <= horizon; ++t)
      terms.push_back({L.xt(i, t), t + d});
    terms.push_back({L.cmax(), -1});
    m.add_row("complete_" + std::to_string(i + 1), std::move(terms),
              Sense::LessEq, 0);
  }
  // At most two jobs (machines) / one load-or-unload (server) per period.
  const auto capacity_rows = [&](int op_begin, int op_end, Time cap,
                                 const std::string& prefix) {
    for (Time t = 0; t <= horizon; ++t) {
      std::vector<Term> terms;
      for (int op = op_begin; op < op_end; ++op) {
        const Time d = op_duration(instance, op);
        const Time lo = std::max<Time>(0, t - d + 1);
        const Time hi = std::min(t, horizon - d);
        for (Time u = lo; u <= hi; ++u) terms.push_back({L.xt(op, u), 1});
      }
      if (!terms.empty())
        m.add_row(prefix + "_" + std::to_string(t), std::move(terms),
                  Sense::LessEq, cap);
    }
  };
  capacity_rows(0, n, 2, "mcap");
  capacity_rows(n, 3 * n, 1, "scap");
  // Every operation starts exactly once.
  for (int op = 0; op < 3 * n; ++op) {
    const Time d = op_duration(instance, op);
    std::vector<Term> terms;
    for (Time t = 0; t + d <= horizon; ++t) terms.push_back({L.xt(op, t), 1});
    m.add_row("once_" + std::to_string(op + 1), std::move(terms), Sense::Equal,
              1);
  }
  // The load starts with the job; the unload follows load + processing.
  for (int i = 0; i < n; ++i) {
    const Job& job = instance.jobs[static_cast<std::size_t>(i)];
    const Time d = op_duration(instance, i);
    for (Time t = 0; t + d <= horizon; ++t) {
      m.add_row("sync_load_" + std::to_string(i + 1) + "_" + std::to_string(t),
                {{L.xt(i, t), 1}, {L.xt(i + n, t), -1}}, Sense::Equal, 0);
      m.add_row(
          "sync_unload_" + std::to_string(i + 1) + "_" + std::to_string(t),
          {{L.xt(i, t), 1}, {L.xt(i + 2 * n, t + job.load + job.proc), -1}},
          Sense::Equal, 0);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// LP text export.  Deterministic: fixed section order, variables and rows in
// model order, integer coefficients, lines wrapped at a fixed width.
// ---------------------------------------------------------------------------

inline std::string export_lp(const MilpModel& model) {
  std::string out;
  out += "\\ p2s1 model " + model.name + "\n";
  out += "Minimize\n obj: " + model.vars[static_cast<std::size_t>(model.objective)].name +
         "\nSubject To\n";
  for (const LinearRow& row : model.rows) {
    std::string line = " " + row.tag + ":";
    std::size_t line_begin = 0;
    bool first = true;
    for (const Term& term : row.terms) {
      std::string piece = first ? (term.coef < 0 ? " - " : " ") : (term.coef < 0 ? " - " : " + ");
      const Time mag = term.coef < 0 ? -term.coef : term.coef;
      if (mag != 1) piece += std::to_string(mag) + " ";
      piece += model.vars[static_cast<std::size_t>(term.var)].name;
      if (line.size() - line_begin + piece.size() > 230) {
        line += "\n  ";
        line_begin = line.size();
      }
      line += piece;
      first = false;
    }
    switch (row.sense) {
      case Sense::LessEq: line += " <= "; break;
      case Sense::GreaterEq: line += " >= "; break;
      case Sense::Equal: line += " = "; break;
    }
    line += std::to_string(row.rhs);
    out += line + "\n";
  }
  out += "Bounds\n";
  for (const Variable& v : model.vars)
    if (v.kind == VarKind::Continuous) out += " " + v.name + " >= 0\n";
  if (model.binary_count() > 0) {
    out += "Binaries\n";
    for (const Variable& v : model.vars)
      if (v.kind == VarKind::Binary) out += " " + v.name + "\n";
  }
  out += "End\n";
  return out;
}

// Tags of all rows the assignment violates, in model order.
inline std::vector<std::string> violated_rows(const MilpModel& model,
                                              const std::vector<Time>& values) {
  if (values.size() != model.vars.size())
    throw InvalidInput("violated_rows: value vector does not match the model");
  std::vector<std::string> out;
  for (const LinearRow& row : model.rows) {
    Time lhs = 0;
    for (const Term& term : row.terms)
      lhs += term.coef * values[static_cast<std::size_t>(term.var)];
    const bool ok = row.sense == Sense::LessEq      ? lhs <= row.rhs
                    : row.sense == Sense::GreaterEq ? lhs >= row.rhs
                                                    : lhs == row.rhs;
    if (!ok) out.push_back(row.tag);
  }
  return out;
}

namespace detail {

// Operation completion times a schedule induces (whole job, load, unload).
inline std::vector<Time> op_completions(const Instance& instance,
                                        const Schedule& schedule) {
  const int n = instance.size();
  std::vector<Time> c(static_cast<std::size_t>(3 * n));
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Job& job = instance.jobs[ui];
    c[ui] = schedule.completion[ui];
    c[ui + static_cast<std::size_t>(n)] = schedule.start[ui] + job.load;
    c[ui + static_cast<std::size_t>(2 * n)] = schedule.completion[ui];
  }
  return c;
}

}  // namespace detail

// The variable assignment a schedule induces on the completion-time model:
// completions as stored, machine indicators from the assignment, order
// binaries from completion order (ties by operation id, which only happen
// across machines where the order is free).
inline std::vector<Time> cf_values(const Instance& instance,
                                   const Schedule& schedule) {
  const int n = instance.size();
  const CfLayout L(n);
  const std::vector<Time> c = detail::op_completions(instance, schedule);
  std::vector<Time> values(static_cast<std::size_t>(L.var_count()), 0);
  values[static_cast<std::size_t>(L.cmax())] = schedule.makespan;
  for (int op = 0; op < 3 * n; ++op)
    values[static_cast<std::size_t>(L.c(op))] =
        c[static_cast<std::size_t>(op)];
  const auto before = [&](int a, int b) {
    return std::pair(c[static_cast<std::size_t>(a)], a) <
           std::pair(c[static_cast<std::size_t>(b)], b);
  };
  for (int i = 0; i < n; ++i) {
    values[static_cast<std::size_t>(
        L.x(i, schedule.machine[static_cast<std::size_t>(i)]))] = 1;
    for (int j = 0; j < n; ++j)
      if (j != i && before(i, j))
        values[static_cast<std::size_t>(L.z(i, j))] = 1;
  }
  for (int a = n; a < 3 * n; ++a)
    for (int b = n; b < 3 * n; ++b)
      if (b != a && before(a, b))
        values[static_cast<std::size_t>(L.y(a, b))] = 1;
  return values;
}

// Start indicators the schedule induces on the time-indexed model.
inline std::vector<Time> tif_values(const Instance& instance,
                                    const Schedule& schedule,
                                    const TifLayout& layout) {
  const int n = instance.size();
  std::vector<Time> values(static_cast<std::size_t>(layout.var_count()), 0);
  values[static_cast<std::size_t>(layout.cmax())] = schedule.makespan;
  for (int i = 0; i < n; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const Job& job = instance.jobs[ui];
    const Time s = schedule.start[ui];
    values[static_cast<std::size_t>(layout.xt(i, s))] = 1;
    values[static_cast<std::size_t>(layout.xt(i + n, s))] = 1;
    values[static_cast<std::size_t>(
        layout.xt(i + 2 * n, s + job.load + job.proc))] = 1;
  }
  return values;
}

// Feasibility audit of a schedule against the full completion-time model.
// A feasible decode must come back clean; a corrupted schedule names the
// violated rows.
inline std::vector<std::string> check_cf(const Instance& instance,
                                         const Schedule& schedule) {
  return violated_rows(build_cf(instance), cf_values(instance, schedule));
}

// ---------------------------------------------------------------------------
// External solver bridge.  The solver is any executable invoked as
//   <solver_command> <model.lp> <solution_out> <time_limit_seconds>
// that writes "Objective: <value>" plus one "<name> <value>" line per
// variable (index-prefixed lines, as CBC emits, are accepted too).
// ---------------------------------------------------------------------------

struct SolverOutcome {
  double objective = 0;
  std::optional<double> bound;
  std::string status;
  std::vector<std::pair<std::string, double>> values;
};

inline std::optional<SolverOutcome> solve_external(
    const MilpModel& model, const std::string& solver_command,
    double time_limit_s) {
  namespace fs = std::filesystem;
  static std::atomic<unsigned> counter{0};
  const std::string stem =
      "p2s1_" + std::to_string(static_cast<unsigned long>(::getpid())) + "_" +
      std::to_string(counter.fetch_add(1));
  const fs::path dir = fs::temp_directory_path();
  const fs::path lp = dir / (stem + ".lp");
  const fs::path sol = dir / (stem + ".sol");
  const fs::path log = dir / (stem + ".log");
  {
    std::ofstream out(lp);
    if (!out) throw EnvironmentError("cannot write " + lp.string());
    out << export_lp(model);
  }
  const auto cleanup = [&] {
    std::error_code ec;
    fs::remove(lp, ec);
    fs::remove(sol, ec);
    fs::remove(log, ec);
  };

  char limit[32];
  std::snprintf(limit, sizeof limit, "%.3f", time_limit_s);
  const std::string command = solver_command + " '" + lp.string() + "' '" +
                              sol.string() + "' " + limit + " > '" +
                              log.string() + "' 2>&1";
  const int rc = std::system(command.c_str());

  const auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const std::string log_text = slurp(log);

  if (rc == -1 || (rc != 0 && !fs::exists(sol))) {
    cleanup();
    throw EnvironmentError("solver command failed (" + std::to_string(rc) +
                           "): " + solver_command +
                           (log_text.empty() ? "" : "\n" + log_text));
  }
  if (!fs::exists(sol)) {
    cleanup();
    throw SolverProtocolError("solver wrote no solution file; output:\n" +
                              log_text);
  }
  const std::string sol_text = slurp(sol);
  cleanup();

  std::unordered_map<std::string, int> known;
  for (std::size_t i = 0; i < model.vars.size(); ++i)
    known.emplace(model.vars[i].name, static_cast<int>(i));

  SolverOutcome outcome;
  bool have_objective = false;
  std::istringstream lines(sol_text);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream ls(line);
    std::vector<std::string> tok;
    std::string w;
    while (ls >> w) tok.push_back(w);
    if (tok.empty()) continue;
    if (tok[0] == "Status:" && tok.size() >= 2) {
      outcome.status = tok[1];
    } else if (tok[0] == "Objective:" && tok.size() >= 2) {
      outcome.objective = std::strtod(tok[1].c_str(), nullptr);
      have_objective = true;
    } else if (tok[0] == "Bound:" && tok.size() >= 2) {
      outcome.bound = std::strtod(tok[1].c_str(), nullptr);
    } else if (tok.size() >= 2 && known.count(tok[0])) {
      outcome.values.emplace_back(tok[0], std::strtod(tok[1].c_str(), nullptr));
    } else if (tok.size() >= 3 && known.count(tok[1])) {
      // CBC-style "<index> <name> <value> <reduced cost>" rows, plus its
      // "Optimal - objective value <v>" banner handled below.
      outcome.values.emplace_back(tok[1], std::strtod(tok[2].c_str(), nullptr));
    } else if (!have_objective) {
      const auto pos = line.find("objective value");
      if (pos != std::string::npos) {
        outcome.objective = std::strtod(
            line.c_str() + pos + sizeof("objective value") - 1, nullptr);
        have_objective = true;
        if (outcome.status.empty()) outcome.status = tok[0];
      }
    }
  }
  if (!have_objective) {
    if (outcome.status == "timeout" || outcome.status == "unknown" ||
        log_text.find("time limit") != std::string::npos)
      return std::nullopt;
    // A proven infeasible or unbounded model is a definite answer, not a
    // protocol failure; the objective stays meaningless.
    if (outcome.status == "infeasible" || outcome.status == "unbounded")
      return outcome;
    throw SolverProtocolError("no objective in solver output:\n" + sol_text +
                              (log_text.empty() ? "" : "\n" + log_text));
  }
  return outcome;
}

}  // namespace p2s1
