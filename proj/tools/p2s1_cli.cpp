#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

#include "p2s1/bench.hpp"
#include "p2s1/bounds.hpp"
#include "p2s1/core.hpp"
#include "p2s1/exact.hpp"
#include "p2s1/metaheuristics.hpp"
#include "p2s1/milp.hpp"
#include "p2s1/neighborhoods.hpp"

using namespace p2s1;

namespace {

Instance load_instance(const std::string& path) {
  if (path == "-") return parse_instance(std::cin);
  return read_instance_file(path);
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw EnvironmentError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw EnvironmentError("write failed: " + path);
}

std::string permutation_line(const Permutation& perm) {
  std::string line;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (i > 0) line += ' ';
    line += std::to_string(perm[i]);
  }
  return line;
}

std::string fixed4(double value) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.4f", value);
  return buf;
}

MilpModel build_form(const Instance& instance, const std::string& form,
                     std::optional<Time> horizon) {
  if (form == "cf") return build_cf(instance);
  if (form == "cf+") return build_cf(instance, {.valid_inequalities = true});
  if (form == "tif") return build_tif(instance, {.horizon = horizon});
  if (form == "tif+") {
    if (!horizon)
      throw InvalidInput("form tif+ needs --horizon (a known upper bound)");
    return build_tif(instance, {.horizon = horizon});
  }
  throw InvalidInput("unknown form: " + form + " (use cf, cf+, tif or tif+)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"solver toolkit for two identical machines sharing one server"};
  app.require_subcommand(1);
  int exit_code = 0;

  // generate ---------------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "draw random instances");
  int gen_n = 10;
  std::string gen_alpha = "a2";
  int gen_count = 1;
  std::uint64_t gen_seed = 1;
  bool gen_shared = false;
  std::string gen_out;
  gen->add_option("--n", gen_n, "jobs per instance")->required();
  gen->add_option("--alpha", gen_alpha, "fraction class: a1, a2 or a3");
  gen->add_option("--count", gen_count, "instances to draw");
  gen->add_option("--seed", gen_seed, "master seed");
  gen->add_flag("--shared-alpha", gen_shared,
                "one fraction per job for both load and unload");
  gen->add_option("--out", gen_out,
                  "output file (count 1) or directory (count > 1)");
  gen->callback([&] {
    GeneratorSpec spec{gen_n, alpha_class(gen_alpha), gen_count, gen_seed,
                       gen_shared};
    const std::vector<Instance> instances = generate(spec);
    if (gen_count == 1) {
      if (gen_out.empty())
        std::cout << write_instance(instances[0]);
      else
        write_text_file(gen_out, write_instance(instances[0]));
      return;
    }
    if (gen_out.empty())
      throw InvalidInput("--count above 1 needs --out DIRECTORY");
    std::error_code ec;
    std::filesystem::create_directories(gen_out, ec);
    if (ec) throw EnvironmentError("cannot create directory " + gen_out);
    for (int rep = 0; rep < gen_count; ++rep) {
      const auto path = std::filesystem::path(gen_out) /
                        ("inst_" + gen_alpha + "_n" + std::to_string(gen_n) +
                         "_" + std::to_string(rep) + ".txt");
      write_text_file(path.string(),
                      write_instance(instances[static_cast<std::size_t>(rep)]));
      std::cout << path.string() << "\n";
    }
  });

  // bound ------------------------------------------------------------------
  auto* bound = app.add_subcommand("bound", "lower bounds and closed forms");
  std::string bound_path;
  bound->add_option("instance", bound_path, "instance file, - for stdin")
      ->required();
  bound->callback([&] {
    const Instance instance = load_instance(bound_path);
    const LowerBounds bounds = lower_bounds(instance);
    std::cout << "workload " << bounds.workload.str() << "\n";
    std::cout << "server " << bounds.server << "\n";
    std::cout << "lb_t " << bounds.best.str() << "\n";
    if (const auto poly = recognize_polynomial_case(instance))
      std::cout << "closed_form " << to_string(poly->kind) << " "
                << poly->optimal_makespan << "\n";
    else
      std::cout << "closed_form none\n";
  });

  // oracle -----------------------------------------------------------------
  auto* oracle = app.add_subcommand("oracle", "exhaustive exact solve");
  std::string oracle_path;
  int oracle_limit = 10;
  oracle->add_option("instance", oracle_path, "instance file, - for stdin")
      ->required();
  oracle->add_option("--limit", oracle_limit,
                     "refuse instances larger than this");
  oracle->callback([&] {
    const Instance instance = load_instance(oracle_path);
    const OracleResult result = brute_force(instance, oracle_limit);
    std::cout << "optimal " << result.optimal << "\n";
    std::cout << "permutation " << permutation_line(result.best) << "\n";
    std::cout << "optima " << result.optima << "\n";
    std::cout << "examined " << result.examined << "\n";
  });

  // solve ------------------------------------------------------------------
  auto* solve = app.add_subcommand("solve", "metaheuristic search");
  std::string solve_path;
  std::string solve_method = "gvns1";
  double solve_tmax = 10.0;
  std::uint64_t solve_iters = 0;
  int solve_kmax = 15;
  double solve_alpha = 0;
  std::uint64_t solve_seed = 1;
  Time solve_target = 0;
  bool solve_stop_lb = false;
  bool solve_trace = false;
  std::string solve_schedule;
  solve->add_option("instance", solve_path, "instance file, - for stdin")
      ->required();
  solve->add_option("--method", solve_method, "gvns1, gvns2 or grasp");
  solve->add_option("--tmax", solve_tmax, "wall clock budget in seconds");
  auto* iters_opt = solve->add_option(
      "--iters", solve_iters,
      "rounds budget; replaces the wall clock and replays bit-exactly");
  solve->add_option("--kmax", solve_kmax, "strongest shake level");
  auto* alpha_opt = solve->add_option(
      "--alpha-rcl", solve_alpha,
      "fixed candidate-list width for grasp; redrawn per round when unset");
  solve->add_option("--seed", solve_seed, "search seed");
  auto* target_opt =
      solve->add_option("--target", solve_target, "stop at this makespan");
  solve->add_flag("--stop-at-lb", solve_stop_lb,
                  "stop when the rounded-up lower bound is reached");
  solve->add_flag("--trace", solve_trace, "print one line per improvement");
  solve->add_option("--schedule", solve_schedule,
                    "write the decoded schedule to this file");
  solve->callback([&] {
    const Instance instance = load_instance(solve_path);
    const Method method = parse_method(solve_method);
    SearchConfig config;
    config.time_limit_s = solve_tmax;
    if (*iters_opt) config.max_rounds = solve_iters;
    config.k_max = solve_kmax;
    if (*alpha_opt) config.alpha = solve_alpha;
    config.seed = solve_seed;
    config.initial = method == Method::Gvns2
                         ? SearchConfig::Initial::Random
                         : SearchConfig::Initial::ImprovedIdentity;
    const HalfIntegral lb = lb_t(instance);
    if (solve_stop_lb) config.target = lb.ceil();
    if (*target_opt) config.target = solve_target;

    const SearchResult result = method == Method::Grasp
                                    ? grasp(instance, config)
                                    : gvns(instance, config);
    std::cout << "makespan " << result.makespan << "\n";
    std::cout << "permutation " << permutation_line(result.best) << "\n";
    std::cout << "lb_t " << lb.str() << "\n";
    std::cout << "gap_lbt " << format_gap_lbt(result.makespan, lb) << "\n";
    std::cout << "rounds " << result.rounds << "\n";
    std::cout << "best_round " << result.round_to_best << "\n";
    std::cout << "time_to_best "
              << (*iters_opt ? std::string("-") : fixed4(result.time_to_best_s))
              << "\n";
    if (solve_trace)
      for (const TracePoint& point : result.trace)
        std::cout << "trace " << point.round << " " << point.makespan << "\n";
    if (!solve_schedule.empty())
      write_text_file(solve_schedule,
                      write_schedule(decode(instance, result.best)));
  });

  // validate ---------------------------------------------------------------
  auto* check = app.add_subcommand("validate", "audit a schedule file");
  std::string check_instance;
  std::string check_schedule;
  check->add_option("instance", check_instance, "instance file")->required();
  check->add_option("schedule", check_schedule, "schedule file")->required();
  check->callback([&] {
    const Instance instance = load_instance(check_instance);
    const Schedule schedule = read_schedule_file(instance, check_schedule);
    const std::vector<Violation> violations = validate(instance, schedule);
    if (violations.empty()) {
      const IdleTimes idle = idle_times(instance, schedule);
      std::cout << "ok\n";
      std::cout << "makespan " << schedule.makespan << "\n";
      std::cout << "idle_m1 " << idle.machine[0] << "\n";
      std::cout << "idle_m2 " << idle.machine[1] << "\n";
      std::cout << "idle_total " << idle.total << "\n";
      return;
    }
    for (const Violation& v : violations)
      std::cout << "violation " << v.rule << " " << v.job_a << " " << v.job_b
                << " " << v.detail << "\n";
    exit_code = 2;
  });

  // export-milp ------------------------------------------------------------
  auto* expo = app.add_subcommand("export-milp", "write an LP format model");
  std::string expo_path;
  std::string expo_form = "cf";
  Time expo_horizon = 0;
  std::string expo_out;
  expo->add_option("instance", expo_path, "instance file, - for stdin")
      ->required();
  expo->add_option("--form", expo_form, "cf, cf+, tif or tif+");
  auto* horizon_opt = expo->add_option(
      "--horizon", expo_horizon,
      "latest completion period for the time indexed forms");
  expo->add_option("--out", expo_out, "output file; stdout when omitted");
  expo->callback([&] {
    const Instance instance = load_instance(expo_path);
    const std::optional<Time> horizon =
        *horizon_opt ? std::optional<Time>(expo_horizon) : std::nullopt;
    const std::string lp = export_lp(build_form(instance, expo_form, horizon));
    if (expo_out.empty())
      std::cout << lp;
    else
      write_text_file(expo_out, lp);
  });

  // solve-milp -------------------------------------------------------------
  auto* smilp = app.add_subcommand("solve-milp", "solve through an external "
                                                 "LP solver command");
  std::string smilp_path;
  std::string smilp_form = "cf+";
  Time smilp_horizon = 0;
  std::string smilp_solver;
  double smilp_tmax = 60.0;
  smilp->add_option("instance", smilp_path, "instance file, - for stdin")
      ->required();
  smilp->add_option("--form", smilp_form, "cf, cf+, tif or tif+");
  auto* smilp_horizon_opt =
      smilp->add_option("--horizon", smilp_horizon,
                        "latest completion period for the time indexed forms");
  smilp
      ->add_option("--solver", smilp_solver,
                   "command run as: CMD model.lp solution.out seconds")
      ->required();
  smilp->add_option("--tmax", smilp_tmax, "solver time limit in seconds");
  smilp->callback([&] {
    const Instance instance = load_instance(smilp_path);
    const std::optional<Time> horizon =
        *smilp_horizon_opt ? std::optional<Time>(smilp_horizon) : std::nullopt;
    const MilpModel model = build_form(instance, smilp_form, horizon);
    const auto outcome = solve_external(model, smilp_solver, smilp_tmax);
    if (!outcome) {
      std::cout << "status timeout\n";
      return;
    }
    std::cout << "status " << outcome->status << "\n";
    if (outcome->status != "infeasible" && outcome->status != "unbounded") {
      char buf[48];
      std::snprintf(buf, sizeof buf, "%.6g", outcome->objective);
      std::cout << "objective " << buf << "\n";
      if (outcome->bound) {
        std::snprintf(buf, sizeof buf, "%.6g", *outcome->bound);
        std::cout << "bound " << buf << "\n";
      }
    }
  });

  // bench ------------------------------------------------------------------
  auto* bench = app.add_subcommand("bench", "run the full experiment grid");
  std::vector<int> bench_sizes;
  std::vector<std::string> bench_alphas = {"a1", "a2", "a3"};
  int bench_count = 10;
  std::uint64_t bench_seed = 1;
  bool bench_shared = false;
  std::vector<std::string> bench_methods = {"gvns1", "gvns2", "grasp"};
  double bench_tmax = 0;
  std::uint64_t bench_iters = 0;
  int bench_kmax = 15;
  double bench_alpha_rcl = 0;
  int bench_threads = 1;
  bool bench_stop_lb = false;
  std::string bench_out;
  bench->add_option("--n", bench_sizes, "instance sizes")
      ->required()
      ->delimiter(',');
  bench->add_option("--alpha", bench_alphas, "fraction classes")
      ->delimiter(',');
  bench->add_option("--count", bench_count, "instances per size and class");
  bench->add_option("--seed", bench_seed, "master seed");
  bench->add_flag("--shared-alpha", bench_shared,
                  "one fraction per job for both load and unload");
  bench->add_option("--method", bench_methods, "methods to run")
      ->delimiter(',');
  auto* bench_tmax_opt = bench->add_option(
      "--tmax", bench_tmax, "seconds per run; default steps with size");
  auto* bench_iters_opt = bench->add_option(
      "--iters", bench_iters,
      "rounds budget; replaces the wall clock and replays bit-exactly");
  bench->add_option("--kmax", bench_kmax, "strongest shake level");
  auto* bench_rcl_opt = bench->add_option("--alpha-rcl", bench_alpha_rcl,
                                          "fixed candidate-list width");
  bench->add_option("--threads", bench_threads, "parallel runs");
  bench->add_flag("--stop-at-lb", bench_stop_lb,
                  "stop each run at the rounded-up lower bound");
  bench->add_option("--out", bench_out, "CSV file; stdout when omitted");
  bench->callback([&] {
    std::vector<AlphaClass> classes;
    for (const std::string& name : bench_alphas)
      classes.push_back(alpha_class(name));
    const std::vector<BenchCell> cells =
        make_cells(bench_sizes, classes, bench_count, bench_seed, bench_shared);
    ExperimentConfig config;
    config.seed = bench_seed;
    config.k_max = bench_kmax;
    if (*bench_tmax_opt) config.time_limit_s = bench_tmax;
    if (*bench_iters_opt) config.max_rounds = bench_iters;
    if (*bench_rcl_opt) config.alpha_rcl = bench_alpha_rcl;
    config.threads = bench_threads;
    config.stop_at_lower_bound = bench_stop_lb;
    config.methods.clear();
    for (const std::string& name : bench_methods)
      config.methods.push_back(parse_method(name));
    const std::string csv = to_csv(run_experiment(cells, config));
    if (bench_out.empty())
      std::cout << csv;
    else
      write_text_file(bench_out, csv);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const SolverProtocolError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const EnvironmentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return exit_code;
}
