#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "planner/decomposition.hpp"
#include "planner/generators.hpp"
#include "planner/graphs.hpp"
#include "planner/heuristics.hpp"
#include "planner/sas_io.hpp"
#include "planner/search.hpp"
#include "planner/task.hpp"

namespace planner::cli {

inline constexpr int kExitSolved = 0;      ///< solved / evaluation succeeded
inline constexpr int kExitUnsolvable = 1;  ///< proven unsolvable
inline constexpr int kExitLimit = 2;       ///< node/time cap hit or oracle refusal
inline constexpr int kExitUsage = 3;       ///< usage or parse error

namespace detail {

/** Shared heuristic/policy/rounding flag set. */
struct HeuristicFlags {
  std::string heuristic = "forkifork";
  std::string root = "leave-one-out";
  std::string sink = "dist-goal-ternary";
  std::string round = "auto";
};

inline void add_heuristic_flags(CLI::App& cmd, HeuristicFlags& flags, bool ensembles_only) {
  const std::vector<std::string> names =
      ensembles_only ? std::vector<std::string>{"fork", "ifork", "forkifork"}
                     : std::vector<std::string>{"fork", "ifork", "forkifork", "hmax", "blind"};
  cmd.add_option("--heuristic", flags.heuristic, "heuristic to use")
      ->check(CLI::IsMember(names))
      ->capture_default_str();
  cmd.add_option("--root-abstraction", flags.root, "fork root domain mapping family")
      ->check(CLI::IsMember({"leave-one-out", "dist-init-binary"}))
      ->capture_default_str();
  cmd.add_option("--sink-abstraction", flags.sink, "inverted-fork sink domain mapping family")
      ->check(CLI::IsMember({"dist-goal-ternary", "dist-init-ternary", "dist-init-binary"}))
      ->capture_default_str();
  cmd.add_option("--round", flags.round, "round estimates up on integer-cost tasks")
      ->check(CLI::IsMember({"auto", "none"}))
      ->capture_default_str();
}

inline Policies parse_policies(const HeuristicFlags& flags) {
  Policies p;
  p.root = flags.root == "dist-init-binary" ? MappingPolicy::DistInitBinary
                                            : MappingPolicy::LeaveOneOut;
  if (flags.sink == "dist-init-ternary") {
    p.sink = MappingPolicy::DistInitTernary;
  } else if (flags.sink == "dist-init-binary") {
    p.sink = MappingPolicy::DistInitBinary;
  } else {
    p.sink = MappingPolicy::DistGoalTernary;
  }
  return p;
}

inline EnsembleKind parse_kind(const std::string& name) {
  if (name == "fork") return EnsembleKind::Fork;
  if (name == "ifork") return EnsembleKind::IFork;
  return EnsembleKind::ForkIFork;
}

inline Task load_task(const std::string& path) {
  if (path == "-") return parse_sas(std::cin);
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open " + path);
  return parse_sas(file);
}

/** The selected estimator plus its exact (unrounded) twin for reporting. */
struct SelectedHeuristic {
  std::function<Fraction(const State&)> rounded;
  std::function<Fraction(const State&)> exact;
};

inline SelectedHeuristic make_heuristic(const Task& task, const HeuristicFlags& flags) {
  SelectedHeuristic sel;
  if (flags.heuristic == "hmax") {
    sel.rounded = sel.exact = [&task](const State& s) { return h_max(task, s); };
  } else if (flags.heuristic == "blind") {
    sel.rounded = sel.exact = [&task](const State& s) { return blind(task, s); };
  } else {
    const Rounding rounding = flags.round == "none" ? Rounding::None : Rounding::Auto;
    auto ensemble = std::make_shared<HeuristicEnsemble>(build_heuristic(
        task, parse_kind(flags.heuristic), parse_policies(flags), rounding));
    sel.rounded = [ensemble](const State& s) { return evaluate(*ensemble, s); };
    sel.exact = [ensemble](const State& s) { return evaluate_exact(*ensemble, s); };
  }
  return sel;
}

inline void write_plan_text(const Task& task, const Plan& plan, std::ostream& out) {
  for (const int a : plan.actions) out << "(" << task.actions[a].name << ")\n";
  out << "; cost = " << plan.cost.str() << "\n";
}

inline int run_plan(const std::string& input, const HeuristicFlags& flags,
                    std::uint64_t max_nodes, double max_seconds, const std::string& plan_file,
                    const std::string& stats_file) {
  const Task task = load_task(input);
  const SelectedHeuristic h = make_heuristic(task, flags);
  SearchLimits limits;
  limits.max_nodes = max_nodes;
  limits.max_seconds = max_seconds;
  const SearchResult result = astar(task, h.rounded, limits);

  std::ostringstream stats;
  stats << "expanded=" << result.stats.expanded << "\n";
  stats << "generated=" << result.stats.generated << "\n";
  stats << "h_initial=" << result.stats.h_initial.str() << "\n";
  if (result.status == SearchStatus::Solved) {
    stats << "plan_cost=" << result.plan->cost.str() << "\n";
  }
  stats << "time_ms=" << std::llround(result.stats.elapsed_seconds * 1000.0) << "\n";

  if (result.status == SearchStatus::Solved) {
    if (plan_file.empty()) {
      write_plan_text(task, *result.plan, std::cout);
    } else {
      std::ofstream file(plan_file);
      if (!file) throw std::runtime_error("cannot write " + plan_file);
      write_plan_text(task, *result.plan, file);
    }
  }
  std::cout << stats.str();
  if (!stats_file.empty()) {
    std::ofstream file(stats_file);
    if (!file) throw std::runtime_error("cannot write " + stats_file);
    file << stats.str();
  }

  switch (result.status) {
    case SearchStatus::Solved: return kExitSolved;
    case SearchStatus::Unsolvable: return kExitUnsolvable;
    case SearchStatus::LimitExceeded: return kExitLimit;
  }
  return kExitUsage;
}

inline int run_eval(const std::string& input, const HeuristicFlags& flags) {
  const Task task = load_task(input);
  const SelectedHeuristic h = make_heuristic(task, flags);
  const Fraction exact = h.exact(task.initial);
  const Fraction rounded = h.rounded(task.initial);
  std::cout << exact.str() << " (→ " << rounded.str() << ")\n";
  return exact.is_infinite() ? kExitUnsolvable : kExitSolved;
}

inline int run_oracle(const std::string& input) {
  const Task task = load_task(input);
  const auto table = dijkstra_oracle(task);
  if (!table) {
    std::cerr << "oracle refused: too many reachable states\n";
    return kExitLimit;
  }
  const Fraction h_star = table->at(task.initial);
  std::cout << h_star.str() << "\n";
  return h_star.is_infinite() ? kExitUnsolvable : kExitSolved;
}

inline int run_gen(const std::string& family, int n) {
  emit_sas(generate({family, n}), std::cout);
  return kExitSolved;
}

inline int run_dump(const std::string& input, bool graphs, bool ensemble,
                    const HeuristicFlags& flags) {
  const Task task = load_task(input);
  if (!graphs && !ensemble) graphs = ensemble = true;
  if (graphs) {
    std::cout << to_dot(causal_graph(task), task);
    for (int v = 0; v < task.num_variables(); ++v) std::cout << to_dot(dtg(task, v), task);
  }
  if (ensemble) {
    const AbstractionEnsemble ens =
        build_ensemble(task, parse_kind(flags.heuristic), parse_policies(flags));
    std::cout << "ensemble tasks=" << ens.tasks.size() << "\n";
    for (std::size_t i = 0; i < ens.tasks.size(); ++i) {
      const AbstractTask& at = ens.tasks[i];
      std::cout << "task " << i
                << (at.origin.kind == SubgraphKind::Fork ? " fork(" : " ifork(")
                << task.variables[at.origin.center].name << ") vars=";
      for (std::size_t j = 0; j < at.variables.size(); ++j) {
        std::cout << (j ? "," : "") << task.variables[at.variables[j]].name;
      }
      std::cout << "\n";
      std::vector<int> reps_per_action(task.actions.size(), 0);
      for (const Representative& rep : at.reps) ++reps_per_action[rep.action];
      for (std::size_t a = 0; a < task.actions.size(); ++a) {
        if (reps_per_action[a] == 0) continue;
        std::cout << "  " << task.actions[a].name << " reps=" << reps_per_action[a]
                  << " cost=" << (task.actions[a].cost / Fraction(ens.rep_count[a])).str()
                  << "\n";
      }
    }
  }
  return kExitSolved;
}

}  // namespace detail

/** Parses arguments and executes the selected subcommand. */
inline int run(int argc, const char* const* argv) {
  CLI::App app{"cost-optimal planner with additive implicit abstraction heuristics"};
  app.require_subcommand(1);

  detail::HeuristicFlags plan_flags;
  std::string plan_input;
  std::uint64_t max_nodes = 0;
  double max_seconds = 0.0;
  std::string plan_file;
  std::string stats_file;
  CLI::App* plan = app.add_subcommand("plan", "find a cost-optimal plan with A*");
  plan->add_option("input", plan_input, "SAS task file, or - for stdin")->required();
  detail::add_heuristic_flags(*plan, plan_flags, false);
  plan->add_option("--max-nodes", max_nodes, "expansion cap (0 = unlimited)");
  plan->add_option("--max-seconds", max_seconds, "wall-clock cap (0 = unlimited)");
  plan->add_option("--plan-file", plan_file, "write the plan here instead of stdout");
  plan->add_option("--stats-file", stats_file, "also write the stats lines here");

  detail::HeuristicFlags eval_flags;
  std::string eval_input;
  CLI::App* eval = app.add_subcommand("eval", "evaluate the heuristic at the initial state");
  eval->add_option("input", eval_input, "SAS task file, or - for stdin")->required();
  detail::add_heuristic_flags(*eval, eval_flags, false);

  std::string gen_family;
  int gen_n = 1;
  CLI::App* gen = app.add_subcommand("gen", "emit a benchmark task as SAS text");
  gen->add_option("family", gen_family,
                  "gripper | logistics-line | two-city-logistics | fork-dominant | "
                  "ifork-dominant")
      ->required();
  gen->add_option("n", gen_n, "size parameter (where applicable)");

  std::string oracle_input;
  CLI::App* oracle = app.add_subcommand("oracle", "exact h*(I) by explicit-state search");
  oracle->add_option("input", oracle_input, "SAS task file, or - for stdin")->required();

  detail::HeuristicFlags dump_flags;
  std::string dump_input;
  bool dump_graphs = false;
  bool dump_ensemble = false;
  CLI::App* dump = app.add_subcommand("dump", "debug dump of graphs and the decomposition");
  dump->add_option("input", dump_input, "SAS task file, or - for stdin")->required();
  dump->add_flag("--graphs", dump_graphs, "causal graph and DTGs as DOT text");
  dump->add_flag("--ensemble", dump_ensemble, "abstract tasks with representative counts");
  detail::add_heuristic_flags(*dump, dump_flags, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitSolved : kExitUsage;
  }

  try {
    if (*plan) {
      return detail::run_plan(plan_input, plan_flags, max_nodes, max_seconds, plan_file,
                              stats_file);
    }
    if (*eval) return detail::run_eval(eval_input, eval_flags);
    if (*gen) return detail::run_gen(gen_family, gen_n);
    if (*oracle) return detail::run_oracle(oracle_input);
    if (*dump) return detail::run_dump(dump_input, dump_graphs, dump_ensemble, dump_flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace planner::cli
