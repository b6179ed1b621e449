#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "planner/decomposition.hpp"
#include "planner/fork_engine.hpp"
#include "planner/fraction.hpp"
#include "planner/ifork_engine.hpp"
#include "planner/search.hpp"
#include "planner/task.hpp"

namespace planner {

/** Integer rounding applied on top of the exact additive estimate. */
enum class Rounding {
  Auto,  ///< round finite values up, but only when every original cost is an integer
  None,  ///< always report the exact rational value
};

/**
 * An additive abstraction heuristic ready for evaluation: the pruned ensemble
 * plus one precomputed cost table per abstract task.
 *
 * Tasks whose center domain fits the closed-form engines (binary fork roots,
 * sink domains of at most three values) get a fork or inverted-fork database.
 * Any other task — which only arises under identity center mappings — falls
 * back to an explicit cost-to-goal table over its full abstract space.
 */
struct HeuristicEnsemble {
  AbstractionEnsemble ensemble;
  std::vector<ForkDatabase> fork_dbs;
  std::vector<IForkDatabase> ifork_dbs;

  /** Exact cost-to-goal for every state of one abstract task, mixed-radix
      indexed by the task's local variable order. */
  struct ExplicitTable {
    std::vector<int> domains;
    std::vector<Fraction> h;
  };
  std::vector<ExplicitTable> explicit_tables;

  enum class Source { ForkDb, IForkDb, Explicit };
  /** Per abstract task: which table kind serves it, and the index within
      the corresponding vector.  Parallel to ensemble.tasks. */
  std::vector<std::pair<Source, int>> dispatch;

  Rounding rounding = Rounding::Auto;
  bool integral_costs = true;  ///< every original action cost is an integer
};

namespace detail {

/** Local index of the subgraph center within the abstract task. */
inline int center_local(const AbstractTask& at) {
  for (std::size_t i = 0; i < at.variables.size(); ++i) {
    if (at.variables[i] == at.origin.center) return static_cast<int>(i);
  }
  throw std::logic_error("abstract task lost its center variable");
}

}  // namespace detail

/**
 * Decompose the task and precompute one database per surviving abstract task.
 *
 * An empty ensemble (a task whose causal graph yields no usable subgraphs) is
 * legal; the resulting heuristic is identically zero.  Throws only when an
 * identity-mapped center leaves an abstract task that is both outside the
 * closed-form engines and too large (over 10^5 abstract states) to solve
 * explicitly.
 */
inline HeuristicEnsemble build_heuristic(const Task& task, EnsembleKind kind,
                                         const Policies& policies = {},
                                         Rounding rounding = Rounding::Auto) {
  HeuristicEnsemble h;
  h.ensemble = build_ensemble(task, kind, policies);
  h.rounding = rounding;
  for (const Action& a : task.actions) {
    if (!a.cost.is_integer()) {
      h.integral_costs = false;
      break;
    }
  }
  for (const AbstractTask& at : h.ensemble.tasks) {
    const int center_domain = at.domain_sizes[detail::center_local(at)];
    if (at.origin.kind == SubgraphKind::Fork && center_domain == 2) {
      h.dispatch.emplace_back(HeuristicEnsemble::Source::ForkDb,
                              static_cast<int>(h.fork_dbs.size()));
      h.fork_dbs.push_back(build_fork_db(at));
    } else if (at.origin.kind == SubgraphKind::IFork && center_domain <= 3) {
      h.dispatch.emplace_back(HeuristicEnsemble::Source::IForkDb,
                              static_cast<int>(h.ifork_dbs.size()));
      h.ifork_dbs.push_back(build_ifork_db(at));
    } else {
      auto table = full_space_h_star(materialize(at, task));
      if (!table) {
        throw std::runtime_error(
            "abstract task too large to solve explicitly; "
            "use a domain-abstracting center policy");
      }
      h.dispatch.emplace_back(HeuristicEnsemble::Source::Explicit,
                              static_cast<int>(h.explicit_tables.size()));
      h.explicit_tables.push_back({at.domain_sizes, std::move(*table)});
    }
  }
  return h;
}

/**
 * The exact additive estimate: the sum over all abstract tasks of the
 * database value at the projected state.  Any infinite component marks the
 * state as a dead end and infinity is returned immediately.
 */
inline Fraction evaluate_exact(const HeuristicEnsemble& h, const State& state) {
  Fraction total(0);
  std::vector<int> abstract_state;  // reused across tasks; evaluation is hot
  for (std::size_t i = 0; i < h.ensemble.tasks.size(); ++i) {
    const AbstractTask& at = h.ensemble.tasks[i];
    abstract_state.resize(at.variables.size());
    for (std::size_t j = 0; j < at.variables.size(); ++j) {
      abstract_state[j] = at.map_value(at.variables[j], state[at.variables[j]]);
    }
    Fraction value;
    const auto [source, index] = h.dispatch[i];
    switch (source) {
      case HeuristicEnsemble::Source::ForkDb:
        value = eval_fork_db(h.fork_dbs[index], abstract_state);
        break;
      case HeuristicEnsemble::Source::IForkDb:
        value = eval_ifork_db(h.ifork_dbs[index], abstract_state);
        break;
      case HeuristicEnsemble::Source::Explicit: {
        const HeuristicEnsemble::ExplicitTable& table = h.explicit_tables[index];
        std::uint64_t rank = 0;
        for (std::size_t j = 0; j < table.domains.size(); ++j) {
          rank = rank * static_cast<std::uint64_t>(table.domains[j]) +
                 static_cast<std::uint64_t>(abstract_state[j]);
        }
        value = table.h[rank];
        break;
      }
    }
    if (value.is_infinite()) return Fraction::infinity();
    total = total + value;
  }
  return total;
}

/** Smallest integer at least as large as the (non-negative, finite) value. */
inline Fraction round_up(const Fraction& f) {
  if (f.is_infinite() || f.is_integer()) return f;
  return Fraction(f.numerator() / f.denominator() + 1);
}

/**
 * The estimate actually handed to the search: `evaluate_exact` with the
 * ensemble's rounding applied last.  Rounding up preserves both admissibility
 * and consistency precisely because it is only enabled when every original
 * cost — and hence every true goal distance — is an integer.
 */
inline Fraction evaluate(const HeuristicEnsemble& h, const State& state) {
  const Fraction exact = evaluate_exact(h, state);
  if (h.rounding == Rounding::Auto && h.integral_costs) return round_up(exact);
  return exact;
}

/**
 * Delete-relaxation critical-path estimate: the cheapest cost at which each
 * fact can first be reached when an action fires once the costliest of its
 * preconditions is reached, maximized over the goal facts.
 */
inline Fraction h_max(const Task& task, const State& state) {
  std::vector<std::size_t> offset(task.variables.size() + 1, 0);
  for (std::size_t v = 0; v < task.variables.size(); ++v) {
    offset[v + 1] = offset[v] + static_cast<std::size_t>(task.variables[v].domain_size);
  }
  std::vector<Fraction> fact_cost(offset.back(), Fraction::infinity());
  for (std::size_t v = 0; v < task.variables.size(); ++v) {
    fact_cost[offset[v] + static_cast<std::size_t>(state.values[v])] = Fraction(0);
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const Action& a : task.actions) {
      Fraction trigger(0);
      for (const auto& [var, value] : a.precondition.entries()) {
        const Fraction& c = fact_cost[offset[var] + static_cast<std::size_t>(value)];
        if (c.is_infinite()) {
          trigger = Fraction::infinity();
          break;
        }
        if (c > trigger) trigger = c;
      }
      if (trigger.is_infinite()) continue;
      const Fraction reach = trigger + a.cost;
      for (const auto& [var, value] : a.effect.entries()) {
        Fraction& slot = fact_cost[offset[var] + static_cast<std::size_t>(value)];
        if (reach < slot) {
          slot = reach;
          changed = true;
        }
      }
    }
  }

  Fraction best(0);
  for (const auto& [var, value] : task.goal.entries()) {
    const Fraction& c = fact_cost[offset[var] + static_cast<std::size_t>(value)];
    if (c.is_infinite()) return Fraction::infinity();
    if (c > best) best = c;
  }
  return best;
}

/** Zero at goal states, otherwise the cheapest applicable action's cost
    (infinite when nothing applies — such a state is a dead end). */
inline Fraction blind(const Task& task, const State& state) {
  if (is_goal(state, task)) return Fraction(0);
  Fraction best = Fraction::infinity();
  for (const Action& a : task.actions) {
    if (applicable(a, state) && a.cost < best) best = a.cost;
  }
  return best;
}

/** Zero at goal states, one everywhere else. */
inline Fraction blind_unit(const Task& task, const State& state) {
  return is_goal(state, task) ? Fraction(0) : Fraction(1);
}

}  // namespace planner
