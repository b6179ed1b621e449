#pragma once

#include <algorithm>
#include <deque>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "planner/task.hpp"

namespace planner {

/** Wildcard origin marker for transition arcs of actions without an own-variable precondition. */
constexpr int kAnyValue = -1;

/** Hop-distance value for unreachable nodes. */
constexpr int kInfiniteHops = std::numeric_limits<int>::max();

/**
 * Variable-level dependency graph: arc (u, v) iff some action has v among its
 * effect variables and u != v among its effect or precondition variables.
 */
struct CausalGraph {
  std::vector<std::vector<int>> succ;  // sorted, deduplicated
  std::vector<std::vector<int>> pred;

  friend bool operator==(const CausalGraph&, const CausalGraph&) = default;
};

inline CausalGraph causal_graph(const Task& task) {
  const int n = task.num_variables();
  std::vector<std::vector<bool>> arc(n, std::vector<bool>(n, false));
  for (const Action& a : task.actions) {
    for (const auto& [effect_var, effect_value] : a.effect.entries()) {
      (void)effect_value;
      for (const auto& [other, other_value] : a.effect.entries()) {
        (void)other_value;
        if (other != effect_var) arc[other][effect_var] = true;
      }
      for (const auto& [other, other_value] : a.precondition.entries()) {
        (void)other_value;
        if (other != effect_var) arc[other][effect_var] = true;
      }
    }
  }
  CausalGraph cg;
  cg.succ.resize(n);
  cg.pred.resize(n);
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      if (arc[u][v]) {
        cg.succ[u].push_back(v);
        cg.pred[v].push_back(u);
      }
    }
  }
  return cg;
}

/**
 * One value transition of a single variable.  `from == kAnyValue` marks a
 * wildcard-origin arc (the action has no precondition on this variable): it
 * stands for one arc per domain value and is expanded where needed.
 */
struct DtgArc {
  int from = kAnyValue;
  int to = 0;
  PartialAssignment outside_pre;  // precondition restricted to other variables
  Fraction cost;
  int action = -1;  // index into Task::actions

  friend bool operator==(const DtgArc&, const DtgArc&) = default;
};

/** All value transitions of one variable, in action order. */
struct DomainTransitionGraph {
  int variable = -1;
  int domain_size = 0;
  std::vector<DtgArc> arcs;

  friend bool operator==(const DomainTransitionGraph&, const DomainTransitionGraph&) = default;
};

inline DomainTransitionGraph dtg(const Task& task, int variable) {
  DomainTransitionGraph g;
  g.variable = variable;
  g.domain_size = task.variables[variable].domain_size;
  for (int ai = 0; ai < static_cast<int>(task.actions.size()); ++ai) {
    const Action& a = task.actions[ai];
    const int to = a.effect.get(variable);
    if (to == -1) continue;
    DtgArc arc;
    arc.from = a.precondition.get(variable);  // -1 == kAnyValue when unspecified
    arc.to = to;
    for (const auto& [var, value] : a.precondition.entries()) {
      if (var != variable) arc.outside_pre.set(var, value);
    }
    arc.cost = a.cost;
    arc.action = ai;
    g.arcs.push_back(std::move(arc));
  }
  return g;
}

/**
 * Unit-hop distances within one variable's transition graph, ignoring outside
 * preconditions and arc costs.  `anchor` is the BFS source for the
 * from-variant and the BFS target for the to-variant.
 */
struct ValueDistances {
  int variable = -1;
  int from_value = -1;  // the anchor value
  std::vector<int> dist;  // kInfiniteHops when unreachable

  friend bool operator==(const ValueDistances&, const ValueDistances&) = default;
};

/** dist[x] = minimum number of arcs to go from `from_value` to x. */
inline ValueDistances hop_distances_from(const DomainTransitionGraph& g, int from_value) {
  ValueDistances d;
  d.variable = g.variable;
  d.from_value = from_value;
  d.dist.assign(g.domain_size, kInfiniteHops);

  std::vector<std::vector<int>> adj(g.domain_size);
  std::vector<int> wildcard_targets;
  for (const DtgArc& arc : g.arcs) {
    if (arc.from == kAnyValue) {
      wildcard_targets.push_back(arc.to);
    } else if (arc.from != arc.to) {
      adj[arc.from].push_back(arc.to);
    }
  }

  std::deque<int> queue;
  d.dist[from_value] = 0;
  queue.push_back(from_value);
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    auto relax = [&](int y) {
      if (d.dist[y] == kInfiniteHops) {
        d.dist[y] = d.dist[x] + 1;
        queue.push_back(y);
      }
    };
    for (const int y : adj[x]) relax(y);
    for (const int y : wildcard_targets) relax(y);
  }
  return d;
}

/** dist[x] = minimum number of arcs to go from x to `to_value`. */
inline ValueDistances hop_distances_to(const DomainTransitionGraph& g, int to_value) {
  ValueDistances d;
  d.variable = g.variable;
  d.from_value = to_value;
  d.dist.assign(g.domain_size, kInfiniteHops);

  std::vector<std::vector<int>> radj(g.domain_size);
  std::vector<bool> wildcard_into(g.domain_size, false);
  for (const DtgArc& arc : g.arcs) {
    if (arc.from == kAnyValue) {
      wildcard_into[arc.to] = true;
    } else if (arc.from != arc.to) {
      radj[arc.to].push_back(arc.from);
    }
  }

  std::deque<int> queue;
  d.dist[to_value] = 0;
  queue.push_back(to_value);
  while (!queue.empty()) {
    const int x = queue.front();
    queue.pop_front();
    auto relax = [&](int y) {
      if (d.dist[y] == kInfiniteHops) {
        d.dist[y] = d.dist[x] + 1;
        queue.push_back(y);
      }
    };
    for (const int y : radj[x]) relax(y);
    if (wildcard_into[x]) {
      for (int y = 0; y < g.domain_size; ++y) {
        if (y != x) relax(y);
      }
    }
  }
  return d;
}

/** Largest finite entry (at least 0: the anchor itself is at distance 0). */
inline int max_finite(const ValueDistances& d) {
  int best = 0;
  for (const int x : d.dist) {
    if (x != kInfiniteHops) best = std::max(best, x);
  }
  return best;
}

/** DOT rendering of the causal graph (node = variable name). */
inline std::string to_dot(const CausalGraph& cg, const Task& task) {
  std::string out = "digraph causal_graph {\n";
  for (int v = 0; v < task.num_variables(); ++v) {
    out += "  v" + std::to_string(v) + " [label=\"" + task.variables[v].name + "\"];\n";
  }
  for (int u = 0; u < static_cast<int>(cg.succ.size()); ++u) {
    for (const int v : cg.succ[u]) {
      out += "  v" + std::to_string(u) + " -> v" + std::to_string(v) + ";\n";
    }
  }
  out += "}\n";
  return out;
}

/** DOT rendering of one DTG (node = value name, edge label = cost). */
inline std::string to_dot(const DomainTransitionGraph& g, const Task& task) {
  const VariableDef& def = task.variables[g.variable];
  std::string out = "digraph dtg__" + std::to_string(g.variable) + " {\n";
  out += "  label=\"" + def.name + "\";\n";
  out += "  any [label=\"(any)\", style=dashed];\n";
  for (int x = 0; x < g.domain_size; ++x) {
    out += "  n" + std::to_string(x) + " [label=\"" + def.value_names[x] + "\"];\n";
  }
  for (const DtgArc& arc : g.arcs) {
    const std::string src = arc.from == kAnyValue ? "any" : "n" + std::to_string(arc.from);
    out += "  " + src + " -> n" + std::to_string(arc.to) + " [label=\"" + arc.cost.str() +
           "\"];\n";
  }
  out += "}\n";
  return out;
}

}  // namespace planner
