#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

#include "planner/fraction.hpp"
#include "planner/task.hpp"

namespace planner {

/** A sequence of action indices with its exact total cost. */
struct Plan {
  std::vector<int> actions;
  Fraction cost;

  friend bool operator==(const Plan&, const Plan&) = default;
};

struct SearchStats {
  std::uint64_t expanded = 0;
  std::uint64_t generated = 0;
  std::uint64_t evaluated = 0;
  std::uint64_t reopened = 0;
  Fraction h_initial;
  double elapsed_seconds = 0.0;
};

enum class SearchStatus { Solved, Unsolvable, LimitExceeded };

struct SearchResult {
  SearchStatus status = SearchStatus::Unsolvable;
  std::optional<Plan> plan;
  SearchStats stats;
};

/** 0 means unlimited. */
struct SearchLimits {
  std::uint64_t max_nodes = 0;
  double max_seconds = 0.0;
};

/**
 * A* with full duplicate elimination.
 *
 * The heuristic is any callable State -> Fraction; an infinite estimate marks
 * a dead end and the state is never enqueued.  f-ties are broken by larger g,
 * residual ties by insertion order, so runs are deterministic.  Reopening is
 * supported (and counted) for safety, though consistent heuristics never
 * trigger it.  The goal test happens at expansion, which together with
 * admissibility guarantees optimal plans.
 */
template <typename Heuristic>
SearchResult astar(const Task& task, Heuristic&& heuristic, const SearchLimits& limits = {}) {
  using Clock = std::chrono::steady_clock;
  const auto start_time = Clock::now();
  auto elapsed = [&start_time] {
    return std::chrono::duration<double>(Clock::now() - start_time).count();
  };

  struct NodeEntry {
    State state;
    Fraction g;
    int parent = -1;
    int action = -1;
    bool closed = false;
  };
  std::vector<NodeEntry> nodes;
  std::unordered_map<State, int, StateHash> index;

  struct OpenEntry {
    Fraction f;
    Fraction g;
    std::uint64_t seq;
    int node;
  };
  struct OpenOrder {
    bool operator()(const OpenEntry& a, const OpenEntry& b) const {
      if (a.f != b.f) return a.f > b.f;      // smaller f first
      if (a.g != b.g) return a.g < b.g;      // then larger g
      return a.seq > b.seq;                  // then earlier insertion
    }
  };
  std::priority_queue<OpenEntry, std::vector<OpenEntry>, OpenOrder> open;
  std::uint64_t seq = 0;

  SearchResult result;
  SearchStats& stats = result.stats;

  const Fraction h0 = heuristic(task.initial);
  ++stats.evaluated;
  stats.h_initial = h0;
  if (h0.is_infinite()) {
    result.status = SearchStatus::Unsolvable;
    stats.elapsed_seconds = elapsed();
    return result;
  }

  nodes.push_back({task.initial, Fraction(0), -1, -1, false});
  index.emplace(task.initial, 0);
  open.push({h0, Fraction(0), seq++, 0});
  ++stats.generated;

  auto extract_plan = [&](int node) {
    Plan plan;
    plan.cost = nodes[node].g;
    for (int at = node; nodes[at].parent != -1; at = nodes[at].parent) {
      plan.actions.push_back(nodes[at].action);
    }
    std::reverse(plan.actions.begin(), plan.actions.end());
    return plan;
  };

  while (!open.empty()) {
    const OpenEntry top = open.top();
    open.pop();
    NodeEntry& node = nodes[top.node];
    if (node.closed || top.g != node.g) continue;  // stale queue entry

    if (is_goal(node.state, task)) {
      result.status = SearchStatus::Solved;
      result.plan = extract_plan(top.node);
      stats.elapsed_seconds = elapsed();
      return result;
    }

    if (limits.max_nodes != 0 && stats.expanded >= limits.max_nodes) {
      result.status = SearchStatus::LimitExceeded;
      stats.elapsed_seconds = elapsed();
      return result;
    }
    if (limits.max_seconds > 0.0 && (stats.expanded & 1023) == 0 &&
        elapsed() > limits.max_seconds) {
      result.status = SearchStatus::LimitExceeded;
      stats.elapsed_seconds = elapsed();
      return result;
    }

    node.closed = true;
    ++stats.expanded;
    const State current = node.state;   // copy: `nodes` may reallocate below
    const Fraction current_g = node.g;

    for (int ai = 0; ai < static_cast<int>(task.actions.size()); ++ai) {
      const Action& a = task.actions[ai];
      if (!applicable(a, current)) continue;
      State successor = apply(current, a);
      ++stats.generated;
      const Fraction g = current_g + a.cost;

      const auto it = index.find(successor);
      if (it == index.end()) {
        const Fraction h = heuristic(successor);
        ++stats.evaluated;
        if (h.is_infinite()) continue;  // dead end, never enqueue
        const int id = static_cast<int>(nodes.size());
        nodes.push_back({std::move(successor), g, top.node, ai, false});
        index.emplace(nodes.back().state, id);
        open.push({g + h, g, seq++, id});
      } else {
        NodeEntry& known = nodes[it->second];
        if (g < known.g) {
          if (known.closed) {
            known.closed = false;
            ++stats.reopened;
          }
          known.g = g;
          known.parent = top.node;
          known.action = ai;
          const Fraction h = heuristic(known.state);
          ++stats.evaluated;
          open.push({g + h, g, seq++, it->second});
        }
      }
    }
  }

  result.status = SearchStatus::Unsolvable;
  stats.elapsed_seconds = elapsed();
  return result;
}

/**
 * Exact cost-to-goal for every state reachable from the initial state,
 * computed by forward exploration plus multi-source backward Dijkstra over
 * the explicit transition graph.  Declines (returns nullopt) when more than
 * `max_states` states are reachable; unreachable-goal states map to infinity.
 */
inline std::optional<std::unordered_map<State, Fraction, StateHash>> dijkstra_oracle(
    const Task& task, std::uint64_t max_states = 1000000) {
  std::vector<State> states;
  std::unordered_map<State, int, StateHash> index;
  states.push_back(task.initial);
  index.emplace(task.initial, 0);

  struct Edge {
    int from;
    Fraction cost;
  };
  std::vector<std::vector<Edge>> reverse_edges;
  reverse_edges.emplace_back();

  for (std::size_t frontier = 0; frontier < states.size(); ++frontier) {
    for (int ai = 0; ai < static_cast<int>(task.actions.size()); ++ai) {
      const Action& a = task.actions[ai];
      if (!applicable(a, states[frontier])) continue;
      State successor = apply(states[frontier], a);
      auto it = index.find(successor);
      if (it == index.end()) {
        if (states.size() >= max_states) return std::nullopt;
        const int id = static_cast<int>(states.size());
        it = index.emplace(std::move(successor), id).first;
        states.push_back(it->first);
        reverse_edges.emplace_back();
      }
      reverse_edges[it->second].push_back({static_cast<int>(frontier), a.cost});
    }
  }

  std::vector<Fraction> dist(states.size(), Fraction::infinity());
  struct QueueEntry {
    Fraction d;
    int node;
  };
  struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const { return a.d > b.d; }
  };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (is_goal(states[i], task)) {
      dist[i] = Fraction(0);
      queue.push({Fraction(0), static_cast<int>(i)});
    }
  }
  while (!queue.empty()) {
    const QueueEntry top = queue.top();
    queue.pop();
    if (top.d != dist[top.node]) continue;
    for (const Edge& e : reverse_edges[top.node]) {
      const Fraction candidate = top.d + e.cost;
      if (candidate < dist[e.from]) {
        dist[e.from] = candidate;
        queue.push({candidate, e.from});
      }
    }
  }

  std::unordered_map<State, Fraction, StateHash> result;
  result.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) result.emplace(states[i], dist[i]);
  return result;
}

/** Mixed-radix rank of a state in the full assignment space. */
inline std::uint64_t state_rank(const Task& task, const State& s) {
  std::uint64_t rank = 0;
  for (int v = 0; v < task.num_variables(); ++v) {
    rank = rank * static_cast<std::uint64_t>(task.variables[v].domain_size) +
           static_cast<std::uint64_t>(s.values[v]);
  }
  return rank;
}

inline State state_unrank(const Task& task, std::uint64_t rank) {
  State s;
  s.values.assign(task.variables.size(), 0);
  for (int v = task.num_variables() - 1; v >= 0; --v) {
    const auto d = static_cast<std::uint64_t>(task.variables[v].domain_size);
    s.values[v] = static_cast<int>(rank % d);
    rank /= d;
  }
  return s;
}

/**
 * Exact cost-to-goal for EVERY state of the full assignment space (not just
 * the reachable ones), indexed by state_rank.  Declines when the space
 * exceeds `max_states`.
 */
inline std::optional<std::vector<Fraction>> full_space_h_star(const Task& task,
                                                              std::uint64_t max_states = 100000) {
  std::uint64_t space = 1;
  for (const VariableDef& def : task.variables) {
    space *= static_cast<std::uint64_t>(def.domain_size);
    if (space > max_states) return std::nullopt;
  }

  std::vector<Fraction> dist(space, Fraction::infinity());
  struct QueueEntry {
    Fraction d;
    std::uint64_t node;
  };
  struct QueueOrder {
    bool operator()(const QueueEntry& a, const QueueEntry& b) const { return a.d > b.d; }
  };
  std::priority_queue<QueueEntry, std::vector<QueueEntry>, QueueOrder> queue;

  for (std::uint64_t r = 0; r < space; ++r) {
    if (is_goal(state_unrank(task, r), task)) {
      dist[r] = Fraction(0);
      queue.push({Fraction(0), r});
    }
  }
  // Backward Dijkstra: relax along reversed transitions s -a-> s'.
  std::vector<std::vector<std::pair<std::uint64_t, Fraction>>> reverse_edges(space);
  for (std::uint64_t r = 0; r < space; ++r) {
    const State s = state_unrank(task, r);
    for (const Action& a : task.actions) {
      if (!applicable(a, s)) continue;
      reverse_edges[state_rank(task, apply(s, a))].push_back({r, a.cost});
    }
  }
  while (!queue.empty()) {
    const QueueEntry top = queue.top();
    queue.pop();
    if (top.d != dist[top.node]) continue;
    for (const auto& [from, cost] : reverse_edges[top.node]) {
      const Fraction candidate = top.d + cost;
      if (candidate < dist[from]) {
        dist[from] = candidate;
        queue.push({candidate, from});
      }
    }
  }
  return dist;
}

/** Replay outcome of validate_plan. */
struct PlanValidation {
  bool ok = false;
  int failed_step = -1;  // -1 when ok or when the failure is at the end
  std::string reason;
};

/** Replays `plan` from the initial state, checking each precondition, the goal, and the cost sum. */
inline PlanValidation validate_plan(const Task& task, const Plan& plan) {
  PlanValidation v;
  State state = task.initial;
  Fraction total(0);
  for (std::size_t i = 0; i < plan.actions.size(); ++i) {
    const int ai = plan.actions[i];
    if (ai < 0 || ai >= static_cast<int>(task.actions.size())) {
      v.failed_step = static_cast<int>(i);
      v.reason = "action index out of range";
      return v;
    }
    const Action& a = task.actions[ai];
    if (!applicable(a, state)) {
      v.failed_step = static_cast<int>(i);
      v.reason = "precondition of " + a.name + " not satisfied";
      return v;
    }
    state = apply(state, a);
    total += a.cost;
  }
  if (!is_goal(state, task)) {
    v.reason = "final state does not satisfy the goal";
    return v;
  }
  if (total != plan.cost) {
    v.reason = "plan cost mismatch: recorded " + plan.cost.str() + ", actual " + total.str();
    return v;
  }
  v.ok = true;
  return v;
}

}  // namespace planner
