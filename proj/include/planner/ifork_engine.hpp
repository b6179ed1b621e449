#pragma once

/**
 * Optimal solver and evaluation database for inverted-fork abstract tasks
 * with a small (≤ 3 value) sink domain.
 *
 * In an inverted fork, parent variables evolve independently (their
 * representatives constrain only themselves) and the sink's transitions
 * require specific parent values.  Any optimal plan can be normalised so the
 * sink follows a vertex-simple path through its domain transition graph;
 * the plan cost is then the sink actions plus, per parent, a chain of
 * cheapest parent walks visiting the required values in order and ending at
 * the parent's goal, if any.
 *
 * `solve_ifork` enumerates the sink paths from an explicit state and
 * stitches the chains directly.  `build_ifork_db` stores, for every sink
 * origin value and path, the path cost from a "proxy" start (each parent
 * already at the first value the path requires of it); `eval_ifork_db` then
 * only needs one cheapest-walk lookup per parent to bridge from the actual
 * state to the proxy.
 */

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "planner/cost_table.hpp"
#include "planner/decomposition.hpp"
#include "planner/fraction.hpp"
#include "planner/graphs.hpp"

namespace planner {

/** Number of table reads performed by eval_ifork_db, for complexity tests. */
inline thread_local std::int64_t ifork_db_lookups = 0;

/** One vertex-simple sink path with its precomputed stitching data. */
struct SinkPath {
  int origin = -1;           ///< sink value the path starts from
  std::vector<int> actions;  ///< representative indices along the path
  /** Per parent (parallel to the database's parent list): the first value
      the path requires, else the parent's goal, else -1 (unconstrained). */
  std::vector<int> proxy;
  /** Cost of the cheapest plan following this path when every parent starts
      at its proxy value: sink actions plus the remaining parent chains. */
  Fraction g_pi;
};

namespace detail {

struct ParentArc {
  int from = kAnyValue;  ///< kAnyValue: applicable from every value
  int to = -1;
  Fraction cost;
  int rep = -1;
};

struct SinkArc {
  int from = kAnyValue;
  int to = -1;
  Fraction cost;
  int rep = -1;
};

struct IForkStructure {
  int sink_local = -1;
  int sink_domain = 0;
  int goal_sink = -1;
  std::vector<int> parent_locals;
  std::vector<int> parent_vars;  ///< original variable ids, for rep lookups
  std::vector<int> parent_domains;
  std::vector<int> parent_goals;  ///< -1 when unspecified
  std::vector<std::vector<ParentArc>> parent_arcs;
  std::vector<SinkArc> sink_arcs;
};

inline IForkStructure ifork_structure(const AbstractTask& at) {
  if (at.origin.kind != SubgraphKind::IFork) {
    throw std::invalid_argument("ifork engine: task is not an inverted-fork abstraction");
  }
  IForkStructure fs;
  fs.sink_local = at.center_local();
  fs.sink_domain = at.domain_sizes[fs.sink_local];
  if (fs.sink_domain > 3) {
    throw std::invalid_argument("ifork engine: sink domain must have at most 3 values");
  }
  fs.goal_sink = at.goal.get(at.center());
  if (fs.goal_sink < 0) {
    throw std::invalid_argument("ifork engine: sink goal must be specified");
  }
  for (int local = 0; local < static_cast<int>(at.variables.size()); ++local) {
    if (local == fs.sink_local) continue;
    fs.parent_locals.push_back(local);
    fs.parent_vars.push_back(at.variables[local]);
    fs.parent_domains.push_back(at.domain_sizes[local]);
    fs.parent_goals.push_back(at.goal.get(at.variables[local]));
    fs.parent_arcs.emplace_back();
  }
  for (int ri = 0; ri < static_cast<int>(at.reps.size()); ++ri) {
    const Representative& rep = at.reps[ri];
    if (rep.effect_var == at.center()) {
      fs.sink_arcs.push_back(
          {rep.pre.get(at.center()), rep.effect_value, rep.cost, ri});
      continue;
    }
    const auto pos =
        std::find(fs.parent_vars.begin(), fs.parent_vars.end(), rep.effect_var);
    assert(pos != fs.parent_vars.end());
    const auto parent = static_cast<std::size_t>(pos - fs.parent_vars.begin());
    fs.parent_arcs[parent].push_back(
        {rep.pre.get(rep.effect_var), rep.effect_value, rep.cost, ri});
  }
  return fs;
}

/** All-pairs cheapest walk costs over one parent's transition arcs. */
inline std::vector<std::vector<Fraction>> parent_all_pairs(
    const std::vector<ParentArc>& arcs, int domain) {
  const auto d = static_cast<std::size_t>(domain);
  std::vector<std::vector<Fraction>> p(d, std::vector<Fraction>(d, Fraction::infinity()));
  for (std::size_t v = 0; v < d; ++v) p[v][v] = Fraction(0);
  for (const ParentArc& arc : arcs) {
    const auto relax = [&](int from) {
      if (arc.cost < p[from][arc.to]) p[from][arc.to] = arc.cost;
    };
    if (arc.from == kAnyValue) {
      for (std::size_t v = 0; v < d; ++v) relax(static_cast<int>(v));
    } else {
      relax(arc.from);
    }
  }
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = 0; j < d; ++j) {
        const Fraction via = p[i][k] + p[k][j];
        if (via < p[i][j]) p[i][j] = via;
      }
    }
  }
  return p;
}

/** Vertex-simple sink paths from `origin` to the sink goal; each parallel
    arc yields a distinct path.  Paths end on first reaching the goal (any
    continuation would have to revisit it). */
template <typename Record>
inline void enumerate_sink_paths(const IForkStructure& fs, int origin, Record&& record) {
  std::vector<char> visited(static_cast<std::size_t>(fs.sink_domain), 0);
  std::vector<int> current;
  const auto dfs = [&](auto&& self, int vertex) -> void {
    if (vertex == fs.goal_sink) {
      record(current);
      return;
    }
    visited[vertex] = 1;
    for (const SinkArc& arc : fs.sink_arcs) {
      if (arc.from != vertex && arc.from != kAnyValue) continue;
      if (arc.to == vertex || visited[arc.to]) continue;
      current.push_back(arc.rep);
      self(self, arc.to);
      current.pop_back();
    }
    visited[vertex] = 0;
  };
  dfs(dfs, origin);
}

/** Cost of walking parent `j` from `start` through the values the path's
    sink actions require of it, ending at the parent's goal if specified.
    A negative `start` means the parent is unconstrained: cost 0. */
inline Fraction parent_chain(const IForkStructure& fs,
                             const std::vector<std::vector<std::vector<Fraction>>>& p,
                             const AbstractTask& at, const std::vector<int>& path_reps,
                             std::size_t j, int start) {
  if (start < 0) return Fraction(0);
  Fraction total(0);
  int current = start;
  for (const int ri : path_reps) {
    const int required = at.reps[ri].pre.get(fs.parent_vars[j]);
    if (required < 0) continue;
    total = total + p[j][current][required];
    current = required;
  }
  if (fs.parent_goals[j] >= 0) total = total + p[j][current][fs.parent_goals[j]];
  return total;
}

/** First value the path requires of parent `j`, else the parent goal, else
    -1: exactly the proxy-state definition. */
inline int path_proxy(const IForkStructure& fs, const AbstractTask& at,
                      const std::vector<int>& path_reps, std::size_t j) {
  for (const int ri : path_reps) {
    const int required = at.reps[ri].pre.get(fs.parent_vars[j]);
    if (required >= 0) return required;
  }
  return fs.parent_goals[j];
}

}  // namespace detail

/** Result of solve_ifork: exact optimal cost and, when finite, a witness
    plan as indices into the task's representative list. */
struct IForkSolution {
  Fraction cost;
  std::optional<std::vector<int>> plan;
};

/**
 * Optimal plan cost for an inverted-fork abstract task from an explicit
 * state (values parallel to `at.variables`, center already mapped).  Throws
 * std::invalid_argument if the task is not an inverted fork with a specified
 * goal on a sink of at most 3 values.
 */
inline IForkSolution solve_ifork(const AbstractTask& at, const std::vector<int>& start) {
  const detail::IForkStructure fs = detail::ifork_structure(at);
  assert(start.size() == at.variables.size());
  std::vector<std::vector<std::vector<Fraction>>> p;
  for (std::size_t j = 0; j < fs.parent_arcs.size(); ++j) {
    p.push_back(detail::parent_all_pairs(fs.parent_arcs[j], fs.parent_domains[j]));
  }

  Fraction best = Fraction::infinity();
  std::vector<int> best_path;
  bool found = false;
  detail::enumerate_sink_paths(fs, start[fs.sink_local], [&](const std::vector<int>& reps) {
    Fraction total(0);
    for (const int ri : reps) total = total + at.reps[ri].cost;
    for (std::size_t j = 0; j < fs.parent_locals.size(); ++j) {
      total = total + detail::parent_chain(fs, p, at, reps, j, start[fs.parent_locals[j]]);
    }
    if (total < best || !found) {
      best = total;
      best_path = reps;
      found = true;
    }
  });
  if (best.is_infinite()) return {Fraction::infinity(), std::nullopt};

  // Stitch the witness plan: before each sink action move every parent to
  // the value it requires, and finish with the parents' goal walks.
  std::vector<int> positions(fs.parent_locals.size());
  for (std::size_t j = 0; j < fs.parent_locals.size(); ++j) {
    positions[j] = start[fs.parent_locals[j]];
  }
  // Cheapest walk for one parent as representative indices, via Dijkstra.
  const auto leg = [&](std::size_t j, int from, int to) {
    std::vector<int> reps;
    if (from == to) return reps;
    const int domain = fs.parent_domains[j];
    std::vector<Fraction> dist(static_cast<std::size_t>(domain), Fraction::infinity());
    std::vector<std::pair<int, int>> back(static_cast<std::size_t>(domain), {-1, -1});
    std::vector<char> done(static_cast<std::size_t>(domain), 0);
    dist[from] = Fraction(0);
    while (true) {
      int u = -1;
      for (int v = 0; v < domain; ++v) {
        if (!done[v] && !dist[v].is_infinite() && (u < 0 || dist[v] < dist[u])) u = v;
      }
      if (u < 0) break;
      done[u] = 1;
      for (const detail::ParentArc& arc : fs.parent_arcs[j]) {
        if (arc.from != u && arc.from != kAnyValue) continue;
        if (arc.to == u) continue;
        const Fraction candidate = dist[u] + arc.cost;
        if (candidate < dist[arc.to]) {
          dist[arc.to] = candidate;
          back[arc.to] = {u, arc.rep};
        }
      }
    }
    assert(!dist[to].is_infinite());
    for (int v = to; v != from; v = back[v].first) reps.push_back(back[v].second);
    std::reverse(reps.begin(), reps.end());
    return reps;
  };
  std::vector<int> plan;
  for (const int ri : best_path) {
    for (std::size_t j = 0; j < fs.parent_locals.size(); ++j) {
      const int required = at.reps[ri].pre.get(fs.parent_vars[j]);
      if (required < 0) continue;
      const auto walk = leg(j, positions[j], required);
      plan.insert(plan.end(), walk.begin(), walk.end());
      positions[j] = required;
    }
    plan.push_back(ri);
  }
  for (std::size_t j = 0; j < fs.parent_locals.size(); ++j) {
    if (fs.parent_goals[j] < 0) continue;
    const auto walk = leg(j, positions[j], fs.parent_goals[j]);
    plan.insert(plan.end(), walk.begin(), walk.end());
  }
  return {best, std::move(plan)};
}

/** Precomputed evaluation tables for one inverted-fork abstract task. */
struct IForkDatabase {
  int sink_local = -1;
  int goal_sink = -1;
  std::vector<int> parent_locals;
  std::vector<int> parent_goals;  ///< -1 when unspecified
  /** p[parent][from][to]: cheapest walk cost on the parent's own arcs. */
  std::vector<std::vector<std::vector<Fraction>>> p;
  /** paths[origin]: stitching data for every vertex-simple path from that
      sink value to the goal whose parent chains are all achievable. */
  std::vector<std::vector<SinkPath>> paths;

  /** Integer fast path: all finite entries share denominator `scale`. */
  bool fast = false;
  std::int64_t scale = 1;
  std::vector<std::vector<std::int64_t>> p_int;  ///< [parent][from * domain + to]
  std::vector<std::vector<std::int64_t>> g_int;  ///< parallel to `paths`
};

/** Builds the per-origin path tables realising the proxy-state split. */
inline IForkDatabase build_ifork_db(const AbstractTask& at) {
  const detail::IForkStructure fs = detail::ifork_structure(at);
  IForkDatabase db;
  db.sink_local = fs.sink_local;
  db.goal_sink = fs.goal_sink;
  db.parent_locals = fs.parent_locals;
  db.parent_goals = fs.parent_goals;
  for (std::size_t j = 0; j < fs.parent_arcs.size(); ++j) {
    db.p.push_back(detail::parent_all_pairs(fs.parent_arcs[j], fs.parent_domains[j]));
  }
  db.paths.resize(static_cast<std::size_t>(fs.sink_domain));
  for (int origin = 0; origin < fs.sink_domain; ++origin) {
    detail::enumerate_sink_paths(fs, origin, [&](const std::vector<int>& reps) {
      SinkPath path;
      path.origin = origin;
      path.actions = reps;
      path.g_pi = Fraction(0);
      for (const int ri : reps) path.g_pi = path.g_pi + at.reps[ri].cost;
      for (std::size_t j = 0; j < fs.parent_locals.size(); ++j) {
        const int proxy = detail::path_proxy(fs, at, reps, j);
        path.proxy.push_back(proxy);
        path.g_pi = path.g_pi + detail::parent_chain(fs, db.p, at, reps, j, proxy);
      }
      if (!path.g_pi.is_infinite()) db.paths[origin].push_back(std::move(path));
    });
  }

  // Integer fast path over the common denominator of all finite entries.
  std::int64_t scale = 1;
  constexpr std::int64_t kScaleCap = std::int64_t{1} << 31;
  bool ok = true;
  const auto fold = [&](const Fraction& f) {
    if (ok && !f.is_infinite()) ok = detail::lcm_accumulate(scale, f.denominator(), kScaleCap);
  };
  for (const auto& table : db.p) {
    for (const auto& row : table) {
      for (const Fraction& f : row) fold(f);
    }
  }
  for (const auto& list : db.paths) {
    for (const SinkPath& path : list) fold(path.g_pi);
  }
  if (ok) {
    for (const auto& table : db.p) {
      std::vector<std::int64_t> flat;
      for (const auto& row : table) {
        for (const Fraction& f : row) {
          if (const auto v = detail::scale_cost(f, scale); v && ok) {
            flat.push_back(*v);
          } else {
            ok = false;
          }
        }
      }
      db.p_int.push_back(std::move(flat));
    }
    for (const auto& list : db.paths) {
      std::vector<std::int64_t> flat;
      for (const SinkPath& path : list) {
        if (const auto v = detail::scale_cost(path.g_pi, scale); v && ok) {
          flat.push_back(*v);
        } else {
          ok = false;
        }
      }
      db.g_int.push_back(std::move(flat));
    }
  }
  db.fast = ok;
  db.scale = ok ? scale : 1;
  if (!ok) {
    db.p_int.clear();
    db.g_int.clear();
  }
  return db;
}

/**
 * Optimal cost from `state` (values parallel to the task's variable list)
 * using only precomputed tables: per stored path, its g value plus one
 * bridging lookup for each constrained parent.
 */
inline Fraction eval_ifork_db(const IForkDatabase& db, const std::vector<int>& state) {
  const auto origin = static_cast<std::size_t>(state[db.sink_local]);
  const auto& list = db.paths[origin];
  if (db.fast) {
    std::int64_t best = detail::kInfCost;
    for (std::size_t i = 0; i < list.size(); ++i) {
      ++ifork_db_lookups;
      std::int64_t total = db.g_int[origin][i];
      const SinkPath& path = list[i];
      for (std::size_t j = 0; j < db.parent_locals.size(); ++j) {
        if (path.proxy[j] < 0) continue;
        ++ifork_db_lookups;
        const auto domain = db.p[j].size();
        total = detail::sat_add(
            total,
            db.p_int[j][static_cast<std::size_t>(state[db.parent_locals[j]]) * domain +
                        static_cast<std::size_t>(path.proxy[j])]);
      }
      best = std::min(best, total);
    }
    return best == detail::kInfCost ? Fraction::infinity() : Fraction(best, db.scale);
  }
  Fraction best = Fraction::infinity();
  for (const SinkPath& path : list) {
    ++ifork_db_lookups;
    Fraction total = path.g_pi;
    for (std::size_t j = 0; j < db.parent_locals.size(); ++j) {
      if (path.proxy[j] < 0) continue;
      ++ifork_db_lookups;
      total = total + db.p[j][state[db.parent_locals[j]]][path.proxy[j]];
    }
    if (total < best) best = total;
  }
  return best;
}

}  // namespace planner
