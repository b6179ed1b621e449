#pragma once

/**
 * Optimal solver and evaluation database for fork abstract tasks.
 *
 * A fork task has a binary-domain root variable whose value conditions the
 * transitions of otherwise independent leaf variables.  Any plan's root
 * behaviour is an alternating value sequence ("sigma profile"), so optimal
 * costs decompose into per-leaf shortest paths conditioned on the phase of
 * that profile plus the cumulative cost of the root flips:
 *
 *   h(s) = min over profile lengths k of
 *          [cost of k-1 root flips from s[root]]
 *          + sum over leaves of [cheapest way to drive the leaf from s[leaf]
 *            to its goal using at most k phases].
 *
 * `solve_fork` computes this directly with a layered Dijkstra run and can
 * reconstruct a witness plan.  `build_fork_db` precomputes the per-leaf
 * phase-indexed cost tables so `eval_fork_db` answers any state with a
 * handful of table lookups.
 */

#include <algorithm>
#include <array>
#include <cassert>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "planner/cost_table.hpp"
#include "planner/decomposition.hpp"
#include "planner/fraction.hpp"
#include "planner/graphs.hpp"

namespace planner {

/** Number of table reads performed by eval_fork_db, for complexity tests. */
inline thread_local std::int64_t fork_db_lookups = 0;

/** The root's alternation structure: cheapest flip away from each value and
    the longest profile worth considering. */
struct SigmaSchedule {
  int root_local = -1;
  int max_len = 1;
  /** cheapest_flip[v] = cheapest root transition leaving value v (flip_rep[v]
      is a representative index realising it, or -1). */
  std::array<Fraction, 2> cheapest_flip{Fraction::infinity(), Fraction::infinity()};
  std::array<int, 2> flip_rep{-1, -1};
};

namespace detail {

/** A leaf DTG arc; `from == kAnyValue` means the arc applies from any value,
    `root == kAnyValue` means it is usable in either root phase. */
struct LeafArc {
  int from = kAnyValue;
  int to = -1;
  int root = kAnyValue;
  Fraction cost;
  int rep = -1;
};

inline void require_fork_shape(const AbstractTask& at) {
  if (at.origin.kind != SubgraphKind::Fork) {
    throw std::invalid_argument("fork engine: task is not a fork abstraction");
  }
  const int root_local = at.center_local();
  if (root_local < 0 || at.domain_sizes[root_local] != 2) {
    throw std::invalid_argument("fork engine: root domain must be binary");
  }
}

/** Groups the task's representatives into root flips and per-leaf arcs. */
struct ForkStructure {
  int root_local = -1;
  std::vector<int> leaf_locals;
  std::vector<std::vector<LeafArc>> arcs;  ///< parallel to leaf_locals
  std::vector<int> leaf_goals;             ///< parallel to leaf_locals
  SigmaSchedule sigma;
  std::optional<int> goal_root;
};

inline ForkStructure fork_structure(const AbstractTask& at) {
  require_fork_shape(at);
  ForkStructure fs;
  fs.root_local = at.center_local();
  const int root = at.center();
  int max_leaf_domain = 0;
  for (int local = 0; local < static_cast<int>(at.variables.size()); ++local) {
    if (local == fs.root_local) continue;
    fs.leaf_locals.push_back(local);
    fs.arcs.emplace_back();
    const int goal = at.goal.get(at.variables[local]);
    if (goal < 0) {
      throw std::invalid_argument("fork engine: leaf without a goal value");
    }
    fs.leaf_goals.push_back(goal);
    max_leaf_domain = std::max(max_leaf_domain, at.domain_sizes[local]);
  }
  fs.sigma.root_local = fs.root_local;
  for (int ri = 0; ri < static_cast<int>(at.reps.size()); ++ri) {
    const Representative& rep = at.reps[ri];
    if (rep.effect_var == root) {
      const int pre = rep.pre.get(root);
      for (int from = 0; from < 2; ++from) {
        if ((pre == from || pre == kAnyValue) && rep.effect_value == 1 - from &&
            rep.cost < fs.sigma.cheapest_flip[from]) {
          fs.sigma.cheapest_flip[from] = rep.cost;
          fs.sigma.flip_rep[from] = ri;
        }
      }
      continue;
    }
    const auto pos = std::find(fs.leaf_locals.begin(), fs.leaf_locals.end(),
                               at.local_index(rep.effect_var));
    assert(pos != fs.leaf_locals.end());
    const auto leaf = static_cast<std::size_t>(pos - fs.leaf_locals.begin());
    fs.arcs[leaf].push_back({rep.pre.get(rep.effect_var), rep.effect_value,
                             rep.pre.get(root), rep.cost, ri});
  }
  const bool flip0 = !fs.sigma.cheapest_flip[0].is_infinite();
  const bool flip1 = !fs.sigma.cheapest_flip[1].is_infinite();
  if (!flip0 && !flip1) {
    fs.sigma.max_len = 1;
  } else if (flip0 != flip1) {
    fs.sigma.max_len = 2;
  } else {
    fs.sigma.max_len = 1 + std::max(max_leaf_domain, 1);
  }
  if (at.goal.defines(root)) fs.goal_root = at.goal.get(root);
  return fs;
}

/** Cumulative flip costs: cum[start][j] = cost of the first j flips of the
    alternating profile that begins at root value `start`, for j in
    0..max_flips. */
inline std::array<std::vector<Fraction>, 2> sigma_costs(const SigmaSchedule& sigma,
                                                        int max_flips) {
  std::array<std::vector<Fraction>, 2> cum;
  for (int start = 0; start < 2; ++start) {
    cum[start].assign(static_cast<std::size_t>(max_flips) + 1, Fraction::infinity());
    cum[start][0] = Fraction(0);
    for (int j = 1; j <= max_flips; ++j) {
      cum[start][j] = cum[start][j - 1] + sigma.cheapest_flip[start ^ ((j - 1) & 1)];
    }
  }
  return cum;
}

/** Root value after a profile of length `k` starting at `start`. */
inline int profile_end(int start, int k) { return start ^ ((k - 1) & 1); }

/** Longest profile worth considering.  Without a root goal a profile of
    max_len phases already lets every leaf reach its stabilised cost; a root
    goal can force one extra phase purely to land on the right value. */
inline int profile_limit(const ForkStructure& fs) {
  return fs.sigma.max_len + (fs.goal_root ? 1 : 0);
}

}  // namespace detail

/** Result of solve_fork: exact optimal cost and, when finite, a witness plan
    as indices into the task's representative list. */
struct ForkSolution {
  Fraction cost;
  std::optional<std::vector<int>> plan;
};

/**
 * Optimal plan cost for a fork abstract task from an explicit state given as
 * values parallel to `at.variables` (center already mapped).  Throws
 * std::invalid_argument if the task is not a fork with a binary root.
 */
inline ForkSolution solve_fork(const AbstractTask& at, const std::vector<int>& start) {
  const detail::ForkStructure fs = detail::fork_structure(at);
  assert(start.size() == at.variables.size());
  const int num_leaves = static_cast<int>(fs.leaf_locals.size());
  const int theta0 = start[fs.root_local];
  const int max_len = detail::profile_limit(fs);
  const auto cum = detail::sigma_costs(fs.sigma, max_len);

  // Backpointer for plan reconstruction: how a value was first reached in a
  // phase.  rep == -1 means "carried over from the previous phase".
  struct Back {
    int from = -1;
    int rep = -1;
  };
  // layers[leaf][phase] = per-value cheapest cost using phases 0..phase.
  std::vector<std::vector<std::vector<Fraction>>> dist(static_cast<std::size_t>(num_leaves));
  std::vector<std::vector<std::vector<Back>>> back(static_cast<std::size_t>(num_leaves));

  for (int leaf = 0; leaf < num_leaves; ++leaf) {
    const int domain = at.domain_sizes[fs.leaf_locals[leaf]];
    auto& layers = dist[leaf];
    auto& parents = back[leaf];
    layers.assign(static_cast<std::size_t>(max_len),
                  std::vector<Fraction>(static_cast<std::size_t>(domain), Fraction::infinity()));
    parents.assign(static_cast<std::size_t>(max_len),
                   std::vector<Back>(static_cast<std::size_t>(domain)));
    for (int phase = 0; phase < max_len; ++phase) {
      auto& layer = layers[phase];
      if (phase == 0) {
        layer[start[fs.leaf_locals[leaf]]] = Fraction(0);
      } else {
        layer = layers[phase - 1];  // value carries over for free
      }
      const int root_value = detail::profile_end(theta0, phase + 1);
      std::vector<char> done(static_cast<std::size_t>(domain), 0);
      while (true) {
        int u = -1;
        for (int v = 0; v < domain; ++v) {
          if (!done[v] && !layer[v].is_infinite() && (u < 0 || layer[v] < layer[u])) u = v;
        }
        if (u < 0) break;
        done[u] = 1;
        for (const detail::LeafArc& arc : fs.arcs[leaf]) {
          if (arc.from != u && arc.from != kAnyValue) continue;
          if (arc.root != root_value && arc.root != kAnyValue) continue;
          if (arc.to == u) continue;
          const Fraction candidate = layer[u] + arc.cost;
          if (candidate < layer[arc.to]) {
            layer[arc.to] = candidate;
            parents[phase][arc.to] = {u, arc.rep};
            done[arc.to] = 0;
          }
        }
      }
    }
  }

  Fraction best = Fraction::infinity();
  int best_k = -1;
  for (int k = 1; k <= max_len; ++k) {
    if (fs.goal_root && detail::profile_end(theta0, k) != *fs.goal_root) continue;
    Fraction total = cum[theta0][k - 1];
    for (int leaf = 0; leaf < num_leaves; ++leaf) {
      total = total + dist[leaf][k - 1][fs.leaf_goals[leaf]];
    }
    if (total < best) {
      best = total;
      best_k = k;
    }
  }
  if (best.is_infinite()) return {best, std::nullopt};

  // Reconstruct: per leaf, walk each phase's backpointers; a carried value
  // (rep == -1 at its seed) ends that phase's segment.
  std::vector<std::vector<std::vector<int>>> segments(
      static_cast<std::size_t>(num_leaves),
      std::vector<std::vector<int>>(static_cast<std::size_t>(best_k)));
  for (int leaf = 0; leaf < num_leaves; ++leaf) {
    int value = fs.leaf_goals[leaf];
    for (int phase = best_k - 1; phase >= 0; --phase) {
      // Within this phase, follow arcs back until the value was carried in.
      while (back[leaf][phase][value].rep >= 0) {
        const auto& step = back[leaf][phase][value];
        segments[leaf][phase].push_back(step.rep);
        value = step.from;
      }
    }
    assert(value == start[fs.leaf_locals[leaf]]);
  }
  std::vector<int> plan;
  for (int phase = 0; phase < best_k; ++phase) {
    if (phase > 0) {
      plan.push_back(fs.sigma.flip_rep[detail::profile_end(theta0, phase)]);
    }
    for (int leaf = 0; leaf < num_leaves; ++leaf) {
      plan.insert(plan.end(), segments[leaf][phase].rbegin(), segments[leaf][phase].rend());
    }
  }
  return {best, std::move(plan)};
}

/** Per-leaf tables of a fork database. */
struct ForkLeafTable {
  int local = -1;   ///< position in the task's variable list
  int domain = 0;   ///< leaf domain size
  int delta = 0;    ///< table depth: domain + 1 (values stabilise there)
  int goal = -1;    ///< leaf goal value
  /** p[theta][from][to]: cheapest leaf path cost with the root fixed at
      theta. */
  std::array<std::vector<std::vector<Fraction>>, 2> p;
  /** g[theta][i][v]: cheapest cost to drive the leaf from v to its goal when
      i phases remain and the current root value is theta; rows 1..delta. */
  std::array<std::vector<std::vector<Fraction>>, 2> g;
  /** Scaled integer copy of g (row-major per theta), when the fast path is
      enabled. */
  std::array<std::vector<std::int64_t>, 2> g_int;
};

/** Precomputed evaluation tables for one fork abstract task. */
struct ForkDatabase {
  int root_local = -1;
  int max_len = 1;  ///< longest profile evaluated (includes any goal slack)
  std::optional<int> goal_root;
  SigmaSchedule sigma;
  std::array<std::vector<Fraction>, 2> sigma_cum;  ///< [start value][flip count]
  std::vector<ForkLeafTable> leaves;

  /** Integer fast path: all finite entries share denominator `scale`. */
  bool fast = false;
  std::int64_t scale = 1;
  std::array<std::vector<std::int64_t>, 2> sigma_cum_int;
};

/** Builds the lookup tables realising the layered cost recursion. */
inline ForkDatabase build_fork_db(const AbstractTask& at) {
  const detail::ForkStructure fs = detail::fork_structure(at);
  ForkDatabase db;
  db.root_local = fs.root_local;
  db.max_len = detail::profile_limit(fs);
  db.goal_root = fs.goal_root;
  db.sigma = fs.sigma;
  db.sigma_cum = detail::sigma_costs(fs.sigma, db.max_len);

  for (std::size_t leaf = 0; leaf < fs.leaf_locals.size(); ++leaf) {
    ForkLeafTable table;
    table.local = fs.leaf_locals[leaf];
    table.domain = at.domain_sizes[table.local];
    table.delta = table.domain + 1;
    table.goal = fs.leaf_goals[leaf];
    const auto d = static_cast<std::size_t>(table.domain);
    for (int theta = 0; theta < 2; ++theta) {
      auto& p = table.p[theta];
      p.assign(d, std::vector<Fraction>(d, Fraction::infinity()));
      for (std::size_t v = 0; v < d; ++v) p[v][v] = Fraction(0);
      for (const detail::LeafArc& arc : fs.arcs[leaf]) {
        if (arc.root != theta && arc.root != kAnyValue) continue;
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
    }
    for (int theta = 0; theta < 2; ++theta) {
      table.g[theta].assign(static_cast<std::size_t>(table.delta) + 1,
                            std::vector<Fraction>(d, Fraction::infinity()));
    }
    for (int theta = 0; theta < 2; ++theta) {
      for (std::size_t v = 0; v < d; ++v) {
        table.g[theta][1][v] = table.p[theta][v][static_cast<std::size_t>(table.goal)];
      }
    }
    for (int i = 2; i <= table.delta; ++i) {
      for (int theta = 0; theta < 2; ++theta) {
        for (std::size_t v = 0; v < d; ++v) {
          Fraction best = Fraction::infinity();
          for (std::size_t w = 0; w < d; ++w) {
            const Fraction candidate = table.p[theta][v][w] + table.g[1 - theta][i - 1][w];
            if (candidate < best) best = candidate;
          }
          table.g[theta][i][v] = best;
        }
      }
    }
    db.leaves.push_back(std::move(table));
  }

  // Integer fast path: scale every finite entry by the common denominator.
  std::int64_t scale = 1;
  constexpr std::int64_t kScaleCap = std::int64_t{1} << 31;
  bool ok = true;
  const auto fold = [&](const Fraction& f) {
    if (ok && !f.is_infinite()) ok = detail::lcm_accumulate(scale, f.denominator(), kScaleCap);
  };
  for (int start = 0; start < 2; ++start) {
    for (const Fraction& f : db.sigma_cum[start]) fold(f);
  }
  for (const ForkLeafTable& table : db.leaves) {
    for (int theta = 0; theta < 2; ++theta) {
      for (const auto& row : table.g[theta]) {
        for (const Fraction& f : row) fold(f);
      }
    }
  }
  if (ok) {
    const auto scaled = [&](const Fraction& f) -> std::optional<std::int64_t> {
      return detail::scale_cost(f, scale);
    };
    for (int start = 0; start < 2 && ok; ++start) {
      for (const Fraction& f : db.sigma_cum[start]) {
        if (const auto v = scaled(f); v && ok) {
          db.sigma_cum_int[start].push_back(*v);
        } else {
          ok = false;
          break;
        }
      }
    }
    for (ForkLeafTable& table : db.leaves) {
      if (!ok) break;
      for (int theta = 0; theta < 2 && ok; ++theta) {
        for (const auto& row : table.g[theta]) {
          for (const Fraction& f : row) {
            if (const auto v = scaled(f); v) {
              table.g_int[theta].push_back(*v);
            } else {
              ok = false;
              break;
            }
          }
          if (!ok) break;
        }
      }
    }
  }
  db.fast = ok;
  db.scale = ok ? scale : 1;
  return db;
}

/**
 * Optimal cost from `state` (values parallel to the task's variable list)
 * using only precomputed tables: one flip-cost read plus one read per leaf
 * for each candidate profile length.
 */
inline Fraction eval_fork_db(const ForkDatabase& db, const std::vector<int>& state) {
  const int theta0 = state[db.root_local];
  if (db.fast) {
    std::int64_t best = detail::kInfCost;
    for (int k = 1; k <= db.max_len; ++k) {
      if (db.goal_root && detail::profile_end(theta0, k) != *db.goal_root) continue;
      ++fork_db_lookups;
      std::int64_t total = db.sigma_cum_int[theta0][k - 1];
      for (const ForkLeafTable& leaf : db.leaves) {
        ++fork_db_lookups;
        const int i = std::min(k, leaf.delta);
        total = detail::sat_add(
            total, leaf.g_int[theta0][static_cast<std::size_t>(i) * leaf.domain + state[leaf.local]]);
      }
      best = std::min(best, total);
    }
    return best == detail::kInfCost ? Fraction::infinity() : Fraction(best, db.scale);
  }
  Fraction best = Fraction::infinity();
  for (int k = 1; k <= db.max_len; ++k) {
    if (db.goal_root && detail::profile_end(theta0, k) != *db.goal_root) continue;
    ++fork_db_lookups;
    Fraction total = db.sigma_cum[theta0][k - 1];
    for (const ForkLeafTable& leaf : db.leaves) {
      ++fork_db_lookups;
      total = total + leaf.g[theta0][std::min(k, leaf.delta)][state[leaf.local]];
    }
    if (total < best) best = total;
  }
  return best;
}

}  // namespace planner
