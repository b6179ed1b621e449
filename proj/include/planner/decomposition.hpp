#pragma once

/**
 * Additive abstraction ensembles.
 *
 * A task is decomposed along its causal graph into fork subgraphs (a root
 * variable plus its successors) and inverted-fork subgraphs (a goal variable
 * plus its predecessors).  Each subgraph yields one abstract task per domain
 * mapping of its center variable; actions are split into single-effect
 * representatives, provably redundant representatives and unconstrained
 * variables are pruned, and the original action costs are divided equally
 * among all surviving representatives across the whole ensemble.  The sum of
 * optimal costs of the abstract tasks is then an admissible, consistent
 * estimate for the original task.
 */

#include <algorithm>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "planner/fraction.hpp"
#include "planner/graphs.hpp"
#include "planner/task.hpp"

namespace planner {

/** Shape of a causal-graph subgraph used for an abstract task. */
enum class SubgraphKind { Fork, IFork };

/** Which subgraph families an ensemble is built from. */
enum class EnsembleKind { Fork, IFork, ForkIFork };

/** Domain abstraction families for subgraph centers. */
enum class MappingPolicy {
  Identity,        ///< keep the center domain unchanged
  LeaveOneOut,     ///< one binary partition {x} vs rest per domain value x
  DistInitBinary,  ///< binary by hop distance from the initial value (< i)
  DistInitTernary, ///< ternary by hop distance from the initial value (2i-1)
  DistGoalTernary, ///< ternary by hop distance to the goal value (2i-1)
};

/** Whether a mapping family targets a fork root or an ifork sink; this
    selects the index range used for the distance-based families. */
enum class MappingRole { Root, Sink };

/** A fork or inverted fork of the causal graph.  Fork members are the center
    plus its causal-graph successors (arcs center -> leaf); ifork members are
    the center plus its predecessors (arcs parent -> center).  Single-node
    subgraphs are never produced. */
struct Subgraph {
  SubgraphKind kind = SubgraphKind::Fork;
  int center = -1;
  std::vector<int> members;  ///< sorted variable indices, includes center

  bool contains(int variable) const {
    return std::binary_search(members.begin(), members.end(), variable);
  }
  bool operator==(const Subgraph&) const = default;
};

/** All forks and/or iforks of a task.  Forks exist for every variable with at
    least one causal-graph successor; iforks for every goal variable with at
    least one predecessor.  Forks come first, each group ordered by center. */
inline std::vector<Subgraph> enumerate_subgraphs(const Task& task, EnsembleKind kind) {
  const CausalGraph cg = causal_graph(task);
  std::vector<Subgraph> result;
  const int n = task.num_variables();
  if (kind != EnsembleKind::IFork) {
    for (int v = 0; v < n; ++v) {
      if (cg.succ[v].empty()) continue;
      Subgraph sub{SubgraphKind::Fork, v, cg.succ[v]};
      sub.members.push_back(v);
      std::sort(sub.members.begin(), sub.members.end());
      result.push_back(std::move(sub));
    }
  }
  if (kind != EnsembleKind::Fork) {
    for (int v = 0; v < n; ++v) {
      if (cg.pred[v].empty() || !task.goal.defines(v)) continue;
      Subgraph sub{SubgraphKind::IFork, v, cg.pred[v]};
      sub.members.push_back(v);
      std::sort(sub.members.begin(), sub.members.end());
      result.push_back(std::move(sub));
    }
  }
  return result;
}

/** A surjective map from a variable's domain onto {0..abstract_size-1}.
    Maps are canonical: classes are numbered by first occurrence in domain
    order, so equal partitions compare equal. */
struct DomainMapping {
  int variable = -1;
  std::vector<int> map;  ///< value index -> abstract value index
  int abstract_size = 0;
  MappingPolicy policy = MappingPolicy::Identity;
  int param = 0;  ///< family index i (left-out value for LeaveOneOut)

  bool operator==(const DomainMapping&) const = default;
};

namespace detail {

/** Renumber classes by first occurrence and recompute abstract_size. */
inline DomainMapping canonicalize_mapping(DomainMapping m) {
  int max_label = -1;
  for (int c : m.map) max_label = std::max(max_label, c);
  std::vector<int> relabel(max_label + 1, -1);
  int next = 0;
  for (int& c : m.map) {
    if (relabel[c] == -1) relabel[c] = next++;
    c = relabel[c];
  }
  m.abstract_size = next;
  return m;
}

}  // namespace detail

/** One member of a mapping family.
    - Identity: map[v] = v (param ignored).
    - LeaveOneOut: {param} vs all other values.
    - DistInitBinary: values at hop distance < i from the initial value vs
      the rest; unreachable values fall in the far class.
    - DistInitTernary: distances < 2i-1, = 2i-1, > 2i-1 from the initial
      value; unreachable values fall in the far class.
    - DistGoalTernary: same thresholds on the hop distance to the goal value
      (which must be specified). */
inline DomainMapping make_mapping(MappingPolicy policy, const DomainTransitionGraph& g,
                                  int init_value, int goal_value, int i) {
  const int d = g.domain_size;
  DomainMapping m;
  m.variable = g.variable;
  m.policy = policy;
  m.param = i;
  m.map.resize(d);
  auto ternary = [](int dist, int i2) {
    const int threshold = 2 * i2 - 1;
    if (dist < threshold) return 0;
    if (dist == threshold) return 1;
    return 2;
  };
  switch (policy) {
    case MappingPolicy::Identity:
      for (int v = 0; v < d; ++v) m.map[v] = v;
      break;
    case MappingPolicy::LeaveOneOut:
      if (i < 0 || i >= d) throw std::invalid_argument("left-out value out of range");
      for (int v = 0; v < d; ++v) m.map[v] = (v == i) ? 0 : 1;
      break;
    case MappingPolicy::DistInitBinary: {
      const std::vector<int> dist = hop_distances_from(g, init_value).dist;
      for (int v = 0; v < d; ++v) m.map[v] = (dist[v] < i) ? 0 : 1;
      break;
    }
    case MappingPolicy::DistInitTernary: {
      const std::vector<int> dist = hop_distances_from(g, init_value).dist;
      for (int v = 0; v < d; ++v) m.map[v] = ternary(dist[v], i);
      break;
    }
    case MappingPolicy::DistGoalTernary: {
      if (goal_value < 0) throw std::invalid_argument("distance-to-goal mapping needs a goal value");
      const std::vector<int> dist = hop_distances_to(g, goal_value).dist;
      for (int v = 0; v < d; ++v) m.map[v] = ternary(dist[v], i);
      break;
    }
  }
  return detail::canonicalize_mapping(std::move(m));
}

/** Group domain values by abstract class, for readable assertions/dumps. */
inline std::vector<std::vector<int>> mapping_classes(const DomainMapping& m) {
  std::vector<std::vector<int>> classes(m.abstract_size);
  for (int v = 0; v < static_cast<int>(m.map.size()); ++v) classes[m.map[v]].push_back(v);
  return classes;
}

/** The full family of mappings a policy generates for one center variable,
    canonicalized, deduplicated, and with single-class (uninformative) maps
    dropped.  Index ranges:
    - LeaveOneOut: one candidate per domain value.
    - DistInitBinary, root: i in 1..max finite distance from the initial value.
    - DistInitBinary, sink: i in 1..distance from initial to goal value
      (falling back to the max finite distance when the goal is unreachable).
    - DistInitTernary (sinks): i in 1..ceil of half that same distance.
    - DistGoalTernary (sinks): i in 1..ceil(max finite distance to goal / 2).
    Ranges are clamped to at least one candidate. */
inline std::vector<DomainMapping> mapping_family(MappingPolicy policy, MappingRole role,
                                                 const DomainTransitionGraph& g,
                                                 int init_value, int goal_value) {
  std::vector<DomainMapping> family;
  auto push = [&](int i) {
    DomainMapping m = make_mapping(policy, g, init_value, goal_value, i);
    if (m.abstract_size < 2) return;
    for (const DomainMapping& other : family)
      if (other.map == m.map) return;
    family.push_back(std::move(m));
  };
  auto init_based_limit = [&]() {
    const ValueDistances dist = hop_distances_from(g, init_value);
    if (role == MappingRole::Sink && goal_value >= 0 && dist.dist[goal_value] != kInfiniteHops)
      return dist.dist[goal_value];
    return max_finite(dist);
  };
  switch (policy) {
    case MappingPolicy::Identity:
      push(0);
      break;
    case MappingPolicy::LeaveOneOut:
      for (int x = 0; x < g.domain_size; ++x) push(x);
      break;
    case MappingPolicy::DistInitBinary: {
      const int limit = std::max(1, init_based_limit());
      for (int i = 1; i <= limit; ++i) push(i);
      break;
    }
    case MappingPolicy::DistInitTernary: {
      const int limit = std::max(1, (init_based_limit() + 1) / 2);
      for (int i = 1; i <= limit; ++i) push(i);
      break;
    }
    case MappingPolicy::DistGoalTernary: {
      if (goal_value < 0) throw std::invalid_argument("distance-to-goal family needs a goal value");
      const int limit = std::max(1, (max_finite(hop_distances_to(g, goal_value)) + 1) / 2);
      for (int i = 1; i <= limit; ++i) push(i);
      break;
    }
  }
  return family;
}

/** A single-effect representative of an original action inside one abstract
    task.  Preconditions mention member variables only; values on the center
    variable are already mapped.  `cost` is filled by uniform_partition. */
struct Representative {
  int action = -1;      ///< index of the original action
  int effect_var = -1;  ///< original variable index (a subgraph member)
  PartialAssignment pre;
  int effect_value = -1;
  Fraction cost;
  bool redundant = false;  ///< mapped own-variable precondition equals effect

  bool operator==(const Representative&) const = default;
};

/** An abstract task: a subgraph restriction of the original task with the
    center domain abstracted.  Variables keep their original indices; `init`,
    `domain_sizes` run parallel to `variables`. */
struct AbstractTask {
  Subgraph origin;
  DomainMapping mapping;
  std::vector<int> variables;     ///< retained members, sorted ascending
  std::vector<int> domain_sizes;  ///< abstract size at the center
  std::vector<int> init;          ///< projected + mapped initial values
  PartialAssignment goal;         ///< on retained variables, mapped
  std::vector<Representative> reps;

  int center() const { return origin.center; }

  /** Position of an original variable in `variables`, or -1. */
  int local_index(int variable) const {
    const auto it = std::lower_bound(variables.begin(), variables.end(), variable);
    if (it == variables.end() || *it != variable) return -1;
    return static_cast<int>(it - variables.begin());
  }

  int center_local() const { return local_index(origin.center); }

  /** Abstract value of an original value of `variable`. */
  int map_value(int variable, int value) const {
    return variable == origin.center ? mapping.map[value] : value;
  }

  /** Project a full original state to this task's (mapped) local values. */
  std::vector<int> project(const State& s) const {
    std::vector<int> out(variables.size());
    for (std::size_t i = 0; i < variables.size(); ++i)
      out[i] = map_value(variables[i], s[variables[i]]);
    return out;
  }
};

/** Split one action into its per-effect-variable representatives inside a
    subgraph, in topological order (fork: root first, then leaves; ifork:
    parents first, then sink).  A representative keeps the action's own
    precondition on its effect variable and, for every in-subgraph arc into
    that variable, the arc source's effect value when the source is affected
    by the action, else its precondition value.  Values are unmapped here;
    actions with no effect inside the subgraph yield an empty list. */
inline std::vector<Representative> split_action(const Task& task, int action_index,
                                                const Subgraph& sub) {
  const Action& a = task.actions[action_index];
  std::vector<int> effect_vars;
  const bool center_affected = a.effect.defines(sub.center);
  if (sub.kind == SubgraphKind::Fork && center_affected) effect_vars.push_back(sub.center);
  for (const auto& [v, value] : a.effect.entries())
    if (v != sub.center && sub.contains(v)) effect_vars.push_back(v);
  if (sub.kind == SubgraphKind::IFork && center_affected) effect_vars.push_back(sub.center);

  // value of an arc source as seen by a later representative
  auto source_value = [&](int u) {
    if (a.effect.defines(u)) return a.effect.get(u);
    return a.precondition.get(u);  // -1 when unspecified
  };

  std::vector<Representative> reps;
  reps.reserve(effect_vars.size());
  for (int v : effect_vars) {
    Representative rep;
    rep.action = action_index;
    rep.effect_var = v;
    rep.effect_value = a.effect.get(v);
    if (a.precondition.defines(v)) rep.pre.set(v, a.precondition.get(v));
    if (sub.kind == SubgraphKind::Fork) {
      if (v != sub.center) {
        const int value = source_value(sub.center);
        if (value >= 0) rep.pre.set(sub.center, value);
      }
    } else if (v == sub.center) {
      for (int parent : sub.members) {
        if (parent == sub.center) continue;
        const int value = source_value(parent);
        if (value >= 0) rep.pre.set(parent, value);
      }
    }
    reps.push_back(std::move(rep));
  }
  return reps;
}

/** Restrict the task to the subgraph and abstract the center domain: project
    initial state and goal, split every action, map center values in the
    representatives, and mark representatives that provably cannot change
    their variable (specified own-variable precondition mapping to the mapped
    effect value) as redundant.  Pruning is a separate step. */
inline AbstractTask build_abstract_task(const Subgraph& sub, const DomainMapping& mapping,
                                        const Task& task) {
  if (mapping.variable != sub.center)
    throw std::invalid_argument("mapping must target the subgraph center");
  AbstractTask at;
  at.origin = sub;
  at.mapping = mapping;
  at.variables = sub.members;
  at.domain_sizes.reserve(at.variables.size());
  at.init.reserve(at.variables.size());
  for (int v : at.variables) {
    at.domain_sizes.push_back(v == sub.center ? mapping.abstract_size
                                              : task.variables[v].domain_size);
    at.init.push_back(at.map_value(v, task.initial[v]));
  }
  for (const auto& [v, value] : task.goal.entries())
    if (sub.contains(v)) at.goal.set(v, at.map_value(v, value));
  for (std::size_t a = 0; a < task.actions.size(); ++a) {
    for (Representative& rep : split_action(task, static_cast<int>(a), sub)) {
      if (rep.pre.defines(sub.center))
        rep.pre.set(sub.center, mapping.map[rep.pre.get(sub.center)]);
      if (rep.effect_var == sub.center) rep.effect_value = mapping.map[rep.effect_value];
      rep.redundant =
          rep.pre.defines(rep.effect_var) && rep.pre.get(rep.effect_var) == rep.effect_value;
      at.reps.push_back(std::move(rep));
    }
  }
  return at;
}

/** Drop redundant representatives, then iterate to fixpoint:
    - ifork: drop every parent (with its representatives and goal entry) that
      no surviving sink representative's precondition depends on;
    - fork: drop every leaf without a goal entry (with its representatives).
    Tasks left with fewer than two variables are discarded by build_ensemble. */
inline AbstractTask prune(AbstractTask at) {
  std::erase_if(at.reps, [](const Representative& r) { return r.redundant; });
  bool changed = true;
  while (changed) {
    changed = false;
    std::vector<int> dropped;
    for (int v : at.variables) {
      if (v == at.origin.center) continue;
      bool keep;
      if (at.origin.kind == SubgraphKind::IFork) {
        keep = std::any_of(at.reps.begin(), at.reps.end(), [&](const Representative& r) {
          return r.effect_var == at.origin.center && r.pre.defines(v);
        });
      } else {
        keep = at.goal.defines(v);
      }
      if (!keep) dropped.push_back(v);
    }
    if (dropped.empty()) break;
    changed = true;
    for (int v : dropped) {
      const int li = at.local_index(v);
      at.variables.erase(at.variables.begin() + li);
      at.domain_sizes.erase(at.domain_sizes.begin() + li);
      at.init.erase(at.init.begin() + li);
      at.goal.erase(v);
      std::erase_if(at.reps, [v](const Representative& r) { return r.effect_var == v; });
    }
  }
  return at;
}

/** Mapping policies for the two subgraph roles. */
struct Policies {
  MappingPolicy root = MappingPolicy::LeaveOneOut;
  MappingPolicy sink = MappingPolicy::DistGoalTernary;
};

/** The final additive abstraction: all pruned abstract tasks plus the joint
    uniform cost partition.  rep_count[a] is the total number of surviving
    representatives of original action a across all tasks; each such
    representative carries exactly cost(a) / rep_count[a]. */
struct AbstractionEnsemble {
  EnsembleKind kind = EnsembleKind::ForkIFork;
  std::vector<AbstractTask> tasks;
  std::vector<int> rep_count;
};

/** Divide every original action's cost equally among all of its surviving
    representatives across the whole ensemble. */
inline void uniform_partition(AbstractionEnsemble& ensemble, const Task& task) {
  ensemble.rep_count.assign(task.actions.size(), 0);
  for (const AbstractTask& at : ensemble.tasks)
    for (const Representative& rep : at.reps) ++ensemble.rep_count[rep.action];
  for (AbstractTask& at : ensemble.tasks)
    for (Representative& rep : at.reps)
      rep.cost = task.actions[rep.action].cost / Fraction(ensemble.rep_count[rep.action]);
}

/** Build the complete ensemble for a task: enumerate subgraphs, generate the
    mapping family of each center (root policy for forks, sink policy for
    iforks), build and prune each abstract task, drop tasks with fewer than
    two variables, and compute the joint uniform partition.  Root policies:
    Identity, LeaveOneOut, DistInitBinary.  Sink policies: Identity,
    DistGoalTernary, DistInitTernary, DistInitBinary. */
inline AbstractionEnsemble build_ensemble(const Task& task, EnsembleKind kind,
                                          const Policies& policies = {}) {
  switch (policies.root) {
    case MappingPolicy::Identity:
    case MappingPolicy::LeaveOneOut:
    case MappingPolicy::DistInitBinary:
      break;
    default:
      throw std::invalid_argument("unsupported root mapping policy");
  }
  switch (policies.sink) {
    case MappingPolicy::Identity:
    case MappingPolicy::DistGoalTernary:
    case MappingPolicy::DistInitTernary:
    case MappingPolicy::DistInitBinary:
      break;
    default:
      throw std::invalid_argument("unsupported sink mapping policy");
  }
  AbstractionEnsemble ensemble;
  ensemble.kind = kind;
  for (const Subgraph& sub : enumerate_subgraphs(task, kind)) {
    const DomainTransitionGraph g = dtg(task, sub.center);
    const int init_value = task.initial[sub.center];
    const int goal_value = task.goal.defines(sub.center) ? task.goal.get(sub.center) : -1;
    const bool is_fork = sub.kind == SubgraphKind::Fork;
    const MappingPolicy policy = is_fork ? policies.root : policies.sink;
    const MappingRole role = is_fork ? MappingRole::Root : MappingRole::Sink;
    for (const DomainMapping& mapping : mapping_family(policy, role, g, init_value, goal_value)) {
      AbstractTask at = prune(build_abstract_task(sub, mapping, task));
      if (at.variables.size() >= 2) ensemble.tasks.push_back(std::move(at));
    }
  }
  uniform_partition(ensemble, task);
  return ensemble;
}

/** Convert an abstract task into a standalone Task (variables renumbered to
    local indices) so generic solvers can run on it.  Abstracted center values
    get synthetic names joining the original value names of each class. */
inline Task materialize(const AbstractTask& at, const Task& original) {
  Task t;
  t.metric_uses_costs = true;
  for (std::size_t i = 0; i < at.variables.size(); ++i) {
    const int v = at.variables[i];
    const VariableDef& orig = original.variables[v];
    VariableDef def;
    def.name = orig.name;
    def.domain_size = at.domain_sizes[i];
    if (v == at.origin.center && at.mapping.abstract_size != orig.domain_size) {
      def.value_names.assign(def.domain_size, "");
      for (int value = 0; value < orig.domain_size; ++value) {
        std::string& name = def.value_names[at.mapping.map[value]];
        if (!name.empty()) name += "+";
        name += value < static_cast<int>(orig.value_names.size())
                    ? orig.value_names[value]
                    : "v" + std::to_string(value);
      }
    } else {
      def.value_names = orig.value_names;
    }
    t.variables.push_back(std::move(def));
  }
  t.initial = State{at.init};
  for (const auto& [v, value] : at.goal.entries()) t.goal.set(at.local_index(v), value);
  for (const Representative& rep : at.reps) {
    Action a;
    a.name = original.actions[rep.action].name + "^" + original.variables[rep.effect_var].name;
    a.cost = rep.cost;
    for (const auto& [v, value] : rep.pre.entries()) a.precondition.set(at.local_index(v), value);
    a.effect.set(at.local_index(rep.effect_var), rep.effect_value);
    t.actions.push_back(std::move(a));
  }
  validate(t);
  return t;
}

/** Human-readable ensemble listing: per task its variables, goal, and
    representative counts per original action with exact partitioned costs. */
inline void dump_ensemble(const AbstractionEnsemble& ensemble, const Task& task,
                          std::ostream& out) {
  out << "ensemble: " << ensemble.tasks.size() << " abstract task(s)\n";
  for (std::size_t i = 0; i < ensemble.tasks.size(); ++i) {
    const AbstractTask& at = ensemble.tasks[i];
    const char* kind = at.origin.kind == SubgraphKind::Fork ? "fork" : "ifork";
    out << "task " << i << ": " << kind << " centered on "
        << task.variables[at.center()].name << ", classes {";
    const std::vector<std::vector<int>> classes = mapping_classes(at.mapping);
    for (std::size_t c = 0; c < classes.size(); ++c) {
      out << (c ? " | " : "");
      for (std::size_t j = 0; j < classes[c].size(); ++j)
        out << (j ? "," : "") << task.variables[at.center()].value_names[classes[c][j]];
    }
    out << "}\n  variables:";
    for (int v : at.variables) out << " " << task.variables[v].name;
    out << "\n  goal:";
    for (const auto& [v, value] : at.goal.entries())
      out << " " << task.variables[v].name << "=" << value;
    out << "\n";
    std::vector<int> count(task.actions.size(), 0);
    for (const Representative& rep : at.reps) ++count[rep.action];
    for (std::size_t a = 0; a < task.actions.size(); ++a)
      if (count[a] > 0)
        out << "  " << task.actions[a].name << ": " << count[a] << " representative(s) of cost "
            << (task.actions[a].cost / Fraction(ensemble.rep_count[a])).str() << "\n";
  }
}

}  // namespace planner
