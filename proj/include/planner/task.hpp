#pragma once

#include <algorithm>
#include <cassert>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "planner/fraction.hpp"

namespace planner {

/** One state variable: a name and a finite ordered domain of named values. */
struct VariableDef {
  std::string name;
  int domain_size = 0;
  std::vector<std::string> value_names;

  friend bool operator==(const VariableDef&, const VariableDef&) = default;
};

/** A complete assignment: one value index per variable, in variable order. */
struct State {
  std::vector<int> values;

  [[nodiscard]] int operator[](std::size_t v) const { return values[v]; }
  [[nodiscard]] std::size_t size() const { return values.size(); }

  friend bool operator==(const State&, const State&) = default;
  friend auto operator<=>(const State&, const State&) = default;
};

/** FNV-1a over the value sequence, for hash-based duplicate elimination. */
struct StateHash {
  std::size_t operator()(const State& s) const {
    std::size_t h = 14695981039346656037ull;
    for (const int v : s.values) {
      h ^= static_cast<std::size_t>(static_cast<std::uint32_t>(v));
      h *= 1099511628211ull;
    }
    return h;
  }
};

/**
 * A sparse assignment over a subset of variables, stored as (variable, value)
 * pairs sorted by strictly increasing variable index.
 */
class PartialAssignment {
 public:
  PartialAssignment() = default;
  PartialAssignment(std::initializer_list<std::pair<int, int>> init) {
    for (const auto& [var, value] : init) set(var, value);
  }

  /** Inserts or overwrites the entry for `var`, keeping entries sorted. */
  void set(int var, int value) {
    auto it = lower_bound(var);
    if (it != entries_.end() && it->first == var) {
      it->second = value;
    } else {
      entries_.insert(it, {var, value});
    }
  }

  void erase(int var) {
    auto it = lower_bound(var);
    if (it != entries_.end() && it->first == var) entries_.erase(it);
  }

  /** Value assigned to `var`, or -1 when `var` is unconstrained. */
  [[nodiscard]] int get(int var) const {
    auto it = lower_bound(var);
    return (it != entries_.end() && it->first == var) ? it->second : -1;
  }

  [[nodiscard]] bool defines(int var) const { return get(var) != -1; }
  [[nodiscard]] bool empty() const { return entries_.empty(); }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }
  [[nodiscard]] const std::vector<std::pair<int, int>>& entries() const { return entries_; }

  friend bool operator==(const PartialAssignment&, const PartialAssignment&) = default;
  friend auto operator<=>(const PartialAssignment&, const PartialAssignment&) = default;

 private:
  [[nodiscard]] std::vector<std::pair<int, int>>::const_iterator lower_bound(int var) const {
    return std::lower_bound(entries_.begin(), entries_.end(), var,
                            [](const auto& e, int v) { return e.first < v; });
  }
  [[nodiscard]] std::vector<std::pair<int, int>>::iterator lower_bound(int var) {
    return std::lower_bound(entries_.begin(), entries_.end(), var,
                            [](const auto& e, int v) { return e.first < v; });
  }

  std::vector<std::pair<int, int>> entries_;
};

/** An action: precondition and effect assignments plus a nonnegative cost. */
struct Action {
  std::string name;
  PartialAssignment precondition;
  PartialAssignment effect;
  Fraction cost;

  friend bool operator==(const Action&, const Action&) = default;
};

/** A ground planning task over finite-domain variables. */
struct Task {
  std::vector<VariableDef> variables;
  State initial;
  PartialAssignment goal;
  std::vector<Action> actions;
  bool metric_uses_costs = true;

  [[nodiscard]] int num_variables() const { return static_cast<int>(variables.size()); }

  friend bool operator==(const Task&, const Task&) = default;
};

/** True iff every entry of `pa` holds in `s`. */
inline bool satisfies(const PartialAssignment& pa, const State& s) {
  for (const auto& [var, value] : pa.entries()) {
    if (s.values[var] != value) return false;
  }
  return true;
}

inline bool applicable(const Action& a, const State& s) { return satisfies(a.precondition, s); }

/** Successor state: `state` with the action's effect variables overwritten. */
inline State apply(const State& state, const Action& action) {
  assert(applicable(action, state));
  State next = state;
  for (const auto& [var, value] : action.effect.entries()) next.values[var] = value;
  return next;
}

inline bool is_goal(const State& state, const Task& task) { return satisfies(task.goal, state); }

/** Structural validation; throws std::invalid_argument on the first defect. */
inline void validate(const Task& task) {
  const int n = task.num_variables();
  for (int v = 0; v < n; ++v) {
    const VariableDef& def = task.variables[v];
    if (def.domain_size < 1) {
      throw std::invalid_argument("variable " + def.name + " has empty domain");
    }
    if (static_cast<int>(def.value_names.size()) != def.domain_size) {
      throw std::invalid_argument("variable " + def.name + " value-name count mismatch");
    }
  }
  if (static_cast<int>(task.initial.values.size()) != n) {
    throw std::invalid_argument("initial state length mismatch");
  }
  auto check_value = [&](int var, int value, const std::string& where) {
    if (var < 0 || var >= n) throw std::invalid_argument(where + ": variable index out of range");
    if (value < 0 || value >= task.variables[var].domain_size) {
      throw std::invalid_argument(where + ": value out of range for " + task.variables[var].name);
    }
  };
  for (int v = 0; v < n; ++v) check_value(v, task.initial.values[v], "initial state");
  for (const auto& [var, value] : task.goal.entries()) check_value(var, value, "goal");
  for (const Action& a : task.actions) {
    if (a.effect.empty()) throw std::invalid_argument("action " + a.name + " has empty effect");
    if (a.cost < Fraction(0)) throw std::invalid_argument("action " + a.name + " has negative cost");
    for (const auto& [var, value] : a.precondition.entries()) {
      check_value(var, value, "precondition of " + a.name);
    }
    for (const auto& [var, value] : a.effect.entries()) {
      check_value(var, value, "effect of " + a.name);
    }
  }
}

}  // namespace planner
