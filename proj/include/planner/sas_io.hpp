#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "planner/task.hpp"

namespace planner {

/** Malformed input: wrong token, bad count, unexpected end of file. */
class SasParseError : public std::runtime_error {
 public:
  SasParseError(int line, const std::string& message)
      : std::runtime_error("SAS parse error at line " + std::to_string(line) + ": " + message),
        line_(line) {}

  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

/** Well-formed input using a feature outside the supported fragment. */
class SasUnsupportedError : public std::runtime_error {
 public:
  SasUnsupportedError(int line, const std::string& message)
      : std::runtime_error("unsupported SAS feature at line " + std::to_string(line) + ": " +
                           message),
        line_(line) {}

  [[nodiscard]] int line() const { return line_; }

 private:
  int line_;
};

namespace detail {

/** Line-oriented reader that tracks the current line number for diagnostics. */
class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  [[nodiscard]] int line_number() const { return line_; }

  std::string next(const char* what) {
    std::string s;
    if (!std::getline(in_, s)) {
      throw SasParseError(line_ + 1, std::string("unexpected end of input, expected ") + what);
    }
    ++line_;
    if (!s.empty() && s.back() == '\r') s.pop_back();
    return s;
  }

  void expect(const std::string& token) {
    const std::string s = next(("\"" + token + "\"").c_str());
    if (s != token) {
      throw SasParseError(line_, "expected \"" + token + "\" but found \"" + s + "\"");
    }
  }

  std::int64_t next_int(const char* what) {
    const std::string s = next(what);
    return parse_int(s, what);
  }

  std::int64_t parse_int(const std::string& s, const char* what) {
    try {
      std::size_t pos = 0;
      const long long value = std::stoll(s, &pos);
      if (pos != s.size()) throw std::invalid_argument(s);
      return value;
    } catch (const std::exception&) {
      throw SasParseError(line_, std::string("expected integer for ") + what + " but found \"" +
                                     s + "\"");
    }
  }

  /** Splits the current line into whitespace-separated integers. */
  std::vector<std::int64_t> next_all_ints(const char* what) {
    const std::string s = next(what);
    std::istringstream iss(s);
    std::vector<std::int64_t> out;
    std::string tok;
    while (iss >> tok) out.push_back(parse_int(tok, what));
    return out;
  }

  /** Splits the current line into exactly `n` integers. */
  std::vector<std::int64_t> next_ints(std::size_t n, const char* what) {
    const std::vector<std::int64_t> out = next_all_ints(what);
    if (out.size() != n) {
      throw SasParseError(line_, std::string("expected ") + std::to_string(n) + " integers for " +
                                     what + " but found " + std::to_string(out.size()));
    }
    return out;
  }

 private:
  std::istream& in_;
  int line_ = 0;
};

}  // namespace detail

/**
 * Parses the translator text format (version 3).
 *
 * Mutex groups are read and discarded, prevail conditions are merged into the
 * precondition, and pre/post lines with pre = -1 become effect-only entries.
 * Metric flag 0 forces every action cost to 1; flag 1 uses the listed costs.
 * Axioms and conditional effects raise SasUnsupportedError.
 */
inline Task parse_sas(std::istream& in) {
  detail::LineReader r(in);

  r.expect("begin_version");
  const std::int64_t version = r.next_int("format version");
  if (version != 3) {
    throw SasUnsupportedError(r.line_number(), "only format version 3 is supported");
  }
  r.expect("end_version");

  r.expect("begin_metric");
  const std::int64_t metric = r.next_int("metric flag");
  if (metric != 0 && metric != 1) {
    throw SasParseError(r.line_number(), "metric flag must be 0 or 1");
  }
  r.expect("end_metric");

  Task task;
  task.metric_uses_costs = metric == 1;

  const std::int64_t var_count = r.next_int("variable count");
  if (var_count < 0) throw SasParseError(r.line_number(), "negative variable count");
  task.variables.reserve(static_cast<std::size_t>(var_count));
  for (std::int64_t v = 0; v < var_count; ++v) {
    r.expect("begin_variable");
    VariableDef def;
    def.name = r.next("variable name");
    const std::int64_t axiom_layer = r.next_int("axiom layer");
    if (axiom_layer != -1) {
      throw SasUnsupportedError(r.line_number(), "axiom layers are not supported");
    }
    const std::int64_t domain = r.next_int("domain size");
    if (domain < 0) throw SasParseError(r.line_number(), "negative domain size");
    def.domain_size = static_cast<int>(domain);
    def.value_names.reserve(static_cast<std::size_t>(domain));
    for (std::int64_t k = 0; k < domain; ++k) def.value_names.push_back(r.next("value name"));
    r.expect("end_variable");
    task.variables.push_back(std::move(def));
  }

  const std::int64_t mutex_count = r.next_int("mutex group count");
  if (mutex_count < 0) throw SasParseError(r.line_number(), "negative mutex group count");
  for (std::int64_t m = 0; m < mutex_count; ++m) {
    r.expect("begin_mutex_group");
    const std::int64_t facts = r.next_int("mutex fact count");
    if (facts < 0) throw SasParseError(r.line_number(), "negative mutex fact count");
    for (std::int64_t k = 0; k < facts; ++k) r.next_ints(2, "mutex fact");
    r.expect("end_mutex_group");
  }

  r.expect("begin_state");
  task.initial.values.reserve(static_cast<std::size_t>(var_count));
  for (std::int64_t v = 0; v < var_count; ++v) {
    task.initial.values.push_back(static_cast<int>(r.next_int("initial state value")));
  }
  r.expect("end_state");

  r.expect("begin_goal");
  const std::int64_t goal_count = r.next_int("goal entry count");
  if (goal_count < 0) throw SasParseError(r.line_number(), "negative goal entry count");
  for (std::int64_t k = 0; k < goal_count; ++k) {
    const auto pair = r.next_ints(2, "goal entry");
    const int var = static_cast<int>(pair[0]);
    if (task.goal.defines(var)) {
      throw SasParseError(r.line_number(), "goal constrains variable " + std::to_string(var) +
                                               " twice");
    }
    task.goal.set(var, static_cast<int>(pair[1]));
  }
  r.expect("end_goal");

  const std::int64_t op_count = r.next_int("operator count");
  if (op_count < 0) throw SasParseError(r.line_number(), "negative operator count");
  task.actions.reserve(static_cast<std::size_t>(op_count));
  for (std::int64_t o = 0; o < op_count; ++o) {
    r.expect("begin_operator");
    Action action;
    action.name = r.next("operator name");

    const std::int64_t prevail_count = r.next_int("prevail count");
    if (prevail_count < 0) throw SasParseError(r.line_number(), "negative prevail count");
    for (std::int64_t k = 0; k < prevail_count; ++k) {
      const auto pair = r.next_ints(2, "prevail condition");
      const int var = static_cast<int>(pair[0]);
      if (action.precondition.defines(var)) {
        throw SasParseError(r.line_number(), "operator " + action.name +
                                                 " constrains variable " + std::to_string(var) +
                                                 " twice");
      }
      action.precondition.set(var, static_cast<int>(pair[1]));
    }

    const std::int64_t effect_count = r.next_int("effect count");
    if (effect_count < 0) throw SasParseError(r.line_number(), "negative effect count");
    for (std::int64_t k = 0; k < effect_count; ++k) {
      const auto quad = r.next_all_ints("effect line");
      if (!quad.empty() && quad[0] != 0) {
        throw SasUnsupportedError(r.line_number(), "conditional effects are not supported");
      }
      if (quad.size() != 4) {
        throw SasParseError(r.line_number(), "expected 4 integers for effect line but found " +
                                                 std::to_string(quad.size()));
      }
      const int var = static_cast<int>(quad[1]);
      const int pre = static_cast<int>(quad[2]);
      const int post = static_cast<int>(quad[3]);
      if (action.effect.defines(var) || (pre != -1 && action.precondition.defines(var))) {
        throw SasParseError(r.line_number(), "operator " + action.name +
                                                 " constrains variable " + std::to_string(var) +
                                                 " twice");
      }
      if (pre != -1) action.precondition.set(var, pre);
      action.effect.set(var, post);
    }

    const std::int64_t cost = r.next_int("operator cost");
    action.cost = task.metric_uses_costs ? Fraction(cost) : Fraction(1);
    r.expect("end_operator");
    task.actions.push_back(std::move(action));
  }

  const std::int64_t axiom_count = r.next_int("axiom count");
  if (axiom_count != 0) {
    throw SasUnsupportedError(r.line_number(), "axioms are not supported");
  }

  validate(task);
  return task;
}

inline Task parse_sas(const std::string& text) {
  std::istringstream in(text);
  return parse_sas(in);
}

/**
 * Serializes a task in the same text format.  No mutex groups are emitted, so
 * parse_sas(emit_sas(t)) == t field-for-field.  All costs must be integral
 * (fractional costs only arise in abstract tasks, which are not serialized).
 */
inline void emit_sas(const Task& task, std::ostream& out) {
  out << "begin_version\n3\nend_version\n";
  out << "begin_metric\n" << (task.metric_uses_costs ? 1 : 0) << "\nend_metric\n";

  out << task.variables.size() << "\n";
  for (const VariableDef& def : task.variables) {
    out << "begin_variable\n" << def.name << "\n-1\n" << def.domain_size << "\n";
    for (const std::string& value_name : def.value_names) out << value_name << "\n";
    out << "end_variable\n";
  }

  out << 0 << "\n";  // mutex groups

  out << "begin_state\n";
  for (const int value : task.initial.values) out << value << "\n";
  out << "end_state\n";

  out << "begin_goal\n" << task.goal.size() << "\n";
  for (const auto& [var, value] : task.goal.entries()) out << var << " " << value << "\n";
  out << "end_goal\n";

  out << task.actions.size() << "\n";
  for (const Action& action : task.actions) {
    out << "begin_operator\n" << action.name << "\n";
    std::vector<std::pair<int, int>> prevail;
    for (const auto& [var, value] : action.precondition.entries()) {
      if (!action.effect.defines(var)) prevail.push_back({var, value});
    }
    out << prevail.size() << "\n";
    for (const auto& [var, value] : prevail) out << var << " " << value << "\n";
    out << action.effect.size() << "\n";
    for (const auto& [var, value] : action.effect.entries()) {
      out << 0 << " " << var << " " << action.precondition.get(var) << " " << value << "\n";
    }
    if (!action.cost.is_integer()) {
      throw std::domain_error("emit_sas: action " + action.name + " has non-integer cost " +
                              action.cost.str());
    }
    out << action.cost.numerator() << "\n";
    out << "end_operator\n";
  }

  out << 0 << "\n";  // axioms
}

inline std::string emit_sas(const Task& task) {
  std::ostringstream out;
  emit_sas(task, out);
  return out.str();
}

}  // namespace planner
