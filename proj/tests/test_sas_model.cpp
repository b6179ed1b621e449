#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>
#include <string>

#include "planner/fraction.hpp"
#include "planner/sas_io.hpp"
#include "planner/task.hpp"

using namespace planner;

namespace {

const std::string kMinimal = R"(begin_version
3
end_version
begin_metric
0
end_metric
1
begin_variable
var0
-1
2
off
on
end_variable
0
begin_state
0
end_state
begin_goal
1
0 1
end_goal
1
begin_operator
flip
0
1
0 0 0 1
7
end_operator
0
)";

std::string replace_first(std::string text, const std::string& from, const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  return text.replace(pos, from.size(), to);
}

Task make_mixed_task() {
  Task t;
  t.variables = {{"a", 2, {"a0", "a1"}}, {"b", 3, {"b0", "b1", "b2"}}, {"c", 2, {"c0", "c1"}}};
  t.initial.values = {0, 1, 0};
  t.goal = PartialAssignment{{1, 2}};
  Action x;
  x.name = "x";
  x.precondition = PartialAssignment{{0, 0}, {1, 1}};
  x.effect = PartialAssignment{{1, 2}};
  x.cost = Fraction(3);
  Action y;
  y.name = "y with spaces";
  y.effect = PartialAssignment{{0, 1}, {2, 1}};
  y.cost = Fraction(0);
  t.actions = {x, y};
  t.metric_uses_costs = true;
  return t;
}

}  // namespace

TEST_CASE("minimal task parses; metric 0 forces unit costs") {
  const Task t = parse_sas(kMinimal);
  CHECK(t.num_variables() == 1);
  CHECK(t.variables[0].name == "var0");
  CHECK(t.variables[0].value_names == std::vector<std::string>{"off", "on"});
  CHECK(t.initial.values == std::vector<int>{0});
  CHECK(t.goal == PartialAssignment{{0, 1}});
  REQUIRE(t.actions.size() == 1);
  CHECK(t.actions[0].name == "flip");
  CHECK(t.actions[0].precondition == PartialAssignment{{0, 0}});
  CHECK(t.actions[0].effect == PartialAssignment{{0, 1}});
  CHECK(t.actions[0].cost == Fraction(1));  // metric 0 overrides the listed 7
  CHECK_FALSE(t.metric_uses_costs);
}

TEST_CASE("emit then parse is the identity") {
  const Task t = make_mixed_task();
  const std::string text = emit_sas(t);
  const Task back = parse_sas(text);
  CHECK(back == t);

  SECTION("precondition-only variables are emitted as prevail lines") {
    // Action x constrains a without affecting it -> prevail "0 0";
    // its own-variable effect line carries pre value 1.
    CHECK(text.find("\n1\n0 0\n1\n0 1 1 2\n") != std::string::npos);
  }
  SECTION("effect-only entries use pre = -1") {
    CHECK(text.find("0 0 -1 1") != std::string::npos);
    CHECK(text.find("0 2 -1 1") != std::string::npos);
  }
  SECTION("round trip also holds for the minimal metric-0 task") {
    const Task m = parse_sas(kMinimal);
    CHECK(parse_sas(emit_sas(m)) == m);
  }
}

TEST_CASE("emitting an empty goal writes count 0") {
  Task t = make_mixed_task();
  t.goal = PartialAssignment{};
  CHECK(emit_sas(t).find("begin_goal\n0\nend_goal") != std::string::npos);
  CHECK(parse_sas(emit_sas(t)) == t);
}

TEST_CASE("fractional costs cannot be serialized") {
  Task t = make_mixed_task();
  t.actions[0].cost = Fraction(1, 3);
  CHECK_THROWS_AS(emit_sas(t), std::domain_error);
}

TEST_CASE("mutex groups are parsed and discarded") {
  const std::string text = replace_first(kMinimal, "end_variable\n0\n",
                                         "end_variable\n1\n"
                                         "begin_mutex_group\n2\n0 0\n0 1\nend_mutex_group\n");
  const Task with_mutex = parse_sas(text);
  CHECK(with_mutex == parse_sas(kMinimal));
}

TEST_CASE("unsupported features are rejected with their own error type") {
  SECTION("format version other than 3") {
    const auto text = replace_first(kMinimal, "begin_version\n3", "begin_version\n2");
    CHECK_THROWS_AS(parse_sas(text), SasUnsupportedError);
    try {
      parse_sas(text);
    } catch (const SasUnsupportedError& e) {
      CHECK(e.line() == 2);
    }
  }
  SECTION("axiom layer other than -1") {
    CHECK_THROWS_AS(parse_sas(replace_first(kMinimal, "var0\n-1", "var0\n0")),
                    SasUnsupportedError);
  }
  SECTION("nonzero axiom count") {
    CHECK_THROWS_AS(parse_sas(replace_first(kMinimal, "end_operator\n0\n", "end_operator\n1\n")),
                    SasUnsupportedError);
  }
  SECTION("conditional effect") {
    CHECK_THROWS_AS(parse_sas(replace_first(kMinimal, "0 0 0 1", "1 0 0 0 0 1")),
                    SasUnsupportedError);
  }
}

TEST_CASE("malformed input raises a parse error with a line number") {
  SECTION("bad metric flag") {
    CHECK_THROWS_AS(parse_sas(replace_first(kMinimal, "begin_metric\n0", "begin_metric\n2")),
                    SasParseError);
  }
  SECTION("non-integer where a count is required") {
    CHECK_THROWS_AS(parse_sas(replace_first(kMinimal, "begin_goal\n1", "begin_goal\nmany")),
                    SasParseError);
  }
  SECTION("goal pair with wrong arity") {
    CHECK_THROWS_AS(parse_sas(replace_first(kMinimal, "0 1\nend_goal", "0 1 2\nend_goal")),
                    SasParseError);
  }
  SECTION("duplicate goal variable") {
    CHECK_THROWS_AS(
        parse_sas(replace_first(kMinimal, "begin_goal\n1\n0 1", "begin_goal\n2\n0 1\n0 0")),
        SasParseError);
  }
  SECTION("truncated file") {
    const std::string text(kMinimal, 0, kMinimal.find("begin_goal"));
    try {
      parse_sas(text);
      FAIL("expected SasParseError");
    } catch (const SasParseError& e) {
      CHECK(e.line() > 0);
      CHECK(std::string(e.what()).find("line") != std::string::npos);
    }
  }
  SECTION("operator constraining a variable twice") {
    const auto text = replace_first(kMinimal, "flip\n0\n1\n", "flip\n1\n0 0\n1\n");
    CHECK_THROWS_AS(parse_sas(text), SasParseError);
  }
}

TEST_CASE("validation errors") {
  SECTION("domain size 0") {
    const auto text = replace_first(kMinimal, "-1\n2\noff\non\n", "-1\n0\n");
    CHECK_THROWS_AS(parse_sas(text), std::invalid_argument);
  }
  SECTION("initial value out of range") {
    CHECK_THROWS_AS(parse_sas(replace_first(kMinimal, "begin_state\n0", "begin_state\n5")),
                    std::invalid_argument);
  }
  SECTION("negative action cost rejected by validate") {
    Task t = make_mixed_task();
    t.actions[0].cost = Fraction(-1);
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
  }
  SECTION("empty effect rejected by validate") {
    Task t = make_mixed_task();
    t.actions[0].effect = PartialAssignment{};
    CHECK_THROWS_AS(validate(t), std::invalid_argument);
  }
}

TEST_CASE("partial assignment primitives") {
  PartialAssignment pa{{3, 1}, {0, 2}};
  CHECK(pa.entries() == std::vector<std::pair<int, int>>{{0, 2}, {3, 1}});  // sorted
  CHECK(pa.get(0) == 2);
  CHECK(pa.get(1) == -1);
  CHECK(pa.defines(3));
  pa.set(0, 0);  // overwrite keeps size
  CHECK(pa.size() == 2);
  CHECK(pa.get(0) == 0);
  pa.erase(3);
  CHECK(pa == PartialAssignment{{0, 0}});

  const State s{{0, 1, 2}};
  CHECK(satisfies(PartialAssignment{{1, 1}, {2, 2}}, s));
  CHECK_FALSE(satisfies(PartialAssignment{{0, 1}}, s));
  CHECK(satisfies(PartialAssignment{}, s));
}

TEST_CASE("apply changes exactly the effect variables") {
  // Miniature pick-up: robot location, one arm, one ball.
  Task t;
  t.variables = {{"robot", 2, {"r1", "r2"}},
                 {"right", 2, {"empty", "b1"}},
                 {"b1", 3, {"r1", "r2", "robot"}}};
  t.initial.values = {0, 0, 0};
  t.goal = PartialAssignment{{2, 1}};
  Action pickup;
  pickup.name = "pickup";
  pickup.precondition = PartialAssignment{{0, 0}, {1, 0}, {2, 0}};
  pickup.effect = PartialAssignment{{1, 1}, {2, 2}};
  pickup.cost = Fraction(1);
  t.actions = {pickup};
  validate(t);

  REQUIRE(applicable(pickup, t.initial));
  const State next = apply(t.initial, pickup);
  CHECK(next.values == std::vector<int>{0, 1, 2});  // robot untouched, ball held, arm full
  CHECK_FALSE(is_goal(next, t));
  CHECK(is_goal(State{{1, 0, 1}}, t));

  SECTION("no-precondition action applies anywhere") {
    Action flip;
    flip.name = "teleport";
    flip.effect = PartialAssignment{{0, 1}};
    flip.cost = Fraction(1);
    CHECK(applicable(flip, next));
    CHECK(apply(next, flip).values == std::vector<int>{1, 1, 2});
  }
  SECTION("goal with empty assignment accepts every state") {
    Task open = t;
    open.goal = PartialAssignment{};
    CHECK(is_goal(t.initial, open));
  }
}
