#include <catch2/catch_amalgamated.hpp>

#include <stdexcept>

#include "planner/generators.hpp"
#include "planner/search.hpp"
#include "planner/task.hpp"
#include "test_util.hpp"

using namespace planner;
using planner::testing::find_action;
using planner::testing::oracle_h_star_initial;

namespace {
const auto zero_heuristic = [](const State&) { return Fraction(0); };
}

TEST_CASE("gripper generator structure") {
  const Task t = gen_gripper(2);
  validate(t);
  CHECK(t.num_variables() == 5);  // robot, two arms, two balls
  CHECK(t.actions.size() == 2 + 8 * 2);
  CHECK(t.goal == PartialAssignment{{3, 1}, {4, 1}});

  SECTION("picking up a ball fills the arm and leaves the robot in place") {
    const Action& pickup = t.actions[find_action(t, "pickup-b1-right-r1")];
    REQUIRE(applicable(pickup, t.initial));
    const State next = apply(t.initial, pickup);
    CHECK(next.values[0] == t.initial.values[0]);  // robot unchanged
    CHECK(next.values[2] == 1);                    // right holds b1
    CHECK(next.values[3] == 2);                    // b1 held by robot
  }
  SECTION("round trip through the serializer") {
    CHECK(t.actions[0].name == "move-r1-r2");
    CHECK(gen_gripper(3).variables[5].name == "b3");
    CHECK_THROWS_AS(gen_gripper(0), std::invalid_argument);
  }
}

TEST_CASE("gripper optimal costs are 3n-1 for even n, 3n for odd n") {
  CHECK(oracle_h_star_initial(gen_gripper(1)) == Fraction(3));
  CHECK(oracle_h_star_initial(gen_gripper(2)) == Fraction(5));
  CHECK(oracle_h_star_initial(gen_gripper(3)) == Fraction(9));
  CHECK(oracle_h_star_initial(gen_gripper(4)) == Fraction(11));
  CHECK(oracle_h_star_initial(gen_gripper(5)) == Fraction(15));
}

TEST_CASE("line-logistics generator structure and optimal cost 4n") {
  const Task t = gen_logistics_line(2);
  validate(t);
  CHECK(t.num_variables() == 4);     // two trucks, two packages
  CHECK(t.variables[0].domain_size == 5);
  CHECK(t.variables[2].domain_size == 7);
  // moves between all ordered location pairs: 2 trucks * 5*4; loads/unloads: 2*2*5 each
  CHECK(t.actions.size() == 40 + 20 + 20);
  CHECK(t.initial.values == std::vector<int>{0, 0, 1, 2});
  CHECK(t.goal == PartialAssignment{{2, 3}, {3, 4}});

  CHECK(oracle_h_star_initial(gen_logistics_line(1)) == Fraction(4));
  CHECK(oracle_h_star_initial(gen_logistics_line(2)) == Fraction(8));
  CHECK_THROWS_AS(gen_logistics_line(0), std::invalid_argument);
}

TEST_CASE("two-city task structure and optimal cost 19") {
  const Task t = gen_two_city_logistics();
  validate(t);
  CHECK(t.num_variables() == 6);
  int drives = 0, loads = 0, unloads = 0;
  for (const Action& a : t.actions) {
    if (a.name.starts_with("drive-")) ++drives;
    if (a.name.starts_with("load-")) ++loads;
    if (a.name.starts_with("unload-")) ++unloads;
  }
  CHECK(drives == 18);
  CHECK(loads == 26);
  CHECK(unloads == 26);
  CHECK(oracle_h_star_initial(t) == Fraction(19));
}

TEST_CASE("fixed dominance instances have optimal costs 7 and 4") {
  const Task pi1 = gen_fork_dominant();
  const Task pi2 = gen_ifork_dominant();
  validate(pi1);
  validate(pi2);
  CHECK(pi1.num_variables() == 6);
  CHECK(pi1.actions.size() == 9);
  CHECK(pi2.actions.size() == 10);
  CHECK(oracle_h_star_initial(pi1) == Fraction(7));
  CHECK(oracle_h_star_initial(pi2) == Fraction(4));
}

TEST_CASE("generate dispatches on family name") {
  CHECK(generate({"gripper", 2}) == gen_gripper(2));
  CHECK(generate({"logistics-line", 3}) == gen_logistics_line(3));
  CHECK(generate({"two-city-logistics", 1}) == gen_two_city_logistics());
  CHECK(generate({"fork-dominant", 1}) == gen_fork_dominant());
  CHECK(generate({"ifork-dominant", 1}) == gen_ifork_dominant());
  CHECK_THROWS_AS(generate({"blocksworld", 1}), std::invalid_argument);
}

TEST_CASE("astar with the zero heuristic finds optimal plans") {
  const Task t = gen_two_city_logistics();
  const SearchResult r = astar(t, zero_heuristic);
  REQUIRE(r.status == SearchStatus::Solved);
  REQUIRE(r.plan.has_value());
  CHECK(r.plan->cost == Fraction(19));
  CHECK(validate_plan(t, *r.plan).ok);
  CHECK(r.stats.h_initial == Fraction(0));
  CHECK(r.stats.expanded <= r.stats.generated);
  CHECK(r.stats.reopened == 0);  // h == 0 is consistent

  SECTION("identical inputs give identical runs") {
    const SearchResult again = astar(t, zero_heuristic);
    REQUIRE(again.plan.has_value());
    CHECK(again.plan->actions == r.plan->actions);
    CHECK(again.stats.expanded == r.stats.expanded);
    CHECK(again.stats.generated == r.stats.generated);
  }
}

TEST_CASE("astar handles trivial and degenerate cases") {
  Task t;
  t.variables = {{"x", 3, {"0", "1", "2"}}};
  t.initial.values = {0};
  Action step;
  step.name = "step";
  step.precondition = PartialAssignment{{0, 0}};
  step.effect = PartialAssignment{{0, 1}};
  step.cost = Fraction(2);
  t.actions = {step};

  SECTION("goal satisfied at the initial state") {
    t.goal = PartialAssignment{{0, 0}};
    const SearchResult r = astar(t, zero_heuristic);
    REQUIRE(r.status == SearchStatus::Solved);
    CHECK(r.plan->actions.empty());
    CHECK(r.plan->cost == Fraction(0));
    CHECK(validate_plan(t, *r.plan).ok);
  }
  SECTION("unreachable goal is reported unsolvable") {
    t.goal = PartialAssignment{{0, 2}};
    const SearchResult r = astar(t, zero_heuristic);
    CHECK(r.status == SearchStatus::Unsolvable);
    CHECK_FALSE(r.plan.has_value());
  }
  SECTION("node limit yields LimitExceeded") {
    t.goal = PartialAssignment{{0, 1}};
    SearchLimits limits;
    limits.max_nodes = 0;  // unlimited solves it
    CHECK(astar(t, zero_heuristic, limits).status == SearchStatus::Solved);
    const Task big = gen_two_city_logistics();
    limits.max_nodes = 3;
    CHECK(astar(big, zero_heuristic, limits).status == SearchStatus::LimitExceeded);
  }
  SECTION("dead-end initial heuristic value is trusted") {
    t.goal = PartialAssignment{{0, 1}};
    const SearchResult r = astar(t, [](const State&) { return Fraction::infinity(); });
    CHECK(r.status == SearchStatus::Unsolvable);
    CHECK(r.stats.h_initial.is_infinite());
  }
}

TEST_CASE("oracle refuses oversized tasks and matches the full-space table") {
  const Task pi1 = gen_fork_dominant();
  CHECK_FALSE(dijkstra_oracle(pi1, 5).has_value());
  CHECK_FALSE(full_space_h_star(pi1, 10).has_value());

  const auto oracle = dijkstra_oracle(pi1);
  const auto full = full_space_h_star(pi1);
  REQUIRE(oracle.has_value());
  REQUIRE(full.has_value());
  CHECK(full->size() == 64);
  for (const auto& [state, h] : *oracle) {
    CHECK((*full)[state_rank(pi1, state)] == h);
  }

  SECTION("rank and unrank are inverse") {
    for (std::uint64_t r = 0; r < 64; ++r) {
      CHECK(state_rank(pi1, state_unrank(pi1, r)) == r);
    }
  }
}

TEST_CASE("plan validation pinpoints the first broken step") {
  const Task t = gen_gripper(1);
  const SearchResult r = astar(t, zero_heuristic);
  REQUIRE(r.status == SearchStatus::Solved);
  CHECK(r.plan->cost == Fraction(3));
  CHECK(validate_plan(t, *r.plan).ok);

  Plan broken = *r.plan;
  std::swap(broken.actions[0], broken.actions[1]);
  const PlanValidation v = validate_plan(t, broken);
  CHECK_FALSE(v.ok);
  CHECK(v.failed_step >= 0);
  CHECK(v.reason.find("precondition") != std::string::npos);

  Plan wrong_cost = *r.plan;
  wrong_cost.cost = Fraction(99);
  const PlanValidation vc = validate_plan(t, wrong_cost);
  CHECK_FALSE(vc.ok);
  CHECK(vc.reason.find("cost mismatch") != std::string::npos);

  Plan truncated = *r.plan;
  truncated.actions.pop_back();
  truncated.cost = Fraction(2);
  CHECK_FALSE(validate_plan(t, truncated).ok);
}
