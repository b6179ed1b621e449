#include <catch2/catch_amalgamated.hpp>

#include <set>
#include <utility>
#include <vector>

#include "planner/generators.hpp"
#include "planner/graphs.hpp"
#include "planner/task.hpp"

using namespace planner;

namespace {

/** Independent quadratic recomputation of the causal-graph arc set. */
std::set<std::pair<int, int>> naive_causal_arcs(const Task& task) {
  std::set<std::pair<int, int>> arcs;
  for (const Action& a : task.actions) {
    for (const auto& [v, vv] : a.effect.entries()) {
      (void)vv;
      for (const auto& [u, uv] : a.precondition.entries()) {
        (void)uv;
        if (u != v) arcs.insert({u, v});
      }
      for (const auto& [u, uv] : a.effect.entries()) {
        (void)uv;
        if (u != v) arcs.insert({u, v});
      }
    }
  }
  return arcs;
}

std::set<std::pair<int, int>> arcs_of(const CausalGraph& cg) {
  std::set<std::pair<int, int>> arcs;
  for (int u = 0; u < static_cast<int>(cg.succ.size()); ++u) {
    for (const int v : cg.succ[u]) arcs.insert({u, v});
  }
  return arcs;
}

}  // namespace

TEST_CASE("two-city task: causal graph is vehicles -> packages") {
  const Task t = gen_two_city_logistics();
  const CausalGraph cg = causal_graph(t);

  // p1=0, p2=1, c1=2, c2=3, c3=4, t=5.
  const std::set<std::pair<int, int>> expected = {{2, 0}, {2, 1}, {3, 0}, {3, 1},
                                                  {4, 0}, {4, 1}, {5, 0}, {5, 1}};
  CHECK(arcs_of(cg) == expected);
  CHECK(arcs_of(cg) == naive_causal_arcs(t));
  CHECK(cg.succ[2] == std::vector<int>{0, 1});
  CHECK(cg.pred[0] == std::vector<int>{2, 3, 4, 5});
  CHECK(cg.pred[2].empty());
  CHECK(cg.succ[0].empty());
}

TEST_CASE("causal graph of single-variable actions is empty") {
  Task t;
  t.variables = {{"x", 2, {"0", "1"}}, {"y", 2, {"0", "1"}}};
  t.initial.values = {0, 0};
  Action a;
  a.name = "flip-x";
  a.precondition = PartialAssignment{{0, 0}};
  a.effect = PartialAssignment{{0, 1}};
  a.cost = Fraction(1);
  t.actions = {a};
  const CausalGraph cg = causal_graph(t);
  CHECK(arcs_of(cg).empty());
}

TEST_CASE("gripper causal graph matches the naive recomputation") {
  const Task t = gen_gripper(2);
  const CausalGraph cg = causal_graph(t);
  CHECK(arcs_of(cg) == naive_causal_arcs(t));
  // Arms and balls depend on each other; everything depends on the robot.
  CHECK(cg.succ[0] == std::vector<int>{1, 2, 3, 4});  // robot -> arms and balls
  CHECK(cg.succ[1] == std::vector<int>{3, 4});        // left -> balls
  CHECK(cg.pred[1] == std::vector<int>{0, 3, 4});     // balls -> left, plus robot
  CHECK(cg.succ[3] == std::vector<int>{1, 2});        // b1 -> arms
  CHECK(cg.pred[0].empty());
}

TEST_CASE("domain transition graphs of the two-city task") {
  const Task t = gen_two_city_logistics();

  SECTION("car c1 has the six road arcs with empty outside preconditions") {
    const DomainTransitionGraph g = dtg(t, 2);
    REQUIRE(g.arcs.size() == 6);
    std::set<std::pair<int, int>> endpoints;
    for (const DtgArc& arc : g.arcs) {
      endpoints.insert({arc.from, arc.to});
      CHECK(arc.outside_pre.empty());
      CHECK(arc.cost == Fraction(1));
      CHECK(t.actions[arc.action].effect.get(2) == arc.to);
    }
    // A=0,B=1,C=2,D=3: roads A-D, B-D, C-D in both directions.
    CHECK(endpoints == std::set<std::pair<int, int>>{{0, 3}, {3, 0}, {1, 3}, {3, 1}, {2, 3}, {3, 2}});
  }

  SECTION("package p1 has 26 load/unload arcs labeled with vehicle positions") {
    const DomainTransitionGraph g = dtg(t, 0);
    CHECK(g.arcs.size() == 26);
    int load_p1_c1_A = -1;
    for (int i = 0; i < static_cast<int>(g.arcs.size()); ++i) {
      if (t.actions[g.arcs[i].action].name == "load-p1-c1-A") load_p1_c1_A = i;
    }
    REQUIRE(load_p1_c1_A >= 0);
    const DtgArc& arc = g.arcs[load_p1_c1_A];
    CHECK(arc.from == 0);                                  // at A
    CHECK(arc.to == 7);                                    // in c1
    CHECK(arc.outside_pre == PartialAssignment{{2, 0}});   // c1 parked at A
  }

  SECTION("variable never affected yields an arcless graph") {
    Task frozen = t;
    frozen.actions.clear();
    CHECK(dtg(frozen, 0).arcs.empty());
  }
}

TEST_CASE("hop distances in the two-city task") {
  const Task t = gen_two_city_logistics();

  SECTION("car c1 from A") {
    const ValueDistances d = hop_distances_from(dtg(t, 2), 0);
    CHECK(d.dist == std::vector<int>{0, 2, 2, 1});
    CHECK(max_finite(d) == 2);
  }
  SECTION("package p1 from its start C") {
    const ValueDistances d = hop_distances_from(dtg(t, 0), 2);
    // order: A B C D E F G c1 c2 c3 t
    CHECK(d.dist == std::vector<int>{2, 2, 0, 2, 4, 6, 6, 1, 1, 5, 3});
  }
  SECTION("package p1 to its goal G") {
    const ValueDistances d = hop_distances_to(dtg(t, 0), 6);
    CHECK(d.dist == std::vector<int>{6, 6, 6, 4, 2, 2, 0, 5, 5, 1, 3});
  }
  SECTION("triangle inequality over p1's hop metric") {
    const DomainTransitionGraph g = dtg(t, 0);
    std::vector<ValueDistances> from(g.domain_size);
    for (int x = 0; x < g.domain_size; ++x) from[x] = hop_distances_from(g, x);
    for (int x = 0; x < g.domain_size; ++x) {
      CHECK(from[x].dist[x] == 0);
      for (int y = 0; y < g.domain_size; ++y) {
        for (int z = 0; z < g.domain_size; ++z) {
          if (from[x].dist[y] != kInfiniteHops && from[y].dist[z] != kInfiniteHops) {
            CHECK(from[x].dist[z] <= from[x].dist[y] + from[y].dist[z]);
          }
        }
      }
    }
  }
}

TEST_CASE("wildcard arcs reach every origin") {
  Task t;
  t.variables = {{"x", 4, {"0", "1", "2", "3"}}, {"y", 2, {"0", "1"}}};
  t.initial.values = {0, 0};
  Action reset;  // no precondition on x: wildcard origin
  reset.name = "reset";
  reset.precondition = PartialAssignment{{1, 1}};
  reset.effect = PartialAssignment{{0, 2}};
  reset.cost = Fraction(5);
  Action step;
  step.name = "step";
  step.precondition = PartialAssignment{{0, 2}};
  step.effect = PartialAssignment{{0, 3}};
  step.cost = Fraction(1);
  t.actions = {reset, step};

  const DomainTransitionGraph g = dtg(t, 0);
  REQUIRE(g.arcs.size() == 2);
  CHECK(g.arcs[0].from == kAnyValue);
  CHECK(g.arcs[0].outside_pre == PartialAssignment{{1, 1}});

  const ValueDistances d = hop_distances_from(g, 1);
  CHECK(d.dist == std::vector<int>{kInfiniteHops, 0, 1, 2});  // 1 -> (any)2 -> 3; 0 unreachable

  const ValueDistances to2 = hop_distances_to(g, 2);
  CHECK(to2.dist == std::vector<int>{1, 1, 0, 1});  // everyone one wildcard hop away

  SECTION("disconnected value and single-value domain") {
    const ValueDistances to0 = hop_distances_to(g, 0);
    CHECK(to0.dist[1] == kInfiniteHops);
    CHECK(to0.dist[0] == 0);
    Task single;
    single.variables = {{"s", 1, {"only"}}};
    single.initial.values = {0};
    CHECK(hop_distances_from(dtg(single, 0), 0).dist == std::vector<int>{0});
  }
}

TEST_CASE("dot dumps mention names, values, and costs") {
  const Task t = gen_two_city_logistics();
  const std::string cg_dot = to_dot(causal_graph(t), t);
  CHECK(cg_dot.find("digraph causal_graph") != std::string::npos);
  CHECK(cg_dot.find("\"c1\"") != std::string::npos);
  CHECK(cg_dot.find("->") != std::string::npos);

  const std::string dtg_dot = to_dot(dtg(t, 2), t);
  CHECK(dtg_dot.find("\"A\"") != std::string::npos);
  CHECK(dtg_dot.find("label=\"1\"") != std::string::npos);
}
