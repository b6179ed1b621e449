#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "planner/task.hpp"

namespace planner {

/**
 * Benchmark-family selector for `generate`.
 *
 * Families:
 *  - "gripper"            robot with two arms carrying n balls between two rooms
 *  - "logistics-line"     two trucks, 2n+1 locations, n packages shifted n places
 *  - "two-city-logistics" the fixed two-city, three-car, one-truck delivery task
 *  - "fork-dominant"      fixed 6-variable task on which the fork ensemble is strongest
 *  - "ifork-dominant"     fixed 6-variable task on which the inverted-fork ensemble is strongest
 */
struct GeneratorSpec {
  std::string family;
  int n = 1;  // size parameter; ignored by the fixed-instance families
};

/** Two rooms, two arms, n balls; all balls start in room 1 and must reach room 2. */
inline Task gen_gripper(int n) {
  if (n < 1) throw std::invalid_argument("gripper: n must be >= 1");
  Task t;
  t.variables.reserve(3 + static_cast<std::size_t>(n));
  t.variables.push_back({"robot", 2, {"r1", "r2"}});
  std::vector<std::string> arm_domain = {"empty"};
  for (int b = 1; b <= n; ++b) arm_domain.push_back("b" + std::to_string(b));
  t.variables.push_back({"left", n + 1, arm_domain});
  t.variables.push_back({"right", n + 1, arm_domain});
  for (int b = 1; b <= n; ++b) {
    t.variables.push_back({"b" + std::to_string(b), 3, {"r1", "r2", "robot"}});
  }

  t.initial.values.assign(3 + static_cast<std::size_t>(n), 0);  // r1, empty arms, balls in r1
  for (int b = 0; b < n; ++b) t.goal.set(3 + b, 1);             // every ball in r2

  const char* room_names[2] = {"r1", "r2"};
  auto add = [&t](Action a) { t.actions.push_back(std::move(a)); };
  for (int r = 0; r < 2; ++r) {
    Action move;
    move.name = std::string("move-") + room_names[r] + "-" + room_names[1 - r];
    move.precondition.set(0, r);
    move.effect.set(0, 1 - r);
    move.cost = Fraction(1);
    add(move);
  }
  const char* arm_names[2] = {"left", "right"};
  for (int b = 1; b <= n; ++b) {
    const int ball_var = 2 + b;
    for (int arm = 0; arm < 2; ++arm) {
      const int arm_var = 1 + arm;
      for (int r = 0; r < 2; ++r) {
        Action pickup;
        pickup.name = "pickup-b" + std::to_string(b) + "-" + arm_names[arm] + "-" + room_names[r];
        pickup.precondition = PartialAssignment{{0, r}, {arm_var, 0}, {ball_var, r}};
        pickup.effect = PartialAssignment{{arm_var, b}, {ball_var, 2}};
        pickup.cost = Fraction(1);
        add(pickup);

        Action drop;
        drop.name = "drop-b" + std::to_string(b) + "-" + arm_names[arm] + "-" + room_names[r];
        drop.precondition = PartialAssignment{{0, r}, {arm_var, b}, {ball_var, 2}};
        drop.effect = PartialAssignment{{arm_var, 0}, {ball_var, r}};
        drop.cost = Fraction(1);
        add(drop);
      }
    }
  }
  return t;
}

/**
 * Two trucks on 2n+1 locations l0..l2n (both starting at l0, free to move
 * between any two locations), and packages p1..pn with pi starting at li and
 * due at l(n+i).
 */
inline Task gen_logistics_line(int n) {
  if (n < 1) throw std::invalid_argument("logistics-line: n must be >= 1");
  const int locations = 2 * n + 1;
  Task t;

  std::vector<std::string> loc_names;
  for (int l = 0; l < locations; ++l) loc_names.push_back("l" + std::to_string(l));
  std::vector<std::string> package_domain = loc_names;
  package_domain.push_back("t1");
  package_domain.push_back("t2");

  t.variables.push_back({"t1", locations, loc_names});
  t.variables.push_back({"t2", locations, loc_names});
  for (int p = 1; p <= n; ++p) {
    t.variables.push_back({"p" + std::to_string(p), locations + 2, package_domain});
  }

  t.initial.values = {0, 0};
  for (int p = 1; p <= n; ++p) t.initial.values.push_back(p);  // pi at li
  for (int p = 1; p <= n; ++p) t.goal.set(1 + p, n + p);       // pi due at l(n+p)

  const char* truck_names[2] = {"t1", "t2"};
  for (int truck = 0; truck < 2; ++truck) {
    for (int from = 0; from < locations; ++from) {
      for (int to = 0; to < locations; ++to) {
        if (from == to) continue;
        Action move;
        move.name = std::string("move-") + truck_names[truck] + "-" + loc_names[from] + "-" +
                    loc_names[to];
        move.precondition.set(truck, from);
        move.effect.set(truck, to);
        move.cost = Fraction(1);
        t.actions.push_back(std::move(move));
      }
    }
  }
  for (int p = 1; p <= n; ++p) {
    const int package_var = 1 + p;
    for (int truck = 0; truck < 2; ++truck) {
      for (int l = 0; l < locations; ++l) {
        Action load;
        load.name = "load-p" + std::to_string(p) + "-" + truck_names[truck] + "-" + loc_names[l];
        load.precondition = PartialAssignment{{truck, l}, {package_var, l}};
        load.effect = PartialAssignment{{package_var, locations + truck}};
        load.cost = Fraction(1);
        t.actions.push_back(std::move(load));

        Action unload;
        unload.name =
            "unload-p" + std::to_string(p) + "-" + truck_names[truck] + "-" + loc_names[l];
        unload.precondition = PartialAssignment{{truck, l}, {package_var, locations + truck}};
        unload.effect = PartialAssignment{{package_var, l}};
        unload.cost = Fraction(1);
        t.actions.push_back(std::move(unload));
      }
    }
  }
  return t;
}

/**
 * The fixed two-city delivery task: cars c1, c2 serve city-1 locations
 * {A,B,C,D} over roads A-D, B-D, C-D; car c3 serves city-2 locations {E,F,G}
 * over roads E-F, E-G; truck t connects D and E.  Package p1 goes from C to
 * G, package p2 from F to E, and c3 must end at F.
 */
inline Task gen_two_city_logistics() {
  Task t;
  const std::vector<std::string> p_domain = {"A", "B", "C", "D",  "E", "F",
                                             "G", "c1", "c2", "c3", "t"};
  t.variables.push_back({"p1", 11, p_domain});
  t.variables.push_back({"p2", 11, p_domain});
  t.variables.push_back({"c1", 4, {"A", "B", "C", "D"}});
  t.variables.push_back({"c2", 4, {"A", "B", "C", "D"}});
  t.variables.push_back({"c3", 3, {"E", "F", "G"}});
  t.variables.push_back({"t", 2, {"D", "E"}});

  // I = {p1:C, p2:F, c1:A, c2:B, c3:G, t:E}
  t.initial.values = {2, 5, 0, 1, 2, 1};
  // G = {p1:G, p2:E, c3:F}
  t.goal = PartialAssignment{{0, 6}, {1, 4}, {4, 1}};

  struct Vehicle {
    int var;
    std::string name;
    std::vector<int> locations;             // value indices in the package domain
    std::vector<std::pair<int, int>> roads; // bidirectional, indices into `locations`
  };
  const std::vector<Vehicle> vehicles = {
      {2, "c1", {0, 1, 2, 3}, {{0, 3}, {1, 3}, {2, 3}}},  // A-D, B-D, C-D
      {3, "c2", {0, 1, 2, 3}, {{0, 3}, {1, 3}, {2, 3}}},
      {4, "c3", {4, 5, 6}, {{0, 1}, {0, 2}}},             // E-F, E-G
      {5, "t", {3, 4}, {{0, 1}}},                         // D-E
  };
  const std::vector<std::string> location_names = {"A", "B", "C", "D", "E", "F", "G"};

  for (const Vehicle& veh : vehicles) {
    for (const auto& [i, j] : veh.roads) {
      for (const auto& [from, to] : {std::pair{i, j}, std::pair{j, i}}) {
        Action drive;
        drive.name = "drive-" + veh.name + "-" + location_names[veh.locations[from]] + "-" +
                     location_names[veh.locations[to]];
        drive.precondition.set(veh.var, from);
        drive.effect.set(veh.var, to);
        drive.cost = Fraction(1);
        t.actions.push_back(std::move(drive));
      }
    }
  }
  for (int p = 0; p < 2; ++p) {
    const std::string pname = "p" + std::to_string(p + 1);
    for (const Vehicle& veh : vehicles) {
      const int vehicle_value = 7 + (veh.var - 2);  // c1,c2,c3,t sit after the locations
      for (int li = 0; li < static_cast<int>(veh.locations.size()); ++li) {
        const int location_value = veh.locations[li];
        Action load;
        load.name = "load-" + pname + "-" + veh.name + "-" + location_names[location_value];
        load.precondition = PartialAssignment{{p, location_value}, {veh.var, li}};
        load.effect = PartialAssignment{{p, vehicle_value}};
        load.cost = Fraction(1);
        t.actions.push_back(std::move(load));

        Action unload;
        unload.name = "unload-" + pname + "-" + veh.name + "-" + location_names[location_value];
        unload.precondition = PartialAssignment{{p, vehicle_value}, {veh.var, li}};
        unload.effect = PartialAssignment{{p, location_value}};
        unload.cost = Fraction(1);
        t.actions.push_back(std::move(unload));
      }
    }
  }
  return t;
}

namespace detail {

inline Task thm9_base() {
  Task t;
  for (const char* name : {"v1", "v2", "v3", "u1", "u2", "u3"}) {
    t.variables.push_back({name, 2, {"0", "1"}});
  }
  t.initial.values.assign(6, 0);
  t.goal = PartialAssignment{{0, 1}, {1, 1}, {2, 1}};
  return t;
}

inline Action make_action(std::string name, PartialAssignment pre, PartialAssignment eff) {
  Action a;
  a.name = std::move(name);
  a.precondition = std::move(pre);
  a.effect = std::move(eff);
  a.cost = Fraction(1);
  return a;
}

}  // namespace detail

/**
 * Fixed 6-variable instance whose fork ensemble dominates: three goal bits
 * v1..v3 achieved under distinct settings of three free bits u1..u3.
 */
inline Task gen_fork_dominant() {
  Task t = detail::thm9_base();
  using detail::make_action;
  t.actions = {
      make_action("a1", {{3, 0}, {4, 0}, {5, 0}}, {{0, 1}}),
      make_action("a2", {{3, 1}, {4, 0}, {5, 1}}, {{1, 1}}),
      make_action("a3", {{3, 1}, {4, 1}, {5, 0}}, {{2, 1}}),
      make_action("a4", {{3, 0}}, {{3, 1}}),
      make_action("a5", {{3, 1}}, {{3, 0}}),
      make_action("a6", {{4, 0}}, {{4, 1}}),
      make_action("a7", {{4, 1}}, {{4, 0}}),
      make_action("a8", {{5, 0}}, {{5, 1}}),
      make_action("a9", {{5, 1}}, {{5, 0}}),
  };
  return t;
}

/**
 * Fixed 6-variable instance whose inverted-fork ensemble dominates: each goal
 * bit has three achievers keyed on bit patterns, but only u1 can ever flip.
 */
inline Task gen_ifork_dominant() {
  Task t = detail::thm9_base();
  using detail::make_action;
  const PartialAssignment k1{{3, 1}, {4, 0}, {5, 0}};
  const PartialAssignment k2{{3, 0}, {4, 1}, {5, 1}};
  const PartialAssignment k3{{3, 1}, {4, 1}, {5, 1}};
  t.actions = {
      make_action("a1", k1, {{0, 1}}),
      make_action("a2", k2, {{0, 1}}),
      make_action("a3", k3, {{0, 1}}),
      make_action("a4", k1, {{1, 1}}),
      make_action("a5", k2, {{1, 1}}),
      make_action("a6", k3, {{1, 1}}),
      make_action("a7", k1, {{2, 1}}),
      make_action("a8", k2, {{2, 1}}),
      make_action("a9", k3, {{2, 1}}),
      make_action("a10", {{3, 0}}, {{3, 1}}),
  };
  return t;
}

inline Task generate(const GeneratorSpec& spec) {
  if (spec.family == "gripper") return gen_gripper(spec.n);
  if (spec.family == "logistics-line") return gen_logistics_line(spec.n);
  if (spec.family == "two-city-logistics") return gen_two_city_logistics();
  if (spec.family == "fork-dominant") return gen_fork_dominant();
  if (spec.family == "ifork-dominant") return gen_ifork_dominant();
  throw std::invalid_argument("unknown generator family: " + spec.family);
}

}  // namespace planner
