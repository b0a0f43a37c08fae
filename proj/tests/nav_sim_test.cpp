// Copyright 2026 The Keepout Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <set>

#include "keepout/nav_sim.hpp"
#include "keepout/scenarios.hpp"

namespace keepout
{
namespace
{

// 20 x 7 room whose only free corridor is rows 2..4; a 2-cell obstacle
// sits in the corridor at column 10.
Scenario corridor()
{
  OccupancyGrid base(20, 7, 0.1, Pose2D(0, 0, 0));
  for (std::int64_t c = 0; c < 20; ++c) {
    for (std::int64_t r : {0, 1, 5, 6}) {
      base.set({c, r}, CellState::Occupied);
    }
  }
  OccupancyGrid truth = base;
  truth.set({10, 2}, CellState::Occupied);
  truth.set({10, 3}, CellState::Occupied);
  return {"corridor", base, truth, Pose2D(0.1, 0.3, 0), Pose2D(1.8, 0.3, 0)};
}

TEST(NavSimTest, GroundTruthDrawingSucceeds) {
  const Scenario s = corridor();
  const TrialOutcome out = run_trial(s, s.ground_truth);
  EXPECT_EQ(out.result, TrialResult::Success);
  EXPECT_TRUE(out.collision_cells.empty());
  EXPECT_GT(out.length_m, 1.7 - 1e-9);
}

TEST(NavSimTest, BareMapCollides) {
  const Scenario s = corridor();
  const TrialOutcome out = run_trial(s, s.base);
  EXPECT_EQ(out.result, TrialResult::CollisionFailure);
  std::set<GridIndex> expected;
  for (const GridIndex & c : out.path.cells) {
    if (s.ground_truth.at(c) == CellState::Occupied) {
      expected.insert(c);
    }
  }
  EXPECT_FALSE(expected.empty());
  EXPECT_EQ(std::set<GridIndex>(out.collision_cells.begin(), out.collision_cells.end()), expected);
  // The straight run along row 3 is the unique optimum on the bare map.
  EXPECT_EQ(out.collision_cells, (std::vector<GridIndex>{{10, 3}}));
}

TEST(NavSimTest, SealedCorridorHasNoPath) {
  const Scenario s = corridor();
  ZoneRegistry reg(s.base);
  reg.add_zone(1, {{0.9, 0.0}, {1.1, 0.0}, {1.1, 0.7}, {0.9, 0.7}});
  const TrialOutcome out = run_trial(s, reg.composite());
  EXPECT_EQ(out.result, TrialResult::NoPathFailure);
  EXPECT_EQ(out.plan_status, PlanStatus::NoPath);
}

TEST(NavSimTest, RejectsMismatchedDrawing) {
  const Scenario s = corridor();
  EXPECT_THROW(run_trial(s, OccupancyGrid(5, 5, 0.1, Pose2D(0, 0, 0))), GridError);
}

TEST(NavSimTest, ScenarioValidation) {
  Scenario s = corridor();
  s.start = Pose2D(1.0, 0.3, 0);
  EXPECT_THROW(s.validate(), GridError);
  s = corridor();
  s.goal = Pose2D(50.0, 0.3, 0);
  EXPECT_THROW(s.validate(), GridError);
}

TEST(NavSimTest, RemovingCoveringZoneNeverHelps) {
  // Every subset of the reference zones against every subset with one more
  // zone: the larger drawing is never worse.
  for (const std::string & name : builtin_scenario_names()) {
    const Scenario s = *builtin_scenario(name);
    for (ZoneFit fit : {ZoneFit::Accurate, ZoneFit::Oversized}) {
      const ZoneTable zones = reference_zones(name, fit);
      const std::size_t n = zones.size();
      std::vector<bool> success(std::size_t{1} << n);
      for (std::size_t mask = 0; mask < success.size(); ++mask) {
        ZoneTable subset;
        std::size_t bit = 0;
        for (const auto & [id, zone] : zones) {
          if (mask & (std::size_t{1} << bit++)) {
            subset.emplace(id, zone);
          }
        }
        success[mask] = run_trial(s, recompose(s.base, subset)).result == TrialResult::Success;
      }
      EXPECT_TRUE(success.back()) << name;
      EXPECT_FALSE(success.front()) << name;
      for (std::size_t mask = 0; mask < success.size(); ++mask) {
        for (std::size_t bit = 0; bit < n; ++bit) {
          const std::size_t fewer = mask & ~(std::size_t{1} << bit);
          if (success[fewer]) {
            EXPECT_TRUE(success[mask]) << name << " mask " << mask;
          }
        }
      }
    }
  }
}

TEST(NavSimTest, Deterministic) {
  const Scenario s = *builtin_scenario("stage2");
  const TrialOutcome a = run_trial(s, s.base);
  const TrialOutcome b = run_trial(s, s.base);
  EXPECT_EQ(a.result, b.result);
  EXPECT_EQ(a.path.cells, b.path.cells);
  EXPECT_EQ(a.collision_cells, b.collision_cells);
}

TEST(NavSimTest, ReplanAfterEditMatchesFreshPlan) {
  const Scenario s = *builtin_scenario("stage1");
  ZoneRegistry reg(s.base);
  for (const auto & [id, zone] : reference_zones("stage1", ZoneFit::Oversized)) {
    reg.add_zone(zone);
  }
  const TrialOutcome incremental = run_trial(s, reg.composite());
  const PlanResult fresh = plan(recompose(s.base, reg.zones()), s.start_cell(), s.goal_cell());
  EXPECT_EQ(incremental.path.cells, fresh.path.cells);
}

TEST(BuiltinScenarioTest, Trends) {
  for (const std::string & name : builtin_scenario_names()) {
    SCOPED_TRACE(name);
    const Scenario s = *builtin_scenario(name);
    EXPECT_EQ(run_trial(s, s.ground_truth).result, TrialResult::Success);
    EXPECT_EQ(run_trial(s, s.base).result, TrialResult::CollisionFailure);
    const TrialOutcome accurate = run_trial(s, recompose(s.base, reference_zones(name, ZoneFit::Accurate)));
    const TrialOutcome oversized = run_trial(s, recompose(s.base, reference_zones(name, ZoneFit::Oversized)));
    ASSERT_EQ(accurate.result, TrialResult::Success);
    ASSERT_EQ(oversized.result, TrialResult::Success);
    const double lower = std::hypot(s.goal.x - s.start.x, s.goal.y - s.start.y);
    EXPECT_GE(accurate.length_m, lower);
    EXPECT_LE(accurate.length_m, oversized.length_m);
  }
  EXPECT_FALSE(builtin_scenario("stage3").has_value());
}

TEST(StepRobotTest, StraightPath) {
  const std::vector<Point2> path{{0, 0}, {1, 0}};
  const RobotMotion mid = step_robot({Pose2D(0, 0, 0), 0.0}, path, 1.0, 0.5);
  EXPECT_NEAR(mid.pose.x, 0.5, 1e-12);
  EXPECT_NEAR(mid.pose.y, 0.0, 1e-12);
  EXPECT_NEAR(mid.travelled, 0.5, 1e-12);
}

TEST(StepRobotTest, StaysAtGoal) {
  const std::vector<Point2> path{{0, 0}, {1, 0}};
  const RobotMotion end{Pose2D(1, 0, 0), 1.0};
  const RobotMotion next = step_robot(end, path, 0.1, 0.5);
  EXPECT_EQ(next.pose, end.pose);
  EXPECT_EQ(next.travelled, end.travelled);
}

TEST(StepRobotTest, HeadingFollowsSegments) {
  const std::vector<Point2> path{{0, 0}, {1, 0}, {1, 1}};
  const RobotMotion next = step_robot({Pose2D(0, 0, 0), 0.0}, path, 1.5, 1.0);
  EXPECT_NEAR(next.pose.x, 1.0, 1e-12);
  EXPECT_NEAR(next.pose.y, 0.5, 1e-12);
  EXPECT_NEAR(next.pose.theta, std::numbers::pi / 2, 1e-12);
  const RobotMotion clamped = step_robot(next, path, 10.0, 1.0);
  EXPECT_NEAR(clamped.pose.y, 1.0, 1e-12);
  EXPECT_NEAR(clamped.travelled, 2.0, 1e-12);
}

TEST(StepRobotTest, TraversalTimeMatchesLength) {
  const Scenario s = *builtin_scenario("stage2");
  const TrialOutcome out = run_trial(s, s.ground_truth);
  const std::vector<Point2> path = path_to_world(s.ground_truth, out.path.cells);
  const double length = polyline_length(path);
  EXPECT_NEAR(length, out.length_m, 1e-9);
  const double speed = 0.4;
  const double dt = 0.05;
  RobotMotion m{Pose2D(path.front().x, path.front().y, 0), 0.0};
  int steps = 0;
  while (m.travelled < length) {
    m = step_robot(m, path, dt, speed);
    ++steps;
    ASSERT_LT(steps, 100000);
  }
  EXPECT_NEAR(steps * dt, length / speed, dt);
  EXPECT_NEAR(m.pose.x, path.back().x, 1e-9);
  EXPECT_NEAR(m.pose.y, path.back().y, 1e-9);
}

TEST(ScenarioFileTest, SaveLoadRoundTrip) {
  const auto dir = std::filesystem::temp_directory_path() / "keepout_scenario_test";
  std::filesystem::remove_all(dir);
  const Scenario s = *builtin_scenario("stage2");
  const std::filesystem::path manifest = save_scenario(s, dir);
  const Scenario loaded = load_scenario(manifest);
  EXPECT_EQ(loaded.name, s.name);
  EXPECT_EQ(loaded.base, s.base);
  EXPECT_EQ(loaded.ground_truth, s.ground_truth);
  EXPECT_EQ(loaded.start, s.start);
  EXPECT_EQ(loaded.goal, s.goal);
  EXPECT_EQ(resolve_scenario(manifest.string()).ground_truth, s.ground_truth);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace keepout
