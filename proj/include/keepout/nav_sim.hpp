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

#ifndef KEEPOUT_NAV_SIM_HPP_
#define KEEPOUT_NAV_SIM_HPP_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "keepout/grid.hpp"
#include "keepout/planner.hpp"

namespace keepout
{

/// A navigation task: the empty-room map, the same room with the real
/// obstacles, and the start and goal poses (world frame).
struct Scenario
{
  std::string name;
  OccupancyGrid base;
  OccupancyGrid ground_truth;
  Pose2D start;
  Pose2D goal;

  /// Throws GridError unless both maps share a frame and start/goal sit
  /// on traversable ground-truth cells.
  void validate() const;

  GridIndex start_cell() const;
  GridIndex goal_cell() const;
};

enum class TrialResult { Success, CollisionFailure, NoPathFailure };

const char * to_string(TrialResult result);

struct TrialOutcome
{
  TrialResult result{TrialResult::NoPathFailure};
  PlanStatus plan_status{PlanStatus::NoPath};
  Path path;
  double length_m{0.0};
  /// Path cells that are Occupied in the ground truth.
  std::vector<GridIndex> collision_cells;
};

/// Plans on `drawn` and checks the plan against the ground truth. The
/// robot is taken to fail exactly when its planned path enters a cell that
/// is occupied in reality.
TrialOutcome run_trial(
  const Scenario & scenario, const OccupancyGrid & drawn, const PlanConfig & config = {});

/// Robot progress along a world polyline.
struct RobotMotion
{
  Pose2D pose;
  /// Distance already covered along the current path, meters.
  double travelled{0.0};
};

double polyline_length(std::span<const Point2> path);

/// Advances `speed * dt` meters along `path`, stopping at its end. Heading
/// follows the current segment. A state already at the end is returned
/// unchanged.
RobotMotion step_robot(
  const RobotMotion & state, std::span<const Point2> path, double dt, double speed);

// Scenario manifest ("<name>.scenario"), `key: value` lines:
//   name: stage1
//   base: stage1_base.meta
//   ground_truth: stage1_truth.meta
//   start: [x, y, theta]
//   goal: [x, y, theta]
// Map paths are relative to the manifest.

Scenario load_scenario(const std::filesystem::path & manifest);

/// Writes the manifest and both map pairs into `directory`; returns the
/// manifest path.
std::filesystem::path save_scenario(const Scenario & scenario, const std::filesystem::path & directory);

}  // namespace keepout

#endif  // KEEPOUT_NAV_SIM_HPP_
