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

#ifndef KEEPOUT_PLANNER_HPP_
#define KEEPOUT_PLANNER_HPP_

#include <compare>
#include <cstdint>
#include <span>
#include <vector>

#include "keepout/grid.hpp"

namespace keepout
{

/// Path cost `straight + diagonal * sqrt(2)` in cell units, kept as two
/// integers so costs compare exactly.
struct PathCost
{
  std::int64_t straight{0};
  std::int64_t diagonal{0};

  double value() const;

  PathCost operator+(const PathCost & other) const
  {
    return {straight + other.straight, diagonal + other.diagonal};
  }

  std::strong_ordering operator<=>(const PathCost & other) const;
  bool operator==(const PathCost &) const = default;
};

/// Admissible, consistent 8-connected distance estimate.
PathCost octile_distance(GridIndex a, GridIndex b);

struct PlanConfig
{
  bool unknown_is_blocked{true};
  bool allow_diagonal{true};
};

bool traversable(const OccupancyGrid & grid, GridIndex cell, const PlanConfig & config);

struct Path
{
  std::vector<GridIndex> cells;
  PathCost cost;
};

enum class PlanStatus { Ok, StartBlocked, GoalBlocked, NoPath };

const char * to_string(PlanStatus status);

struct PlanResult
{
  PlanStatus status{PlanStatus::NoPath};
  Path path;

  bool ok() const {return status == PlanStatus::Ok;}
};

/// A* over 8-connected cells (unit straight, sqrt(2) diagonal). A diagonal
/// step is allowed only when both orthogonal neighbours are traversable.
/// Among equal f the node with larger g pops first, then the lower
/// row-major index. Throws std::out_of_range for off-grid endpoints.
PlanResult plan(
  const OccupancyGrid & grid, GridIndex start, GridIndex goal, const PlanConfig & config = {});

/// Sum of center-to-center distances in meters.
double path_length(std::span<const GridIndex> cells, double resolution);
double path_length(const Path & path, double resolution);

std::vector<Point2> path_to_world(const OccupancyGrid & grid, std::span<const GridIndex> cells);

}  // namespace keepout

#endif  // KEEPOUT_PLANNER_HPP_
