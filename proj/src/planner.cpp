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

#include "keepout/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>

namespace keepout
{

namespace
{

__extension__ typedef __int128 wide;

// Sign of p + q * sqrt(2).
int sign_of(wide p, wide q)
{
  if (p >= 0 && q >= 0) {
    return (p > 0 || q > 0) ? 1 : 0;
  }
  if (p <= 0 && q <= 0) {
    return -1;
  }
  const wide p2 = p * p;
  const wide q2 = 2 * q * q;
  if (p > 0) {
    return p2 > q2 ? 1 : (p2 < q2 ? -1 : 0);
  }
  return q2 > p2 ? 1 : (q2 < p2 ? -1 : 0);
}

struct OpenNode
{
  PathCost f;
  PathCost g;
  std::size_t index;
};

// std::priority_queue pops the "largest"; this orders the node to pop
// first as largest.
struct PopsLater
{
  bool operator()(const OpenNode & a, const OpenNode & b) const
  {
    if (const auto c = a.f <=> b.f; c != 0) {
      return c > 0;
    }
    if (const auto c = a.g <=> b.g; c != 0) {
      return c < 0;
    }
    return a.index > b.index;
  }
};

constexpr std::size_t kNoParent = std::numeric_limits<std::size_t>::max();

}  // namespace

double PathCost::value() const
{
  return static_cast<double>(straight) + static_cast<double>(diagonal) * std::numbers::sqrt2;
}

std::strong_ordering PathCost::operator<=>(const PathCost & other) const
{
  const int s = sign_of(static_cast<wide>(straight) - other.straight,
      static_cast<wide>(diagonal) - other.diagonal);
  return s < 0 ? std::strong_ordering::less :
         (s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

PathCost octile_distance(GridIndex a, GridIndex b)
{
  const std::int64_t dx = std::abs(a.col - b.col);
  const std::int64_t dy = std::abs(a.row - b.row);
  const std::int64_t diag = std::min(dx, dy);
  return {std::max(dx, dy) - diag, diag};
}

bool traversable(const OccupancyGrid & grid, GridIndex cell, const PlanConfig & config)
{
  if (!grid.contains(cell)) {
    return false;
  }
  switch (grid[grid.linear(cell)]) {
    case CellState::Free: return true;
    case CellState::Occupied: return false;
    case CellState::Unknown: return !config.unknown_is_blocked;
  }
  return false;
}

const char * to_string(PlanStatus status)
{
  switch (status) {
    case PlanStatus::Ok: return "ok";
    case PlanStatus::StartBlocked: return "start_blocked";
    case PlanStatus::GoalBlocked: return "goal_blocked";
    case PlanStatus::NoPath: return "no_path";
  }
  return "invalid";
}

PlanResult plan(
  const OccupancyGrid & grid, GridIndex start, GridIndex goal, const PlanConfig & config)
{
  if (!grid.contains(start) || !grid.contains(goal)) {
    throw std::out_of_range("start or goal outside the grid");
  }
  PlanResult result;
  if (!traversable(grid, start, config)) {
    result.status = PlanStatus::StartBlocked;
    return result;
  }
  if (!traversable(grid, goal, config)) {
    result.status = PlanStatus::GoalBlocked;
    return result;
  }

  const std::size_t n = grid.size();
  std::vector<PathCost> g(n);
  std::vector<bool> seen(n, false);
  std::vector<bool> closed(n, false);
  std::vector<std::size_t> parent(n, kNoParent);
  std::priority_queue<OpenNode, std::vector<OpenNode>, PopsLater> open;

  const std::size_t start_index = grid.linear(start);
  const std::size_t goal_index = grid.linear(goal);
  seen[start_index] = true;
  open.push({octile_distance(start, goal), {}, start_index});

  while (!open.empty()) {
    const OpenNode node = open.top();
    open.pop();
    if (closed[node.index] || node.g != g[node.index]) {
      continue;
    }
    closed[node.index] = true;
    if (node.index == goal_index) {
      break;
    }

    const GridIndex here = grid.index_of(node.index);
    for (std::int64_t dr = -1; dr <= 1; ++dr) {
      for (std::int64_t dc = -1; dc <= 1; ++dc) {
        if (dr == 0 && dc == 0) {
          continue;
        }
        const bool diagonal = dr != 0 && dc != 0;
        if (diagonal && !config.allow_diagonal) {
          continue;
        }
        const GridIndex next{here.col + dc, here.row + dr};
        if (!traversable(grid, next, config)) {
          continue;
        }
        if (diagonal &&
          (!traversable(grid, {here.col + dc, here.row}, config) ||
          !traversable(grid, {here.col, here.row + dr}, config)))
        {
          continue;
        }
        const std::size_t next_index = grid.linear(next);
        if (closed[next_index]) {
          continue;
        }
        const PathCost candidate = node.g + (diagonal ? PathCost{0, 1} : PathCost{1, 0});
        if (!seen[next_index] || candidate < g[next_index]) {
          seen[next_index] = true;
          g[next_index] = candidate;
          parent[next_index] = node.index;
          open.push({candidate + octile_distance(next, goal), candidate, next_index});
        }
      }
    }
  }

  if (!closed[goal_index]) {
    result.status = PlanStatus::NoPath;
    return result;
  }
  result.status = PlanStatus::Ok;
  result.path.cost = g[goal_index];
  for (std::size_t i = goal_index; i != kNoParent; i = parent[i]) {
    result.path.cells.push_back(grid.index_of(i));
  }
  std::reverse(result.path.cells.begin(), result.path.cells.end());
  return result;
}

double path_length(std::span<const GridIndex> cells, double resolution)
{
  double total = 0.0;
  for (std::size_t i = 1; i < cells.size(); ++i) {
    total += std::hypot(static_cast<double>(cells[i].col - cells[i - 1].col),
        static_cast<double>(cells[i].row - cells[i - 1].row));
  }
  return total * resolution;
}

double path_length(const Path & path, double resolution)
{
  return path_length(std::span<const GridIndex>(path.cells), resolution);
}

std::vector<Point2> path_to_world(const OccupancyGrid & grid, std::span<const GridIndex> cells)
{
  std::vector<Point2> out;
  out.reserve(cells.size());
  for (const GridIndex & c : cells) {
    out.push_back(grid_to_world(grid, c));
  }
  return out;
}

}  // namespace keepout
