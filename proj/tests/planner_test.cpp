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
#include <random>

#include "keepout/planner.hpp"
#include "keepout/zone_registry.hpp"
#include "support/oracles.hpp"

namespace keepout
{
namespace
{

OccupancyGrid open_grid(std::size_t w, std::size_t h)
{
  return OccupancyGrid(w, h, 0.05, Pose2D(0, 0, 0));
}

OccupancyGrid random_grid(std::mt19937_64 & rng, std::size_t size, double density)
{
  std::bernoulli_distribution blocked(density);
  std::bernoulli_distribution unknown(0.05);
  OccupancyGrid grid = open_grid(size, size);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (blocked(rng)) {
      grid[i] = CellState::Occupied;
    } else if (unknown(rng)) {
      grid[i] = CellState::Unknown;
    }
  }
  return grid;
}

void expect_valid_path(
  const OccupancyGrid & grid, const Path & path, GridIndex start, GridIndex goal,
  const PlanConfig & config = {})
{
  ASSERT_FALSE(path.cells.empty());
  EXPECT_EQ(path.cells.front(), start);
  EXPECT_EQ(path.cells.back(), goal);
  PathCost cost;
  for (std::size_t i = 0; i < path.cells.size(); ++i) {
    EXPECT_TRUE(traversable(grid, path.cells[i], config));
    if (i == 0) {
      continue;
    }
    const GridIndex a = path.cells[i - 1];
    const GridIndex b = path.cells[i];
    const std::int64_t dc = b.col - a.col;
    const std::int64_t dr = b.row - a.row;
    ASSERT_TRUE(std::llabs(dc) <= 1 && std::llabs(dr) <= 1 && (dc != 0 || dr != 0));
    if (dc != 0 && dr != 0) {
      EXPECT_TRUE(traversable(grid, {a.col + dc, a.row}, config));
      EXPECT_TRUE(traversable(grid, {a.col, a.row + dr}, config));
      ++cost.diagonal;
    } else {
      ++cost.straight;
    }
  }
  EXPECT_EQ(cost, path.cost);
}

TEST(PathCostTest, ComparesExactly) {
  EXPECT_LT((PathCost{0, 5}), (PathCost{8, 0}));   // 7.07 < 8
  EXPECT_GT((PathCost{0, 5}), (PathCost{7, 0}));   // 7.07 > 7
  EXPECT_LT((PathCost{3, 0}), (PathCost{1, 2}));   // 3 < 3.83
  EXPECT_GT((PathCost{99, 0}), (PathCost{0, 70}));  // 99 > 98.99
  EXPECT_LT((PathCost{98, 0}), (PathCost{0, 70}));
  EXPECT_EQ((PathCost{2, 3} <=> PathCost{2, 3}), std::strong_ordering::equal);
  EXPECT_DOUBLE_EQ((PathCost{1, 1}).value(), 1.0 + std::sqrt(2.0));
}

TEST(PlannerTest, OpenDiagonal) {
  const OccupancyGrid grid = open_grid(5, 5);
  const PlanResult r = plan(grid, {0, 0}, {4, 4});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.path.cost, (PathCost{0, 4}));
  EXPECT_EQ(r.path.cells.size(), 5u);
  expect_valid_path(grid, r.path, {0, 0}, {4, 4});
}

TEST(PlannerTest, WallBlocksEverything) {
  OccupancyGrid grid = open_grid(7, 5);
  for (std::int64_t r = 0; r < 5; ++r) {
    grid.set({3, r}, CellState::Occupied);
  }
  EXPECT_EQ(plan(grid, {0, 2}, {6, 2}).status, PlanStatus::NoPath);
}

TEST(PlannerTest, BlockedEndpoints) {
  OccupancyGrid grid = open_grid(5, 5);
  grid.set({0, 0}, CellState::Occupied);
  grid.set({4, 4}, CellState::Unknown);
  EXPECT_EQ(plan(grid, {0, 0}, {2, 2}).status, PlanStatus::StartBlocked);
  EXPECT_EQ(plan(grid, {2, 2}, {4, 4}).status, PlanStatus::GoalBlocked);
  PlanConfig permissive;
  permissive.unknown_is_blocked = false;
  EXPECT_TRUE(plan(grid, {2, 2}, {4, 4}, permissive).ok());
  EXPECT_THROW(plan(grid, {5, 0}, {2, 2}), std::out_of_range);
}

TEST(PlannerTest, StartEqualsGoal) {
  const PlanResult r = plan(open_grid(3, 3), {1, 1}, {1, 1});
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.path.cells, (std::vector<GridIndex>{{1, 1}}));
  EXPECT_EQ(r.path.cost, PathCost{});
}

TEST(PlannerTest, NoCornerCutting) {
  // Two blocked cells touching at a corner leave only a diagonal gap.
  OccupancyGrid grid = open_grid(2, 2);
  grid.set({1, 0}, CellState::Occupied);
  grid.set({0, 1}, CellState::Occupied);
  EXPECT_EQ(plan(grid, {0, 0}, {1, 1}).status, PlanStatus::NoPath);
}

TEST(PlannerTest, StraightOnlyMode) {
  PlanConfig cfg;
  cfg.allow_diagonal = false;
  const PlanResult r = plan(open_grid(5, 5), {0, 0}, {4, 4}, cfg);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r.path.cost, (PathCost{8, 0}));
}

TEST(PlannerTest, Deterministic) {
  std::mt19937_64 rng(61);
  const OccupancyGrid grid = random_grid(rng, 24, 0.2);
  const PlanResult a = plan(grid, {0, 0}, {23, 23});
  const PlanResult b = plan(grid, {0, 0}, {23, 23});
  EXPECT_EQ(a.status, b.status);
  EXPECT_EQ(a.path.cells, b.path.cells);
}

TEST(PlannerTest, DetourMatchesDijkstra) {
  OccupancyGrid grid = open_grid(20, 20);
  ZoneRegistry reg(grid);
  reg.add_zone(1, {{0.4, 0.0}, {0.6, 0.0}, {0.6, 0.8}, {0.4, 0.8}});
  const PlanResult r = plan(reg.composite(), {2, 2}, {17, 2});
  ASSERT_TRUE(r.ok());
  const auto oracle = oracle::dijkstra(reg.composite(), {2, 2}, {17, 2});
  ASSERT_TRUE(oracle.has_value());
  EXPECT_EQ(r.path.cost, (PathCost{oracle->straight, oracle->diagonal}));
  EXPECT_GT(r.path.cost, (PathCost{15, 0}));
}

TEST(PlannerTest, RandomMapsMatchDijkstra) {
  std::mt19937_64 rng(62);
  std::uniform_int_distribution<std::int64_t> coord(0, 19);
  int solvable = 0;
  int attempts = 0;
  while (solvable < 200) {
    ASSERT_LT(++attempts, 5000);
    const OccupancyGrid grid = random_grid(rng, 20, 0.25);
    const GridIndex start{coord(rng), coord(rng)};
    const GridIndex goal{coord(rng), coord(rng)};
    const PlanResult r = plan(grid, start, goal);
    const auto oracle = oracle::dijkstra(grid, start, goal);
    ASSERT_EQ(r.ok(), oracle.has_value());
    if (!r.ok()) {
      continue;
    }
    EXPECT_EQ(r.path.cost, (PathCost{oracle->straight, oracle->diagonal}));
    expect_valid_path(grid, r.path, start, goal);
    ++solvable;
  }
}

TEST(PlannerTest, OctileHeuristicIsAdmissible) {
  std::mt19937_64 rng(63);
  std::uniform_int_distribution<std::int64_t> coord(0, 15);
  for (int i = 0; i < 300; ++i) {
    const OccupancyGrid grid = random_grid(rng, 16, 0.2);
    const GridIndex a{coord(rng), coord(rng)};
    const GridIndex b{coord(rng), coord(rng)};
    const auto truth = oracle::dijkstra(grid, a, b);
    if (truth) {
      EXPECT_LE(octile_distance(a, b), (PathCost{truth->straight, truth->diagonal}));
    }
  }
  EXPECT_EQ(octile_distance({0, 0}, {5, 2}), (PathCost{3, 2}));
}

TEST(PlannerTest, AddingZoneNeverShortensPath) {
  std::mt19937_64 rng(64);
  std::uniform_real_distribution<double> coord(-0.1, 1.7);
  std::uniform_int_distribution<std::int64_t> cell(0, 31);
  int checked = 0;
  while (checked < 100) {
    const OccupancyGrid grid = random_grid(rng, 32, 0.15);
    const GridIndex start{cell(rng), cell(rng)};
    const GridIndex goal{cell(rng), cell(rng)};
    const PlanResult before = plan(grid, start, goal);
    if (!before.ok()) {
      continue;
    }
    ZoneRegistry reg(grid);
    reg.add_zone(1, {{coord(rng), coord(rng)}, {coord(rng), coord(rng)}, {coord(rng), coord(rng)}});
    const PlanResult after = plan(reg.composite(), start, goal);
    if (after.ok()) {
      EXPECT_GE(after.path.cost, before.path.cost);
    }
    ++checked;
  }
}

TEST(PathLengthTest, Examples) {
  const std::vector<GridIndex> single{{3, 3}};
  EXPECT_DOUBLE_EQ(path_length(single, 0.05), 0.0);
  const std::vector<GridIndex> straight{{0, 0}, {1, 0}, {2, 0}, {3, 0}, {4, 0}};
  EXPECT_NEAR(path_length(straight, 0.05), 0.20, 1e-12);
  const std::vector<GridIndex> diagonal{{0, 0}, {1, 1}, {2, 2}, {3, 3}, {4, 4}};
  EXPECT_NEAR(path_length(diagonal, 0.05), 4 * 0.05 * std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(path_length(diagonal, 0.05), 0.2828, 1e-4);
}

TEST(PathLengthTest, WorldPolylineFollowsCellCenters) {
  const OccupancyGrid grid(10, 10, 0.5, Pose2D(1.0, 1.0, 0.0));
  const std::vector<GridIndex> cells{{0, 0}, {1, 1}};
  const std::vector<Point2> world = path_to_world(grid, cells);
  ASSERT_EQ(world.size(), 2u);
  EXPECT_NEAR(world[1].x, 1.5, 1e-12);
  EXPECT_NEAR(world[1].y, 1.5, 1e-12);
}

}  // namespace
}  // namespace keepout
