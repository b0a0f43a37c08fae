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

#include "keepout/scenarios.hpp"

#include <stdexcept>

namespace keepout
{

namespace
{

constexpr std::size_t kRoomWidth = 120;
constexpr std::size_t kRoomHeight = 80;
constexpr double kRoomResolution = 0.05;

OccupancyGrid empty_room()
{
  OccupancyGrid room(kRoomWidth, kRoomHeight, kRoomResolution, Pose2D(0.0, 0.0, 0.0));
  for (std::size_t c = 0; c < kRoomWidth; ++c) {
    room.set({static_cast<std::int64_t>(c), 0}, CellState::Occupied);
    room.set({static_cast<std::int64_t>(c), kRoomHeight - 1}, CellState::Occupied);
  }
  for (std::size_t r = 0; r < kRoomHeight; ++r) {
    room.set({0, static_cast<std::int64_t>(r)}, CellState::Occupied);
    room.set({kRoomWidth - 1, static_cast<std::int64_t>(r)}, CellState::Occupied);
  }
  return room;
}

Polygon rect_polygon(const CellRect & r)
{
  auto world = [](std::int64_t cell) {return static_cast<double>(cell) * kRoomResolution;};
  return Polygon({
      {world(r.min_col), world(r.min_row)},
      {world(r.max_col), world(r.min_row)},
      {world(r.max_col), world(r.max_row)},
      {world(r.min_col), world(r.max_row)},
    });
}

}  // namespace

std::vector<std::string> builtin_scenario_names()
{
  return {"stage1", "stage2"};
}

std::vector<CellRect> builtin_obstacles(std::string_view name)
{
  if (name == "stage1") {
    // 15 cm x 2 m panel across the middle of the room.
    return {{59, 20, 61, 60}};
  }
  if (name == "stage2") {
    return {
      {39, 1, 41, 52},   // panel from the lower wall
      {79, 28, 81, 78},  // panel from the upper wall
      {55, 35, 65, 45},  // 55 cm box between them
    };
  }
  return {};
}

std::optional<Scenario> builtin_scenario(std::string_view name)
{
  const std::vector<CellRect> obstacles = builtin_obstacles(name);
  if (obstacles.empty()) {
    return std::nullopt;
  }
  OccupancyGrid base = empty_room();
  OccupancyGrid truth = base;
  for (const CellRect & r : obstacles) {
    for (std::int64_t row = r.min_row; row <= r.max_row; ++row) {
      for (std::int64_t col = r.min_col; col <= r.max_col; ++col) {
        truth.set({col, row}, CellState::Occupied);
      }
    }
  }
  Scenario scenario{std::string(name), std::move(base), std::move(truth),
    Pose2D(0.5, 2.0, 0.0), Pose2D(5.5, 2.0, 0.0)};
  scenario.validate();
  return scenario;
}

ZoneTable reference_zones(std::string_view name, ZoneFit fit)
{
  ZoneTable zones;
  ZoneId id = 1;
  for (const CellRect & r : builtin_obstacles(name)) {
    const CellRect shape = fit == ZoneFit::Oversized ? r.grown(kOversizeCells) : r;
    zones.emplace(id, Zone{id, rect_polygon(shape), 0.0, {}});
    ++id;
  }
  return zones;
}

Scenario resolve_scenario(const std::string & name_or_path)
{
  if (auto builtin = builtin_scenario(name_or_path)) {
    return std::move(*builtin);
  }
  return load_scenario(name_or_path);
}

}  // namespace keepout
