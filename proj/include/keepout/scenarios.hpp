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

#ifndef KEEPOUT_SCENARIOS_HPP_
#define KEEPOUT_SCENARIOS_HPP_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "keepout/nav_sim.hpp"
#include "keepout/zone_registry.hpp"

namespace keepout
{

// Built-in synthetic rooms: 6 m x 4 m at 5 cm/cell with a one-cell wall
// ring, start at (0.5, 2.0) and goal at (5.5, 2.0).
//
//   stage1: one thin panel standing across the direct route.
//   stage2: two thin panels, one from each long wall, with a box between
//           them.
//
// The obstacle layouts are synthetic; they are chosen so that driving on
// the bare room map runs into an obstacle.

/// Axis-aligned obstacle, inclusive cell range.
struct CellRect
{
  std::int64_t min_col;
  std::int64_t min_row;
  std::int64_t max_col;
  std::int64_t max_row;

  CellRect grown(std::int64_t cells) const
  {
    return {min_col - cells, min_row - cells, max_col + cells, max_row + cells};
  }
};

std::vector<std::string> builtin_scenario_names();

/// std::nullopt for an unknown name.
std::optional<Scenario> builtin_scenario(std::string_view name);

std::vector<CellRect> builtin_obstacles(std::string_view name);

enum class ZoneFit
{
  /// Each zone traces its obstacle's outline exactly.
  Accurate,
  /// Each zone is grown by kOversizeCells on every side.
  Oversized,
};

inline constexpr std::int64_t kOversizeCells = 6;

/// Reference zones for a built-in scenario, ids starting at 1.
ZoneTable reference_zones(std::string_view name, ZoneFit fit);

/// A built-in scenario name, or a path to a scenario manifest.
Scenario resolve_scenario(const std::string & name_or_path);

}  // namespace keepout

#endif  // KEEPOUT_SCENARIOS_HPP_
