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

#include "keepout/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace keepout
{

namespace
{

// Lattice coordinates are clamped here so the integer conversion stays
// defined for absurd inputs; anything this far out is clipped anyway.
constexpr double kLatticeLimit = 1099511627776.0;  // 2^40

void validate(std::size_t width, std::size_t height, double resolution, const Pose2D & origin)
{
  if (width < 1 || height < 1) {
    throw GridError("grid dimensions must be at least 1x1");
  }
  if (!(resolution > 0.0) || !std::isfinite(resolution)) {
    throw GridError("grid resolution must be positive and finite");
  }
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y) || !std::isfinite(origin.theta)) {
    throw GridError("grid origin must be finite");
  }
}

}  // namespace

const char * to_string(CellState state)
{
  switch (state) {
    case CellState::Free: return "free";
    case CellState::Occupied: return "occupied";
    case CellState::Unknown: return "unknown";
  }
  return "invalid";
}

double normalize_angle(double angle)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double a = std::remainder(angle, two_pi);
  if (a <= -std::numbers::pi) {
    a += two_pi;
  }
  return a;
}

Pose2D::Pose2D(double x_in, double y_in, double theta_in)
: x(x_in), y(y_in), theta(normalize_angle(theta_in)) {}

OccupancyGrid::OccupancyGrid(
  std::size_t width, std::size_t height, double resolution, Pose2D origin, CellState fill)
: width_(width), height_(height), resolution_(resolution), origin_(origin)
{
  validate(width, height, resolution, origin);
  cells_.assign(width * height, fill);
}

OccupancyGrid::OccupancyGrid(
  std::size_t width, std::size_t height, double resolution, Pose2D origin,
  std::vector<CellState> cells)
: width_(width), height_(height), resolution_(resolution), origin_(origin),
  cells_(std::move(cells))
{
  validate(width, height, resolution, origin);
  if (cells_.size() != width * height) {
    throw GridError("cell count does not match grid dimensions");
  }
}

CellState OccupancyGrid::at(GridIndex idx) const
{
  if (!contains(idx)) {
    throw std::out_of_range("grid index out of bounds");
  }
  return cells_[linear(idx)];
}

void OccupancyGrid::set(GridIndex idx, CellState state)
{
  if (!contains(idx)) {
    throw std::out_of_range("grid index out of bounds");
  }
  cells_[linear(idx)] = state;
}

bool OccupancyGrid::same_frame(const OccupancyGrid & other) const
{
  return width_ == other.width_ && height_ == other.height_ &&
         resolution_ == other.resolution_ && origin_ == other.origin_;
}

std::size_t OccupancyGrid::count(CellState state) const
{
  return static_cast<std::size_t>(std::count(cells_.begin(), cells_.end(), state));
}

Point2 world_to_grid_continuous(const OccupancyGrid & grid, Point2 p)
{
  const Pose2D & o = grid.origin();
  const double dx = p.x - o.x;
  const double dy = p.y - o.y;
  const double c = std::cos(o.theta);
  const double s = std::sin(o.theta);
  return {(c * dx + s * dy) / grid.resolution(), (-s * dx + c * dy) / grid.resolution()};
}

GridIndex world_to_lattice(const OccupancyGrid & grid, Point2 p)
{
  const Point2 g = world_to_grid_continuous(grid, p);
  if (!std::isfinite(g.x) || !std::isfinite(g.y)) {
    throw std::domain_error("world point is not finite");
  }
  auto quantize = [](double v) {
      return static_cast<std::int64_t>(std::clamp(std::floor(v + 0.5), -kLatticeLimit, kLatticeLimit));
    };
  return {quantize(g.x), quantize(g.y)};
}

std::optional<GridIndex> world_to_grid(const OccupancyGrid & grid, Point2 p)
{
  const GridIndex idx = world_to_lattice(grid, p);
  if (!grid.contains(idx)) {
    return std::nullopt;
  }
  return idx;
}

Point2 grid_to_world(const OccupancyGrid & grid, GridIndex idx)
{
  if (!grid.contains(idx)) {
    throw std::out_of_range("grid index out of bounds");
  }
  const Pose2D & o = grid.origin();
  const double gx = static_cast<double>(idx.col) * grid.resolution();
  const double gy = static_cast<double>(idx.row) * grid.resolution();
  const double c = std::cos(o.theta);
  const double s = std::sin(o.theta);
  return {o.x + c * gx - s * gy, o.y + s * gx + c * gy};
}

}  // namespace keepout
