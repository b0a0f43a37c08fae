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

#ifndef KEEPOUT_GRID_HPP_
#define KEEPOUT_GRID_HPP_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace keepout
{

enum class CellState : std::uint8_t { Free, Occupied, Unknown };

const char * to_string(CellState state);

struct Point2
{
  double x{0.0};
  double y{0.0};

  bool operator==(const Point2 &) const = default;
};

/// Returns `angle` wrapped into (-pi, pi].
double normalize_angle(double angle);

struct Pose2D
{
  Pose2D() = default;
  /// `theta` is normalized on construction.
  Pose2D(double x, double y, double theta);

  double x{0.0};
  double y{0.0};
  double theta{0.0};

  Point2 position() const {return {x, y};}

  bool operator==(const Pose2D &) const = default;
};

struct GridIndex
{
  std::int64_t col{0};
  std::int64_t row{0};

  // Row-major ordering.
  std::strong_ordering operator<=>(const GridIndex & other) const
  {
    if (const auto c = row <=> other.row; c != 0) {
      return c;
    }
    return col <=> other.col;
  }
  bool operator==(const GridIndex &) const = default;
};

/// Thrown for malformed grids and incompatible grid pairs.
class GridError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Three-state occupancy lattice. `origin` is the world pose of the center
/// of cell (0, 0); cells are stored row-major with row 0 at the origin side.
class OccupancyGrid
{
public:
  OccupancyGrid(
    std::size_t width, std::size_t height, double resolution, Pose2D origin,
    CellState fill = CellState::Free);
  OccupancyGrid(
    std::size_t width, std::size_t height, double resolution, Pose2D origin,
    std::vector<CellState> cells);

  std::size_t width() const {return width_;}
  std::size_t height() const {return height_;}
  std::size_t size() const {return cells_.size();}
  double resolution() const {return resolution_;}
  const Pose2D & origin() const {return origin_;}
  const std::vector<CellState> & cells() const {return cells_;}

  bool contains(GridIndex idx) const
  {
    return idx.col >= 0 && idx.row >= 0 &&
           static_cast<std::size_t>(idx.col) < width_ &&
           static_cast<std::size_t>(idx.row) < height_;
  }

  std::size_t linear(GridIndex idx) const
  {
    return static_cast<std::size_t>(idx.row) * width_ + static_cast<std::size_t>(idx.col);
  }

  GridIndex index_of(std::size_t linear_index) const
  {
    return {static_cast<std::int64_t>(linear_index % width_),
      static_cast<std::int64_t>(linear_index / width_)};
  }

  /// Bounds-checked access; throws std::out_of_range.
  CellState at(GridIndex idx) const;
  void set(GridIndex idx, CellState state);

  CellState operator[](std::size_t linear_index) const {return cells_[linear_index];}
  CellState & operator[](std::size_t linear_index) {return cells_[linear_index];}

  /// True when dimensions, resolution and origin agree exactly.
  bool same_frame(const OccupancyGrid & other) const;

  std::size_t count(CellState state) const;

  bool operator==(const OccupancyGrid &) const = default;

private:
  std::size_t width_;
  std::size_t height_;
  double resolution_;
  Pose2D origin_;
  std::vector<CellState> cells_;
};

/// World point expressed in continuous grid units (cell centers at integers).
Point2 world_to_grid_continuous(const OccupancyGrid & grid, Point2 p);

/// Nearest cell center to `p`, or std::nullopt when that cell lies outside
/// the grid.
std::optional<GridIndex> world_to_grid(const OccupancyGrid & grid, Point2 p);

/// Nearest lattice index without bounds checking (may be negative).
GridIndex world_to_lattice(const OccupancyGrid & grid, Point2 p);

/// Cell-center world coordinates. Throws std::out_of_range for indices
/// outside the grid.
Point2 grid_to_world(const OccupancyGrid & grid, GridIndex idx);

}  // namespace keepout

#endif  // KEEPOUT_GRID_HPP_
