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

#ifndef KEEPOUT_GEOMETRY_HPP_
#define KEEPOUT_GEOMETRY_HPP_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "keepout/grid.hpp"

namespace keepout
{

class PolygonError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Closed ring of at least three world points; the last vertex connects
/// back to the first. Consecutive duplicates (including last/first) are
/// rejected. Self-intersections are allowed.
class Polygon
{
public:
  explicit Polygon(std::vector<Point2> vertices);

  const std::vector<Point2> & vertices() const {return vertices_;}
  std::size_t size() const {return vertices_.size();}

  bool operator==(const Polygon &) const = default;

private:
  std::vector<Point2> vertices_;
};

/// Rigid transform from a drawing frame into the map frame: rotate by
/// `theta`, then translate.
struct AnchorTransform
{
  double x{0.0};
  double y{0.0};
  double theta{0.0};

  static AnchorTransform identity() {return {};}
  AnchorTransform inverse() const;

  bool operator==(const AnchorTransform &) const = default;
};

Point2 apply_anchor(const AnchorTransform & t, Point2 p);
Polygon apply_anchor(const AnchorTransform & t, const Polygon & polygon);

/// Inclusive lattice rectangle used to clip rasterization output.
struct CellWindow
{
  std::int64_t min_col{0};
  std::int64_t min_row{0};
  std::int64_t max_col{-1};
  std::int64_t max_row{-1};

  static CellWindow of(const OccupancyGrid & grid);
  static CellWindow bounding(std::span<const GridIndex> cells);

  bool contains(GridIndex c) const
  {
    return c.col >= min_col && c.col <= max_col && c.row >= min_row && c.row <= max_row;
  }
};

/// 8-connected cells of the segment a-b, both endpoints included. Along the
/// major axis every lattice column (or row) gets the cell nearest the exact
/// line, ties rounding toward +infinity, so trace_line(a, b) and
/// trace_line(b, a) cover the same cells.
std::vector<GridIndex> trace_line(GridIndex a, GridIndex b, std::optional<CellWindow> window = {});

/// Union of trace_line over consecutive ring vertices (closing edge
/// included). Sorted and deduplicated.
std::vector<GridIndex> trace_edges(
  std::span<const GridIndex> ring, std::optional<CellWindow> window = {});

/// Lattice points strictly inside the ring under the even-odd rule; points
/// on any edge are excluded. Sorted row-major. Without a window the ring's
/// bounding box is scanned.
std::vector<GridIndex> fill_interior(
  std::span<const GridIndex> ring, std::optional<CellWindow> window = {});

/// Even-odd containment with points on an edge (within 1 nm) counted
/// inside.
bool point_in_polygon(Point2 p, std::span<const Point2> ring);
bool point_in_polygon(Point2 p, const Polygon & polygon);

/// Polygon vertices rounded to the nearest lattice cell (unclipped).
std::vector<GridIndex> quantize(const OccupancyGrid & grid, const Polygon & polygon);

struct Footprint
{
  /// In-bounds cells, sorted row-major.
  std::vector<GridIndex> cells;
  /// True when part of the footprint fell outside the grid and was dropped.
  bool clipped{false};
};

/// Edge trace plus even-odd interior of the quantized polygon, clipped to
/// the grid.
Footprint footprint(const OccupancyGrid & grid, const Polygon & polygon);

}  // namespace keepout

#endif  // KEEPOUT_GEOMETRY_HPP_
