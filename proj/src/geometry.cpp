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

#include "keepout/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <limits>

namespace keepout
{

namespace
{

// Products of lattice coordinates can exceed 64 bits once vertices are far
// outside the map.
__extension__ typedef __int128 wide;

wide floor_div(wide num, wide den)
{
  // den > 0
  wide q = num / den;
  if ((num % den != 0) && (num < 0)) {
    --q;
  }
  return q;
}

wide floor_mod(wide num, wide den)
{
  return num - floor_div(num, den) * den;
}

wide ceil_div(wide num, wide den)
{
  return -floor_div(-num, den);
}

struct Rational
{
  wide num;
  wide den;  // > 0
};

bool less(const Rational & a, const Rational & b)
{
  return a.num * b.den < b.num * a.den;
}

constexpr double kOnEdgeTolerance = 1e-9;

double distance_to_segment(Point2 p, Point2 a, Point2 b)
{
  const double ex = b.x - a.x;
  const double ey = b.y - a.y;
  const double len2 = ex * ex + ey * ey;
  double t = 0.0;
  if (len2 > 0.0) {
    t = std::clamp(((p.x - a.x) * ex + (p.y - a.y) * ey) / len2, 0.0, 1.0);
  }
  return std::hypot(p.x - (a.x + t * ex), p.y - (a.y + t * ey));
}

}  // namespace

Polygon::Polygon(std::vector<Point2> vertices)
: vertices_(std::move(vertices))
{
  if (vertices_.size() < 3) {
    throw PolygonError("polygon needs at least 3 vertices");
  }
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const Point2 & v = vertices_[i];
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
      throw PolygonError("polygon vertex is not finite");
    }
    if (v == vertices_[(i + 1) % vertices_.size()]) {
      throw PolygonError("polygon has consecutive duplicate vertices");
    }
  }
}

AnchorTransform AnchorTransform::inverse() const
{
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  return {-(c * x + s * y), -(-s * x + c * y), -theta};
}

Point2 apply_anchor(const AnchorTransform & t, Point2 p)
{
  const double c = std::cos(t.theta);
  const double s = std::sin(t.theta);
  return {c * p.x - s * p.y + t.x, s * p.x + c * p.y + t.y};
}

Polygon apply_anchor(const AnchorTransform & t, const Polygon & polygon)
{
  std::vector<Point2> out;
  out.reserve(polygon.size());
  for (const Point2 & p : polygon.vertices()) {
    out.push_back(apply_anchor(t, p));
  }
  return Polygon(std::move(out));
}

CellWindow CellWindow::of(const OccupancyGrid & grid)
{
  return {0, 0, static_cast<std::int64_t>(grid.width()) - 1,
    static_cast<std::int64_t>(grid.height()) - 1};
}

CellWindow CellWindow::bounding(std::span<const GridIndex> cells)
{
  CellWindow w{std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::max(),
    std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::min()};
  for (const GridIndex & c : cells) {
    w.min_col = std::min(w.min_col, c.col);
    w.max_col = std::max(w.max_col, c.col);
    w.min_row = std::min(w.min_row, c.row);
    w.max_row = std::max(w.max_row, c.row);
  }
  return w;
}

std::vector<GridIndex> trace_line(GridIndex a, GridIndex b, std::optional<CellWindow> window)
{
  std::vector<GridIndex> out;
  const std::int64_t dx = b.col - a.col;
  const std::int64_t dy = b.row - a.row;
  const bool x_major = std::abs(dx) >= std::abs(dy);

  // Work in (major, minor) coordinates.
  const std::int64_t major0 = x_major ? a.col : a.row;
  const std::int64_t minor0 = x_major ? a.row : a.col;
  const std::int64_t d_major = x_major ? dx : dy;
  const std::int64_t d_minor = x_major ? dy : dx;
  const std::int64_t n = std::abs(d_major);
  const std::int64_t step = d_major >= 0 ? 1 : -1;
  auto make = [x_major](std::int64_t major, std::int64_t minor) {
      return x_major ? GridIndex{major, minor} : GridIndex{minor, major};
    };

  std::int64_t k_lo = 0;
  std::int64_t k_hi = n;
  if (window) {
    const std::int64_t lo = x_major ? window->min_col : window->min_row;
    const std::int64_t hi = x_major ? window->max_col : window->max_row;
    if (step > 0) {
      k_lo = std::max<std::int64_t>(k_lo, lo - major0);
      k_hi = std::min<std::int64_t>(k_hi, hi - major0);
    } else {
      k_lo = std::max<std::int64_t>(k_lo, major0 - hi);
      k_hi = std::min<std::int64_t>(k_hi, major0 - lo);
    }
  }
  if (k_lo > k_hi) {
    return out;
  }
  if (n == 0) {
    if (!window || window->contains(a)) {
      out.push_back(a);
    }
    return out;
  }

  // Minor coordinate at step k is minor0 + floor((2*d_minor*k + n) / 2n),
  // i.e. the exact line rounded half up. `err` holds the remainder in
  // [0, 2n) and is advanced incrementally.
  const wide two_n = 2 * static_cast<wide>(n);
  const wide start = 2 * static_cast<wide>(d_minor) * k_lo + n;
  std::int64_t minor = minor0 + static_cast<std::int64_t>(floor_div(start, two_n));
  wide err = floor_mod(start, two_n);
  const wide err_step = 2 * static_cast<wide>(d_minor);

  out.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
  for (std::int64_t k = k_lo; k <= k_hi; ++k) {
    const GridIndex cell = make(major0 + step * k, minor);
    if (!window || window->contains(cell)) {
      out.push_back(cell);
    }
    err += err_step;
    if (err >= two_n) {
      err -= two_n;
      ++minor;
    } else if (err < 0) {
      err += two_n;
      --minor;
    }
  }
  return out;
}

std::vector<GridIndex> trace_edges(std::span<const GridIndex> ring, std::optional<CellWindow> window)
{
  std::vector<GridIndex> out;
  for (std::size_t i = 0; i < ring.size(); ++i) {
    const std::vector<GridIndex> line = trace_line(ring[i], ring[(i + 1) % ring.size()], window);
    out.insert(out.end(), line.begin(), line.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<GridIndex> fill_interior(std::span<const GridIndex> ring, std::optional<CellWindow> window)
{
  std::vector<GridIndex> out;
  if (ring.size() < 3) {
    return out;
  }
  const CellWindow bbox = CellWindow::bounding(ring);
  const CellWindow clip = window.value_or(bbox);
  const std::int64_t row_lo = std::max(bbox.min_row, clip.min_row);
  const std::int64_t row_hi = std::min(bbox.max_row, clip.max_row);
  const std::int64_t col_lo = std::max(bbox.min_col, clip.min_col);
  const std::int64_t col_hi = std::min(bbox.max_col, clip.max_col);

  std::vector<Rational> crossings;
  std::vector<std::int64_t> on_edge;
  std::vector<std::pair<std::int64_t, std::int64_t>> on_flat_edge;

  for (std::int64_t y = row_lo; y <= row_hi; ++y) {
    crossings.clear();
    on_edge.clear();
    on_flat_edge.clear();

    for (std::size_t i = 0; i < ring.size(); ++i) {
      const GridIndex & a = ring[i];
      const GridIndex & b = ring[(i + 1) % ring.size()];
      if (a.row == b.row) {
        if (a.row == y) {
          on_flat_edge.emplace_back(std::min(a.col, b.col), std::max(a.col, b.col));
        }
        continue;
      }
      const std::int64_t lo = std::min(a.row, b.row);
      const std::int64_t hi = std::max(a.row, b.row);
      if (y < lo || y > hi) {
        continue;
      }
      Rational x{
        static_cast<wide>(a.col) * (b.row - a.row) + static_cast<wide>(y - a.row) * (b.col - a.col),
        static_cast<wide>(b.row - a.row)};
      if (x.den < 0) {
        x.num = -x.num;
        x.den = -x.den;
      }
      if (x.num % x.den == 0) {
        on_edge.push_back(static_cast<std::int64_t>(x.num / x.den));
      }
      // Half-open in y so shared vertices are counted once.
      if (y < hi) {
        crossings.push_back(x);
      }
    }

    std::sort(crossings.begin(), crossings.end(), less);
    std::sort(on_edge.begin(), on_edge.end());
    auto is_boundary = [&](std::int64_t c) {
        if (std::binary_search(on_edge.begin(), on_edge.end(), c)) {
          return true;
        }
        return std::any_of(on_flat_edge.begin(), on_flat_edge.end(),
          [c](const auto & r) {return c >= r.first && c <= r.second;});
      };

    for (std::size_t i = 0; i + 1 < crossings.size(); i += 2) {
      // Strictly between the two crossings.
      const wide first = floor_div(crossings[i].num, crossings[i].den) + 1;
      const wide last = ceil_div(crossings[i + 1].num, crossings[i + 1].den) - 1;
      const std::int64_t from = static_cast<std::int64_t>(std::max<wide>(first, col_lo));
      const std::int64_t to = static_cast<std::int64_t>(std::min<wide>(last, col_hi));
      for (std::int64_t c = from; c <= to; ++c) {
        if (!is_boundary(c)) {
          out.push_back({c, y});
        }
      }
    }
  }
  return out;
}

bool point_in_polygon(Point2 p, std::span<const Point2> ring)
{
  bool inside = false;
  for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
    const Point2 & a = ring[j];
    const Point2 & b = ring[i];
    if (distance_to_segment(p, a, b) <= kOnEdgeTolerance) {
      return true;
    }
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) {
        inside = !inside;
      }
    }
  }
  return inside;
}

bool point_in_polygon(Point2 p, const Polygon & polygon)
{
  return point_in_polygon(p, std::span<const Point2>(polygon.vertices()));
}

std::vector<GridIndex> quantize(const OccupancyGrid & grid, const Polygon & polygon)
{
  std::vector<GridIndex> ring;
  ring.reserve(polygon.size());
  for (const Point2 & p : polygon.vertices()) {
    ring.push_back(world_to_lattice(grid, p));
  }
  return ring;
}

Footprint footprint(const OccupancyGrid & grid, const Polygon & polygon)
{
  const std::vector<GridIndex> ring = quantize(grid, polygon);
  const CellWindow window = CellWindow::of(grid);

  Footprint fp;
  fp.clipped = std::any_of(ring.begin(), ring.end(),
      [&](const GridIndex & c) {return !window.contains(c);});

  const std::vector<GridIndex> edges = trace_edges(ring, window);
  const std::vector<GridIndex> interior = fill_interior(ring, window);
  fp.cells.reserve(edges.size() + interior.size());
  std::set_union(edges.begin(), edges.end(), interior.begin(), interior.end(),
    std::back_inserter(fp.cells));
  return fp;
}

}  // namespace keepout
