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

#ifndef KEEPOUT_ZONE_REGISTRY_HPP_
#define KEEPOUT_ZONE_REGISTRY_HPP_

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "keepout/geometry.hpp"
#include "keepout/grid.hpp"

namespace keepout
{

using ZoneId = std::int64_t;

/// A restricted zone. Vertices are in the map frame. `rotation` and
/// `anchor` are carried for persistence only and never affect
/// rasterization.
struct Zone
{
  ZoneId id{0};
  Polygon polygon;
  double rotation{0.0};
  AnchorTransform anchor{};

  bool operator==(const Zone &) const = default;
};

enum class RegistryErrorCode
{
  DuplicateId,
  InvalidId,
  DegeneratePolygon,
  UnknownId,
};

/// Wire name of the error ("duplicate_id", "unknown_id", ...).
const char * to_string(RegistryErrorCode code);

class RegistryError : public std::runtime_error
{
public:
  RegistryError(RegistryErrorCode code, const std::string & what)
  : std::runtime_error(what), code_(code) {}

  RegistryErrorCode code() const {return code_;}

private:
  RegistryErrorCode code_;
};

using ZoneTable = std::map<ZoneId, Zone>;

/// Base map with every zone footprint set to Occupied, applied in
/// ascending id order.
OccupancyGrid recompose(const OccupancyGrid & base, const ZoneTable & zones);

struct AddOutcome
{
  std::size_t footprint_cells{0};
  /// Part of the polygon lay outside the map and was dropped.
  bool clipped{false};
};

/// Owns the robot-generated base map, the zone table and the composite map
/// derived from both. The composite always equals recompose(base, zones).
///
/// Single writer: callers serialize mutations.
class ZoneRegistry
{
public:
  explicit ZoneRegistry(OccupancyGrid base);

  const OccupancyGrid & base() const {return base_;}
  const OccupancyGrid & composite() const {return composite_;}
  const ZoneTable & zones() const {return zones_;}
  bool contains(ZoneId id) const {return zones_.count(id) != 0;}

  /// max existing id + 1, starting at 1.
  ZoneId next_id() const;

  /// Number of successful mutations since construction.
  std::uint64_t revision() const {return revision_;}

  AddOutcome add_zone(Zone zone);
  /// Validates `vertices` into a polygon first (DegeneratePolygon).
  AddOutcome add_zone(ZoneId id, std::vector<Point2> vertices, double rotation = 0.0);

  /// Removes the zone, then rebuilds the composite from the base map and
  /// the remaining zones.
  void delete_zone(ZoneId id);

  void clear();

  /// Compares base, zones and composite; revision is not part of the state.
  bool operator==(const ZoneRegistry & other) const
  {
    return base_ == other.base_ && zones_ == other.zones_ && composite_ == other.composite_;
  }

private:
  OccupancyGrid base_;
  ZoneTable zones_;
  OccupancyGrid composite_;
  std::uint64_t revision_{0};
};

/// Hash of zones and composite, for cheap "did anything change" checks.
std::uint64_t state_hash(const ZoneRegistry & registry);

}  // namespace keepout

#endif  // KEEPOUT_ZONE_REGISTRY_HPP_
