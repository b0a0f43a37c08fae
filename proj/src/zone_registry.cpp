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

#include "keepout/zone_registry.hpp"

#include <boost/container_hash/hash.hpp>

#include <string>

namespace keepout
{

namespace
{

std::size_t paint(OccupancyGrid & grid, const Polygon & polygon, bool * clipped = nullptr)
{
  const Footprint fp = footprint(grid, polygon);
  for (const GridIndex & cell : fp.cells) {
    grid.set(cell, CellState::Occupied);
  }
  if (clipped != nullptr) {
    *clipped = fp.clipped;
  }
  return fp.cells.size();
}

}  // namespace

const char * to_string(RegistryErrorCode code)
{
  switch (code) {
    case RegistryErrorCode::DuplicateId: return "duplicate_id";
    case RegistryErrorCode::InvalidId: return "invalid_id";
    case RegistryErrorCode::DegeneratePolygon: return "degenerate_polygon";
    case RegistryErrorCode::UnknownId: return "unknown_id";
  }
  return "unknown_error";
}

OccupancyGrid recompose(const OccupancyGrid & base, const ZoneTable & zones)
{
  OccupancyGrid out = base;
  for (const auto & [id, zone] : zones) {
    paint(out, zone.polygon);
  }
  return out;
}

ZoneRegistry::ZoneRegistry(OccupancyGrid base)
: base_(std::move(base)), composite_(base_) {}

ZoneId ZoneRegistry::next_id() const
{
  return zones_.empty() ? 1 : zones_.rbegin()->first + 1;
}

AddOutcome ZoneRegistry::add_zone(Zone zone)
{
  if (zone.id < 1) {
    throw RegistryError(RegistryErrorCode::InvalidId,
            "zone id must be >= 1, got " + std::to_string(zone.id));
  }
  if (contains(zone.id)) {
    throw RegistryError(RegistryErrorCode::DuplicateId,
            "zone " + std::to_string(zone.id) + " already exists");
  }
  AddOutcome outcome;
  outcome.footprint_cells = paint(composite_, zone.polygon, &outcome.clipped);
  zones_.emplace(zone.id, std::move(zone));
  ++revision_;
  return outcome;
}

AddOutcome ZoneRegistry::add_zone(ZoneId id, std::vector<Point2> vertices, double rotation)
{
  if (id < 1) {
    throw RegistryError(RegistryErrorCode::InvalidId,
            "zone id must be >= 1, got " + std::to_string(id));
  }
  try {
    return add_zone(Zone{id, Polygon(std::move(vertices)), rotation, {}});
  } catch (const PolygonError & e) {
    throw RegistryError(RegistryErrorCode::DegeneratePolygon, e.what());
  }
}

void ZoneRegistry::delete_zone(ZoneId id)
{
  if (zones_.erase(id) == 0) {
    throw RegistryError(RegistryErrorCode::UnknownId,
            "no zone with id " + std::to_string(id));
  }
  composite_ = recompose(base_, zones_);
  ++revision_;
}

void ZoneRegistry::clear()
{
  zones_.clear();
  composite_ = base_;
  ++revision_;
}

std::uint64_t state_hash(const ZoneRegistry & registry)
{
  std::size_t seed = 0;
  for (const auto & [id, zone] : registry.zones()) {
    boost::hash_combine(seed, id);
    boost::hash_combine(seed, zone.rotation);
    for (const Point2 & p : zone.polygon.vertices()) {
      boost::hash_combine(seed, p.x);
      boost::hash_combine(seed, p.y);
    }
  }
  for (CellState cell : registry.composite().cells()) {
    boost::hash_combine(seed, static_cast<int>(cell));
  }
  return seed;
}

}  // namespace keepout
