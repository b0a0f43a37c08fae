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

#include "keepout/zone_store.hpp"

#include <json.hpp>

#include "keepout/map_io.hpp"

namespace keepout
{

namespace
{

using nlohmann::json;

double number(const json & j, const char * what)
{
  if (!j.is_number()) {
    throw StoreError(std::string(what) + " must be a number");
  }
  return j.get<double>();
}

Zone parse_zone(const json & j)
{
  if (!j.is_object()) {
    throw StoreError("zone entry must be an object");
  }
  const auto id_it = j.find("id");
  if (id_it == j.end() || !id_it->is_number_integer()) {
    throw StoreError("zone id must be an integer");
  }
  const ZoneId id = id_it->get<ZoneId>();
  if (id < 1) {
    throw StoreError("zone id must be >= 1, got " + std::to_string(id));
  }

  const auto vertices_it = j.find("vertices");
  if (vertices_it == j.end() || !vertices_it->is_array()) {
    throw StoreError("zone " + std::to_string(id) + ": vertices must be an array");
  }
  std::vector<Point2> vertices;
  for (const json & v : *vertices_it) {
    if (!v.is_array() || v.size() != 2) {
      throw StoreError("zone " + std::to_string(id) + ": vertex must be [x, y]");
    }
    vertices.push_back({number(v[0], "vertex x"), number(v[1], "vertex y")});
  }

  double rotation = 0.0;
  if (const auto it = j.find("rotation"); it != j.end()) {
    rotation = number(*it, "rotation");
  }
  AnchorTransform anchor;
  if (const auto it = j.find("anchor"); it != j.end()) {
    if (!it->is_object()) {
      throw StoreError("anchor must be an object");
    }
    for (const char * key : {"x", "y", "theta"}) {
      if (!it->contains(key)) {
        throw StoreError(std::string("anchor is missing \"") + key + "\"");
      }
    }
    anchor.x = number(it->at("x"), "anchor x");
    anchor.y = number(it->at("y"), "anchor y");
    anchor.theta = number(it->at("theta"), "anchor theta");
  }

  try {
    return Zone{id, Polygon(std::move(vertices)), rotation, anchor};
  } catch (const PolygonError & e) {
    throw StoreError("zone " + std::to_string(id) + ": " + e.what());
  }
}

}  // namespace

std::string save_store(const ZoneTable & zones)
{
  json list = json::array();
  for (const auto & [id, zone] : zones) {
    json vertices = json::array();
    for (const Point2 & p : zone.polygon.vertices()) {
      vertices.push_back(json::array({p.x, p.y}));
    }
    list.push_back({
        {"id", id},
        {"anchor", {{"x", zone.anchor.x}, {"y", zone.anchor.y}, {"theta", zone.anchor.theta}}},
        {"rotation", zone.rotation},
        {"vertices", std::move(vertices)},
      });
  }
  json doc;
  doc["zones"] = std::move(list);
  return doc.dump(2) + "\n";
}

std::string save_store(const ZoneRegistry & registry)
{
  return save_store(registry.zones());
}

ZoneTable parse_store(std::string_view document)
{
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error & e) {
    throw StoreError(std::string("zone document is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) {
    throw StoreError("zone document must be an object");
  }
  const auto zones_it = doc.find("zones");
  if (zones_it == doc.end() || !zones_it->is_array()) {
    throw StoreError("zone document needs a \"zones\" array");
  }

  ZoneTable zones;
  for (const json & entry : *zones_it) {
    Zone zone = parse_zone(entry);
    const ZoneId id = zone.id;
    if (!zones.emplace(id, std::move(zone)).second) {
      throw StoreError("duplicate zone id " + std::to_string(id));
    }
  }
  return zones;
}

ZoneRegistry load_store(std::string_view document, OccupancyGrid base)
{
  ZoneTable zones = parse_store(document);
  ZoneRegistry registry(std::move(base));
  for (auto & [id, zone] : zones) {
    registry.add_zone(std::move(zone));
  }
  return registry;
}

std::optional<ZoneRegistry> ZoneStore::load(const OccupancyGrid & base) const
{
  if (!std::filesystem::exists(path_)) {
    return std::nullopt;
  }
  return load_store(read_file(path_), base);
}

void ZoneStore::save(const ZoneRegistry & registry) const
{
  write_file_atomic(path_, save_store(registry));
}

}  // namespace keepout
