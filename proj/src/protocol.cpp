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

#include "keepout/protocol.hpp"

#include <boost/beast/core/detail/base64.hpp>
#include <json.hpp>

#include <cmath>

namespace keepout::protocol
{

namespace
{

using json = nlohmann::ordered_json;
namespace base64 = boost::beast::detail::base64;

[[noreturn]] void schema(const std::string & what)
{
  throw ProtocolError(ProtocolError::Kind::SchemaViolation, what);
}

const json & field(const json & j, const char * key)
{
  const auto it = j.find(key);
  if (it == j.end()) {
    schema(std::string("missing field \"") + key + "\"");
  }
  return *it;
}

double as_number(const json & j, const char * what)
{
  if (!j.is_number()) {
    schema(std::string(what) + " must be a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    schema(std::string(what) + " must be finite");
  }
  return v;
}

std::int64_t as_integer(const json & j, const char * what)
{
  if (!j.is_number_integer()) {
    schema(std::string(what) + " must be an integer");
  }
  return j.get<std::int64_t>();
}

std::uint64_t as_count(const json & j, const char * what)
{
  if (!j.is_number_unsigned()) {
    schema(std::string(what) + " must be a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

json points_to_json(const std::vector<Point2> & points)
{
  json out = json::array();
  for (const Point2 & p : points) {
    out.push_back(json::array({p.x, p.y}));
  }
  return out;
}

std::vector<Point2> points_from_json(const json & j, const char * what)
{
  if (!j.is_array()) {
    schema(std::string(what) + " must be an array of [x, y]");
  }
  std::vector<Point2> out;
  out.reserve(j.size());
  for (const json & p : j) {
    if (!p.is_array() || p.size() != 2) {
      schema(std::string(what) + " entries must be [x, y]");
    }
    out.push_back({as_number(p[0], "x"), as_number(p[1], "y")});
  }
  return out;
}

json pose_to_json(const Pose2D & pose)
{
  return json::array({pose.x, pose.y, pose.theta});
}

Pose2D pose_from_json(const json & j, const char * what)
{
  if (!j.is_array() || j.size() != 3) {
    schema(std::string(what) + " must be [x, y, theta]");
  }
  return Pose2D(as_number(j[0], "x"), as_number(j[1], "y"), as_number(j[2], "theta"));
}

std::string encode_base64(const std::vector<std::uint8_t> & bytes)
{
  std::string out(base64::encoded_size(bytes.size()), '\0');
  out.resize(base64::encode(out.data(), bytes.data(), bytes.size()));
  return out;
}

std::vector<std::uint8_t> decode_base64(const std::string & text)
{
  std::vector<std::uint8_t> out(base64::decoded_size(text.size()));
  const auto decoded = base64::decode(out.data(), text.data(), text.size());
  out.resize(decoded.first);
  // The decoder stops quietly at the first bad character; only canonical
  // input re-encodes to itself.
  if (encode_base64(out) != text) {
    schema("cells is not valid base64");
  }
  return out;
}

RobotStatus status_from_string(const std::string & s)
{
  if (s == "moving") {
    return RobotStatus::Moving;
  }
  if (s == "arrived") {
    return RobotStatus::Arrived;
  }
  if (s == "no_path") {
    return RobotStatus::NoPath;
  }
  schema("unknown robot status \"" + s + "\"");
}

std::string as_string(const json & j, const char * what)
{
  if (!j.is_string()) {
    schema(std::string(what) + " must be a string");
  }
  return j.get<std::string>();
}

json to_json(const AddZone & m)
{
  json j = {{"type", "add"}, {"id", m.id}, {"vertices", points_to_json(m.vertices)}};
  if (m.rotation != 0.0) {
    j["rotation"] = m.rotation;
  }
  return j;
}

json to_json(const RemoveZone & m)
{
  return {{"type", "remove"}, {"id", m.id}};
}

json to_json(const MapState & m)
{
  json zones = json::array();
  for (const ZoneOutline & z : m.zones) {
    zones.push_back({{"id", z.id}, {"vertices", points_to_json(z.vertices)}});
  }
  return {
    {"type", "map"},
    {"revision", m.revision},
    {"width", m.width},
    {"height", m.height},
    {"resolution", m.resolution},
    {"origin", pose_to_json(m.origin)},
    {"cells", encode_base64(m.cells)},
    {"zones", std::move(zones)},
  };
}

json to_json(const RobotState & m)
{
  return {
    {"type", "robot"},
    {"pose", pose_to_json(m.pose)},
    {"status", to_string(m.status)},
    {"path", points_to_json(m.path)},
    {"path_length", m.path_length},
  };
}

json to_json(const ErrorReply & m)
{
  return {{"type", "error"}, {"code", m.code}, {"message", m.message}};
}

AddZone add_from_json(const json & j)
{
  AddZone m;
  m.id = as_integer(field(j, "id"), "id");
  if (m.id < 1) {
    schema("add id must be >= 1");
  }
  m.vertices = points_from_json(field(j, "vertices"), "vertices");
  if (m.vertices.size() < 3) {
    schema("add needs at least 3 vertices");
  }
  if (const auto it = j.find("rotation"); it != j.end()) {
    m.rotation = as_number(*it, "rotation");
  }
  return m;
}

RemoveZone remove_from_json(const json & j)
{
  RemoveZone m;
  m.id = as_integer(field(j, "id"), "id");
  if (m.id < 0) {
    schema("remove id must be >= 0");
  }
  return m;
}

MapState map_from_json(const json & j)
{
  MapState m;
  m.revision = as_count(field(j, "revision"), "revision");
  m.width = as_count(field(j, "width"), "width");
  m.height = as_count(field(j, "height"), "height");
  if (m.width == 0 || m.height == 0) {
    schema("map dimensions must be positive");
  }
  m.resolution = as_number(field(j, "resolution"), "resolution");
  if (!(m.resolution > 0.0)) {
    schema("resolution must be positive");
  }
  m.origin = pose_from_json(field(j, "origin"), "origin");
  m.cells = decode_base64(as_string(field(j, "cells"), "cells"));
  if (m.cells.size() != m.width * m.height) {
    schema("cells length does not match width * height");
  }
  for (std::uint8_t b : m.cells) {
    if (b != kWireFree && b != kWireOccupied && b != kWireUnknown) {
      schema("cells contains an invalid state byte");
    }
  }
  const json & zones = field(j, "zones");
  if (!zones.is_array()) {
    schema("zones must be an array");
  }
  for (const json & z : zones) {
    if (!z.is_object()) {
      schema("zone outline must be an object");
    }
    m.zones.push_back({as_integer(field(z, "id"), "zone id"),
        points_from_json(field(z, "vertices"), "zone vertices")});
  }
  return m;
}

RobotState robot_from_json(const json & j)
{
  RobotState m;
  m.pose = pose_from_json(field(j, "pose"), "pose");
  m.status = status_from_string(as_string(field(j, "status"), "status"));
  m.path = points_from_json(field(j, "path"), "path");
  m.path_length = as_number(field(j, "path_length"), "path_length");
  return m;
}

ErrorReply error_from_json(const json & j)
{
  return {as_string(field(j, "code"), "code"), as_string(field(j, "message"), "message")};
}

}  // namespace

const char * ProtocolError::code() const
{
  return kind_ == Kind::MalformedFrame ? "malformed_frame" : "schema_violation";
}

const char * to_string(RobotStatus status)
{
  switch (status) {
    case RobotStatus::Moving: return "moving";
    case RobotStatus::Arrived: return "arrived";
    case RobotStatus::NoPath: return "no_path";
  }
  return "invalid";
}

std::string encode(const WireMessage & message)
{
  return std::visit([](const auto & m) {return to_json(m).dump();}, message);
}

WireMessage decode(std::string_view frame)
{
  json j;
  try {
    j = json::parse(frame);
  } catch (const json::parse_error & e) {
    throw ProtocolError(ProtocolError::Kind::MalformedFrame, e.what());
  }
  if (!j.is_object()) {
    throw ProtocolError(ProtocolError::Kind::MalformedFrame, "frame must be a JSON object");
  }
  const std::string type = as_string(field(j, "type"), "type");
  if (type == "add") {
    return add_from_json(j);
  }
  if (type == "remove") {
    return remove_from_json(j);
  }
  if (type == "map") {
    return map_from_json(j);
  }
  if (type == "robot") {
    return robot_from_json(j);
  }
  if (type == "error") {
    return error_from_json(j);
  }
  schema("unknown message type \"" + type + "\"");
}

std::uint8_t to_wire(CellState state)
{
  switch (state) {
    case CellState::Free: return kWireFree;
    case CellState::Occupied: return kWireOccupied;
    case CellState::Unknown: return kWireUnknown;
  }
  return kWireUnknown;
}

CellState from_wire(std::uint8_t byte)
{
  switch (byte) {
    case kWireFree: return CellState::Free;
    case kWireOccupied: return CellState::Occupied;
    case kWireUnknown: return CellState::Unknown;
    default: break;
  }
  throw std::invalid_argument("invalid wire cell byte");
}

MapState make_map_state(const ZoneRegistry & registry)
{
  const OccupancyGrid & grid = registry.composite();
  MapState m;
  m.revision = registry.revision();
  m.width = grid.width();
  m.height = grid.height();
  m.resolution = grid.resolution();
  m.origin = grid.origin();
  m.cells.reserve(grid.size());
  for (CellState c : grid.cells()) {
    m.cells.push_back(to_wire(c));
  }
  for (const auto & [id, zone] : registry.zones()) {
    m.zones.push_back({id, zone.polygon.vertices()});
  }
  return m;
}

OccupancyGrid to_grid(const MapState & state)
{
  std::vector<CellState> cells;
  cells.reserve(state.cells.size());
  for (std::uint8_t b : state.cells) {
    cells.push_back(from_wire(b));
  }
  return OccupancyGrid(state.width, state.height, state.resolution, state.origin, std::move(cells));
}

ApplyResult apply_message(ZoneRegistry & registry, const WireMessage & message)
{
  ApplyResult result;
  try {
    if (const auto * add = std::get_if<AddZone>(&message)) {
      registry.add_zone(add->id, add->vertices, add->rotation);
    } else if (const auto * remove = std::get_if<RemoveZone>(&message)) {
      if (remove->is_clear()) {
        registry.clear();
      } else {
        registry.delete_zone(remove->id);
      }
    } else {
      result.reply = ErrorReply{"unsupported_message", "only add and remove are accepted"};
      return result;
    }
  } catch (const RegistryError & e) {
    result.reply = ErrorReply{to_string(e.code()), e.what()};
    return result;
  }
  result.applied = true;
  result.broadcast.push_back(make_map_state(registry));
  return result;
}

}  // namespace keepout::protocol
