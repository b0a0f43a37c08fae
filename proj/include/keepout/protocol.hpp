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

#ifndef KEEPOUT_PROTOCOL_HPP_
#define KEEPOUT_PROTOCOL_HPP_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "keepout/grid.hpp"
#include "keepout/zone_registry.hpp"

// Zone-sync wire protocol. One message is one JSON object carrying a
// "type" discriminator; over a stream socket each message is a single
// line terminated by '\n', over a web socket it is one text frame.
//
//   {"type":"add","id":3,"vertices":[[x,y],...]}          client -> server
//   {"type":"remove","id":3}                              client -> server
//   {"type":"remove","id":0}                              clear all zones
//   {"type":"map","revision":..,"width":..,...}           server -> client
//   {"type":"robot","pose":[x,y,theta],"path":[...],...}  server -> client
//   {"type":"error","code":"unknown_id","message":".."}   server -> sender
//
// Unknown fields are ignored; unknown types are rejected.

namespace keepout::protocol
{

struct AddZone
{
  ZoneId id{0};
  std::vector<Point2> vertices;
  /// Optional on the wire; omitted when zero.
  double rotation{0.0};

  bool operator==(const AddZone &) const = default;
};

/// id 0 means "clear every zone".
struct RemoveZone
{
  ZoneId id{0};

  bool is_clear() const {return id == 0;}
  bool operator==(const RemoveZone &) const = default;
};

struct ZoneOutline
{
  ZoneId id{0};
  std::vector<Point2> vertices;

  bool operator==(const ZoneOutline &) const = default;
};

// Cell bytes of MapState::cells.
inline constexpr std::uint8_t kWireFree = 0;
inline constexpr std::uint8_t kWireOccupied = 100;
inline constexpr std::uint8_t kWireUnknown = 255;

/// Full composite map. `cells` is one byte per cell, row-major, base64 on
/// the wire.
struct MapState
{
  std::uint64_t revision{0};
  std::uint64_t width{0};
  std::uint64_t height{0};
  double resolution{0.0};
  Pose2D origin;
  std::vector<std::uint8_t> cells;
  std::vector<ZoneOutline> zones;

  bool operator==(const MapState &) const = default;
};

enum class RobotStatus { Moving, Arrived, NoPath };

const char * to_string(RobotStatus status);

struct RobotState
{
  Pose2D pose;
  RobotStatus status{RobotStatus::Arrived};
  /// Planned path from the robot's position to the goal, world meters.
  std::vector<Point2> path;
  double path_length{0.0};

  bool operator==(const RobotState &) const = default;
};

struct ErrorReply
{
  std::string code;
  std::string message;

  bool operator==(const ErrorReply &) const = default;
};

using WireMessage = std::variant<AddZone, RemoveZone, MapState, RobotState, ErrorReply>;

class ProtocolError : public std::runtime_error
{
public:
  enum class Kind { MalformedFrame, SchemaViolation };

  ProtocolError(Kind kind, const std::string & what)
  : std::runtime_error(what), kind_(kind) {}

  Kind kind() const {return kind_;}
  /// "malformed_frame" or "schema_violation".
  const char * code() const;

private:
  Kind kind_;
};

/// Compact single-line JSON, no trailing newline.
std::string encode(const WireMessage & message);

/// Throws ProtocolError.
WireMessage decode(std::string_view frame);

std::uint8_t to_wire(CellState state);
CellState from_wire(std::uint8_t byte);

MapState make_map_state(const ZoneRegistry & registry);
OccupancyGrid to_grid(const MapState & state);

struct ApplyResult
{
  bool applied{false};
  /// Messages for every connected client.
  std::vector<WireMessage> broadcast;
  /// Message for the sender only.
  std::optional<ErrorReply> reply;
};

/// Applies an edit. AddZone adds, RemoveZone deletes (or clears for id 0).
/// Success yields a MapState broadcast; a rejected edit yields an error
/// reply and leaves the registry untouched.
ApplyResult apply_message(ZoneRegistry & registry, const WireMessage & message);

}  // namespace keepout::protocol

#endif  // KEEPOUT_PROTOCOL_HPP_
