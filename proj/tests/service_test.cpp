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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "keepout/map_io.hpp"
#include "keepout/scenarios.hpp"
#include "keepout/zone_store.hpp"
#include "support/client.hpp"

namespace keepout
{
namespace
{

using protocol::AddZone;
using protocol::ErrorReply;
using protocol::MapState;
using protocol::RemoveZone;
using protocol::RobotState;
using testing::LineClient;
using testing::RunningService;

const std::vector<Point2> kBox{{2.0, 0.5}, {2.5, 0.5}, {2.5, 1.0}, {2.0, 1.0}};
const std::vector<Point2> kTriangle{{4.0, 3.0}, {4.5, 3.0}, {4.2, 3.6}};

class ServiceTest : public ::testing::Test
{
protected:
  void SetUp() override
  {
    dir_ = std::filesystem::temp_directory_path() /
      ("keepout_service_test_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    std::filesystem::remove_all(dir_);
    std::filesystem::create_directories(dir_);
  }

  void TearDown() override {std::filesystem::remove_all(dir_);}

  ServiceConfig config() const
  {
    ServiceConfig c;
    c.port = 0;
    c.store = dir_ / "zones.json";
    c.scenario = "stage1";
    c.verbose = false;
    return c;
  }

  std::filesystem::path dir_;
};

OccupancyGrid stage1_base()
{
  return builtin_scenario("stage1")->base;
}

MapState without_revision(MapState m)
{
  m.revision = 0;
  return m;
}

// The stored document and the broadcast agree on ids and vertices.
void expect_store_matches(const std::filesystem::path & store, const MapState & map)
{
  const ZoneTable stored = parse_store(read_file(store));
  ASSERT_EQ(stored.size(), map.zones.size());
  std::size_t i = 0;
  for (const auto & [id, zone] : stored) {
    EXPECT_EQ(id, map.zones[i].id);
    EXPECT_EQ(zone.polygon.vertices(), map.zones[i].vertices);
    ++i;
  }
}

TEST_F(ServiceTest, HealthEndpoint) {
  RunningService svc(config());
  EXPECT_EQ(testing::http_get(svc.port(), "/healthz"), (std::pair<int, std::string>{200, "ok\n"}));
  EXPECT_EQ(testing::http_get(svc.port(), "/nope").first, 404);
}

TEST_F(ServiceTest, SnapshotOnConnect) {
  RunningService svc(config());
  LineClient client(svc.port());
  const MapState map = client.read_next<MapState>();
  EXPECT_EQ(protocol::to_grid(map), stage1_base());
  EXPECT_TRUE(map.zones.empty());
  const RobotState robot = client.read_next<RobotState>();
  // The robot starts driving as soon as the service runs.
  EXPECT_GE(robot.pose.x, 0.5 - 1e-9);
  EXPECT_NE(robot.status, protocol::RobotStatus::NoPath);
}

TEST_F(ServiceTest, AddBroadcastsAndPersists) {
  RunningService svc(config());
  LineClient a(svc.port());
  LineClient b(svc.port());
  a.read_next<MapState>();
  b.read_next<MapState>();

  a.send_line(protocol::encode(AddZone{1, kBox}));
  for (LineClient * c : {&a, &b}) {
    const MapState map = c->read_next<MapState>();
    ZoneRegistry expected(stage1_base());
    expected.add_zone(1, kBox);
    EXPECT_EQ(protocol::to_grid(map), expected.composite());
    expect_store_matches(dir_ / "zones.json", map);
  }
}

TEST_F(ServiceTest, ErrorsGoOnlyToSender) {
  RunningService svc(config());
  LineClient a(svc.port());
  LineClient b(svc.port());
  a.read_next<MapState>();
  b.read_next<MapState>();

  a.send_line(protocol::encode(RemoveZone{9}));
  EXPECT_EQ(a.read_next<ErrorReply>().code, "unknown_id");
  a.send_line(R"({"type":"add","id":1,"vertices":[[0,0],[1,0]]})");
  EXPECT_EQ(a.read_next<ErrorReply>().code, "schema_violation");
  a.send_line("not json");
  EXPECT_EQ(a.read_next<ErrorReply>().code, "malformed_frame");

  a.send_line(protocol::encode(AddZone{1, kBox}));
  // b's next non-robot frame is the map produced by the valid add.
  const protocol::WireMessage next = b.read_reply();
  ASSERT_TRUE(std::holds_alternative<MapState>(next));
  EXPECT_EQ(std::get<MapState>(next).zones.size(), 1u);
}

TEST_F(ServiceTest, ClearResetsEveryClient) {
  RunningService svc(config());
  LineClient a(svc.port());
  LineClient b(svc.port());
  a.read_next<MapState>();
  b.read_next<MapState>();
  a.send_line(protocol::encode(AddZone{1, kBox}));
  a.read_next<MapState>();
  b.read_next<MapState>();
  b.send_line(protocol::encode(RemoveZone{0}));
  for (LineClient * c : {&a, &b}) {
    const MapState map = c->read_next<MapState>();
    EXPECT_EQ(protocol::to_grid(map), stage1_base());
    EXPECT_TRUE(map.zones.empty());
  }
  EXPECT_TRUE(parse_store(read_file(dir_ / "zones.json")).empty());
}

TEST_F(ServiceTest, RestartRestoresZones) {
  MapState before;
  {
    RunningService svc(config());
    LineClient client(svc.port());
    client.read_next<MapState>();
    client.send_line(protocol::encode(AddZone{1, kBox}));
    client.read_next<MapState>();
    client.send_line(protocol::encode(AddZone{2, kTriangle}));
    before = client.read_next<MapState>();
  }
  RunningService svc(config());
  LineClient client(svc.port());
  const MapState after = client.read_next<MapState>();
  EXPECT_EQ(without_revision(after), without_revision(before));
  ZoneTable zones;
  zones.emplace(1, Zone{1, Polygon(kBox), 0.0, {}});
  zones.emplace(2, Zone{2, Polygon(kTriangle), 0.0, {}});
  EXPECT_EQ(protocol::to_grid(after), recompose(stage1_base(), zones));
}

TEST_F(ServiceTest, RefusesCorruptStore) {
  std::ofstream(dir_ / "zones.json") << R"({"zones":[{"id":0}]})";
  EXPECT_THROW(Service{config()}, StoreError);
  EXPECT_EQ(read_file(dir_ / "zones.json"), R"({"zones":[{"id":0}]})");
}

TEST_F(ServiceTest, RejectsBadConfig) {
  ServiceConfig c = config();
  c.speed = 0.0;
  EXPECT_THROW(Service{c}, ServiceError);
  c = config();
  c.tick_hz = -1.0;
  EXPECT_THROW(Service{c}, ServiceError);
  c = config();
  c.scenario = (dir_ / "missing.scenario").string();
  EXPECT_THROW(Service{c}, FileError);
}

TEST_F(ServiceTest, BindFailure) {
  RunningService first(config());
  ServiceConfig c = config();
  c.port = first.port();
  c.store.clear();
  // Another listener already owns the port.
  EXPECT_THROW(Service{c}, ServiceError);
}

TEST_F(ServiceTest, WebSocketClient) {
  RunningService svc(config());
  testing::WebSocketClient ws(svc.port());
  auto next_map = [&ws] {
      for (;; ) {
        const protocol::WireMessage m = protocol::decode(ws.read());
        if (const auto * map = std::get_if<MapState>(&m)) {
          return *map;
        }
      }
    };
  EXPECT_TRUE(next_map().zones.empty());
  ws.send(protocol::encode(AddZone{4, kTriangle}));
  const MapState map = next_map();
  ASSERT_EQ(map.zones.size(), 1u);
  EXPECT_EQ(map.zones[0].id, 4);
}

TEST_F(ServiceTest, RobotReachesGoal) {
  ServiceConfig c = config();
  c.speed = 20.0;
  c.tick_hz = 50.0;
  RunningService svc(c);
  LineClient client(svc.port());
  client.read_next<MapState>();
  RobotState robot = client.read_next<RobotState>();
  for (int i = 0; i < 500 && robot.status != protocol::RobotStatus::Arrived; ++i) {
    robot = client.read_next<RobotState>();
  }
  EXPECT_EQ(robot.status, protocol::RobotStatus::Arrived);
  EXPECT_NEAR(robot.pose.x, 5.5, 1e-9);
  EXPECT_NEAR(robot.pose.y, 2.0, 1e-9);
}

TEST_F(ServiceTest, EditReplansRoute) {
  RunningService svc(config());
  LineClient client(svc.port());
  client.read_next<MapState>();
  const RobotState initial = client.read_next<RobotState>();
  // A wall across the whole room, from floor to ceiling.
  client.send_line(protocol::encode(AddZone{1, {{3.0, -0.5}, {3.1, -0.5}, {3.1, 4.5}, {3.0, 4.5}}}));
  client.read_next<MapState>();
  const RobotState blocked = client.read_next<RobotState>();
  EXPECT_EQ(blocked.status, protocol::RobotStatus::NoPath);
  EXPECT_TRUE(blocked.path.empty());
  client.send_line(protocol::encode(RemoveZone{1}));
  client.read_next<MapState>();
  const RobotState open = client.read_next<RobotState>();
  EXPECT_NE(open.status, protocol::RobotStatus::NoPath);
  EXPECT_GT(initial.path_length, 0.0);
}

TEST_F(ServiceTest, SnapshotsAreStable) {
  ServiceConfig c = config();
  Service svc(c);
  EXPECT_EQ(svc.snapshot(), svc.snapshot());
  const std::vector<std::string> frames = svc.snapshot();
  ASSERT_EQ(frames.size(), 2u);
  EXPECT_TRUE(std::holds_alternative<MapState>(protocol::decode(frames[0])));
  EXPECT_TRUE(std::holds_alternative<RobotState>(protocol::decode(frames[1])));
}

TEST(ListenSpecTest, Parses) {
  ServiceConfig c;
  parse_listen("9000", c);
  EXPECT_EQ(c.address, "127.0.0.1");
  EXPECT_EQ(c.port, 9000);
  parse_listen("0.0.0.0:81", c);
  EXPECT_EQ(c.address, "0.0.0.0");
  EXPECT_EQ(c.port, 81);
  EXPECT_THROW(parse_listen("host:", c), ServiceError);
  EXPECT_THROW(parse_listen("70000", c), ServiceError);
  EXPECT_THROW(parse_listen(":80", c), ServiceError);
}

}  // namespace
}  // namespace keepout
