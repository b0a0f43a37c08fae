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

#include "keepout/nav_sim.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <sstream>

#include "keepout/map_io.hpp"

namespace keepout
{

namespace
{

GridIndex cell_of(const OccupancyGrid & grid, const Pose2D & pose, const char * what)
{
  const auto idx = world_to_grid(grid, pose.position());
  if (!idx) {
    throw GridError(std::string(what) + " pose lies outside the map");
  }
  return *idx;
}

Pose2D parse_pose(const YAML::Node & node, const char * key)
{
  const YAML::Node v = node[key];
  if (!v || !v.IsSequence() || v.size() != 3) {
    throw MapFormatError(std::string("scenario key '") + key + "' must be [x, y, theta]");
  }
  try {
    return Pose2D(v[0].as<double>(), v[1].as<double>(), v[2].as<double>());
  } catch (const YAML::Exception &) {
    throw MapFormatError(std::string("scenario key '") + key + "' must hold numbers");
  }
}

std::string require_string(const YAML::Node & node, const char * key)
{
  const YAML::Node v = node[key];
  if (!v || !v.IsScalar()) {
    throw MapFormatError(std::string("missing scenario key '") + key + "'");
  }
  return v.as<std::string>();
}

std::string format_pose(const Pose2D & p)
{
  return "[" + format_double(p.x) + ", " + format_double(p.y) + ", " + format_double(p.theta) + "]";
}

}  // namespace

void Scenario::validate() const
{
  if (!base.same_frame(ground_truth)) {
    throw GridError("scenario maps differ in size, resolution or origin");
  }
  const PlanConfig strict;
  if (!traversable(ground_truth, start_cell(), strict)) {
    throw GridError("scenario start is not traversable");
  }
  if (!traversable(ground_truth, goal_cell(), strict)) {
    throw GridError("scenario goal is not traversable");
  }
}

GridIndex Scenario::start_cell() const
{
  return cell_of(ground_truth, start, "start");
}

GridIndex Scenario::goal_cell() const
{
  return cell_of(ground_truth, goal, "goal");
}

const char * to_string(TrialResult result)
{
  switch (result) {
    case TrialResult::Success: return "success";
    case TrialResult::CollisionFailure: return "collision";
    case TrialResult::NoPathFailure: return "no_path";
  }
  return "invalid";
}

TrialOutcome run_trial(const Scenario & scenario, const OccupancyGrid & drawn, const PlanConfig & config)
{
  if (!drawn.same_frame(scenario.ground_truth)) {
    throw GridError("drawn map differs from the scenario maps in size, resolution or origin");
  }
  TrialOutcome outcome;
  const PlanResult planned = plan(drawn, scenario.start_cell(), scenario.goal_cell(), config);
  outcome.plan_status = planned.status;
  if (!planned.ok()) {
    outcome.result = TrialResult::NoPathFailure;
    return outcome;
  }
  outcome.path = planned.path;
  outcome.length_m = path_length(outcome.path, drawn.resolution());
  for (const GridIndex & cell : outcome.path.cells) {
    if (scenario.ground_truth.at(cell) == CellState::Occupied) {
      outcome.collision_cells.push_back(cell);
    }
  }
  outcome.result = outcome.collision_cells.empty() ?
    TrialResult::Success : TrialResult::CollisionFailure;
  return outcome;
}

double polyline_length(std::span<const Point2> path)
{
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    total += std::hypot(path[i].x - path[i - 1].x, path[i].y - path[i - 1].y);
  }
  return total;
}

RobotMotion step_robot(const RobotMotion & state, std::span<const Point2> path, double dt, double speed)
{
  if (path.size() < 2) {
    return state;
  }
  const double total = polyline_length(path);
  if (state.travelled >= total) {
    return state;
  }

  RobotMotion next = state;
  next.travelled = std::min(total, state.travelled + speed * dt);

  double covered = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const Point2 & a = path[i - 1];
    const Point2 & b = path[i];
    const double seg = std::hypot(b.x - a.x, b.y - a.y);
    if (seg == 0.0) {
      continue;
    }
    const bool last = i + 1 == path.size();
    if (next.travelled <= covered + seg || last) {
      const double t = std::min(1.0, (next.travelled - covered) / seg);
      next.pose = Pose2D(a.x + t * (b.x - a.x), a.y + t * (b.y - a.y), std::atan2(b.y - a.y, b.x - a.x));
      return next;
    }
    covered += seg;
  }
  return next;
}

Scenario load_scenario(const std::filesystem::path & manifest)
{
  YAML::Node root;
  try {
    root = YAML::Load(read_file(manifest));
  } catch (const YAML::Exception & e) {
    throw MapFormatError(std::string("unparseable scenario manifest: ") + e.what());
  }
  if (!root.IsMap()) {
    throw MapFormatError("scenario manifest must be a list of 'key: value' lines");
  }
  const std::filesystem::path dir = manifest.parent_path();
  auto resolve = [&dir](const std::string & p) {
      const std::filesystem::path path(p);
      return path.is_relative() ? dir / path : path;
    };

  Scenario scenario{
    require_string(root, "name"),
    load_map_file(resolve(require_string(root, "base"))),
    load_map_file(resolve(require_string(root, "ground_truth"))),
    parse_pose(root, "start"),
    parse_pose(root, "goal"),
  };
  scenario.validate();
  return scenario;
}

std::filesystem::path save_scenario(const Scenario & scenario, const std::filesystem::path & directory)
{
  std::filesystem::create_directories(directory);
  const std::string base_name = scenario.name + "_base.meta";
  const std::string truth_name = scenario.name + "_truth.meta";
  save_map_file(scenario.base, directory / base_name);
  save_map_file(scenario.ground_truth, directory / truth_name);

  std::ostringstream out;
  out << "name: " << scenario.name << '\n'
      << "base: " << base_name << '\n'
      << "ground_truth: " << truth_name << '\n'
      << "start: " << format_pose(scenario.start) << '\n'
      << "goal: " << format_pose(scenario.goal) << '\n';
  const std::filesystem::path manifest = directory / (scenario.name + ".scenario");
  write_file_atomic(manifest, out.str());
  return manifest;
}

}  // namespace keepout
