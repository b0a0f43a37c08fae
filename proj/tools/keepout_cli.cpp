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

// keepout: batch tools and the zone editing service.
//
// Exit codes:
//   0  success (including plans and trials that report a failure outcome)
//   1  bad command line
//   2  malformed input document or map
//   3  maps that do not share a frame
//   4  file I/O failure
//   5  service failure

#include <CLI11.hpp>
#include <json.hpp>
#include <pthread.h>

#include <csignal>
#include <iostream>
#include <thread>

#include "keepout/map_io.hpp"
#include "keepout/metrics.hpp"
#include "keepout/nav_sim.hpp"
#include "keepout/planner.hpp"
#include "keepout/scenarios.hpp"
#include "keepout/service.hpp"
#include "keepout/zone_store.hpp"

namespace
{

using namespace keepout;
using json = nlohmann::ordered_json;

enum ExitCode
{
  kOk = 0,
  kUsage = 1,
  kFormat = 2,
  kMismatch = 3,
  kIo = 4,
  kService = 5,
};

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

json ratio_json(const Ratio & r)
{
  const auto v = r.value();
  return v ? json(*v) : json(nullptr);
}

Point2 parse_point(const std::string & text, const char * what)
{
  const auto comma = text.find(',');
  try {
    if (comma == std::string::npos) {
      throw std::invalid_argument("no comma");
    }
    std::size_t used = 0;
    const double x = std::stod(text.substr(0, comma), &used);
    if (used != comma) {
      throw std::invalid_argument("trailing text");
    }
    const std::string rest = text.substr(comma + 1);
    const double y = std::stod(rest, &used);
    if (used != rest.size()) {
      throw std::invalid_argument("trailing text");
    }
    return {x, y};
  } catch (const std::logic_error &) {
    throw UsageError(std::string(what) + " must be X,Y in meters, got \"" + text + "\"");
  }
}

GridIndex cell_at(const OccupancyGrid & grid, Point2 p, const char * what)
{
  const auto cell = world_to_grid(grid, p);
  if (!cell) {
    throw UsageError(std::string(what) + " (" + format_double(p.x) + ", " + format_double(p.y) +
            ") is outside the map");
  }
  return *cell;
}

void dump_path(const std::string & file, const std::vector<GridIndex> & cells)
{
  std::string text;
  for (const GridIndex & c : cells) {
    text += std::to_string(c.col) + " " + std::to_string(c.row) + "\n";
  }
  write_file_atomic(file, text);
}

struct ApplyArgs
{
  std::string map;
  std::string zones;
  std::string out;
  bool json{false};
};

int cmd_apply(const ApplyArgs & args)
{
  const OccupancyGrid base = load_map_file(args.map);
  const ZoneTable zones = parse_store(read_file(args.zones));
  ZoneRegistry registry(base);
  json report = {{"schema", 1}, {"output", args.out}, {"zones", json::array()}};
  std::string text;
  for (const auto & [id, zone] : zones) {
    const AddOutcome added = registry.add_zone(zone);
    report["zones"].push_back(
      {{"id", id}, {"cells", added.footprint_cells}, {"clipped", added.clipped}});
    text += "zone " + std::to_string(id) + ": " + std::to_string(added.footprint_cells) + " cells" +
      (added.clipped ? " (clipped)" : "") + "\n";
  }
  save_map_file(registry.composite(), args.out);
  std::cout << (args.json ? report.dump() + "\n" : text);
  return kOk;
}

struct MetricsArgs
{
  std::string truth;
  std::string drawn;
  std::string base;
  bool json{false};
};

int cmd_metrics(const MetricsArgs & args)
{
  const OccupancyGrid truth = load_map_file(args.truth);
  const OccupancyGrid drawn = load_map_file(args.drawn);
  CellMask walls = CellMask::empty_for(truth);
  if (!args.base.empty()) {
    const OccupancyGrid base = load_map_file(args.base);
    if (!base.same_frame(truth)) {
      throw GridError("base map does not share the ground truth's frame");
    }
    walls = wall_mask_from_base(base);
  }
  const ConfusionCounts c = classify_cells(truth, drawn, walls);
  const MetricReport m = compute_metrics(c);
  if (args.json) {
    const json report = {
      {"schema", 1},
      {"counts", {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn},
        {"excluded_wall_cells", c.excluded_wall_cells}}},
      {"metrics", {{"accuracy", ratio_json(m.accuracy)}, {"precision", ratio_json(m.precision)},
        {"recall", ratio_json(m.recall)}, {"specificity", ratio_json(m.specificity)},
        {"f1", ratio_json(m.f1)}}},
    };
    std::cout << report.dump() << "\n";
    return kOk;
  }
  std::cout << "tp: " << c.tp << "\n"
            << "fp: " << c.fp << "\n"
            << "fn: " << c.fn << "\n"
            << "tn: " << c.tn << "\n"
            << "excluded_wall_cells: " << c.excluded_wall_cells << "\n"
            << "accuracy: " << format_ratio(m.accuracy) << "\n"
            << "precision: " << format_ratio(m.precision) << "\n"
            << "recall: " << format_ratio(m.recall) << "\n"
            << "specificity: " << format_ratio(m.specificity) << "\n"
            << "f1: " << format_ratio(m.f1) << "\n";
  return kOk;
}

struct PlanArgs
{
  std::string map;
  std::string start;
  std::string goal;
  bool allow_unknown{false};
  std::string dump_path;
  bool json{false};
};

int cmd_plan(const PlanArgs & args)
{
  const OccupancyGrid grid = load_map_file(args.map);
  const GridIndex start = cell_at(grid, parse_point(args.start, "--start"), "start");
  const GridIndex goal = cell_at(grid, parse_point(args.goal, "--goal"), "goal");
  PlanConfig config;
  config.unknown_is_blocked = !args.allow_unknown;
  const PlanResult result = plan(grid, start, goal, config);
  const double length = result.ok() ? path_length(result.path, grid.resolution()) : 0.0;
  if (!args.dump_path.empty()) {
    dump_path(args.dump_path, result.path.cells);
  }
  if (args.json) {
    json report = {{"schema", 1}, {"status", to_string(result.status)},
      {"cells", result.path.cells.size()}, {"length_m", nullptr}};
    if (result.ok()) {
      report["length_m"] = length;
    }
    std::cout << report.dump() << "\n";
    return kOk;
  }
  std::cout << "status: " << to_string(result.status) << "\n";
  if (result.ok()) {
    std::cout << "cells: " << result.path.cells.size() << "\n"
              << "length_m: " << format_double(length) << "\n";
  }
  return kOk;
}

struct TrialArgs
{
  std::string scenario;
  std::string zones;
  std::string reference;
  std::string dump_path;
  bool json{false};
};

int cmd_trial(const TrialArgs & args)
{
  const Scenario scenario = resolve_scenario(args.scenario);
  ZoneTable zones;
  if (!args.zones.empty()) {
    zones = parse_store(read_file(args.zones));
  } else if (args.reference == "accurate") {
    zones = reference_zones(scenario.name, ZoneFit::Accurate);
  } else if (args.reference == "oversized") {
    zones = reference_zones(scenario.name, ZoneFit::Oversized);
  }
  ZoneRegistry registry(scenario.base);
  for (const auto & [id, zone] : zones) {
    registry.add_zone(zone);
  }
  const TrialOutcome out = run_trial(scenario, registry.composite());
  if (!args.dump_path.empty()) {
    dump_path(args.dump_path, out.path.cells);
  }
  if (args.json) {
    json collisions = json::array();
    for (const GridIndex & c : out.collision_cells) {
      collisions.push_back(json::array({c.col, c.row}));
    }
    json report = {{"schema", 1}, {"scenario", scenario.name}, {"zones", zones.size()},
      {"result", to_string(out.result)}, {"plan_status", to_string(out.plan_status)},
      {"length_m", nullptr}, {"collision_cells", std::move(collisions)}};
    if (out.plan_status == PlanStatus::Ok) {
      report["length_m"] = out.length_m;
    }
    std::cout << report.dump() << "\n";
    return kOk;
  }
  std::cout << "scenario: " << scenario.name << "\n"
            << "zones: " << zones.size() << "\n"
            << "result: " << to_string(out.result) << "\n"
            << "plan_status: " << to_string(out.plan_status) << "\n";
  if (out.plan_status == PlanStatus::Ok) {
    std::cout << "length_m: " << format_double(out.length_m) << "\n";
  }
  std::cout << "collision_cells: " << out.collision_cells.size() << "\n";
  return kOk;
}

struct ServeArgs
{
  std::string listen{"127.0.0.1:8765"};
  std::string store;
  std::string scenario{"stage1"};
  double speed{0.5};
  double tick_hz{20.0};
};

int cmd_serve(const ServeArgs & args)
{
  ServiceConfig config;
  config.store = args.store;
  config.scenario = args.scenario;
  config.speed = args.speed;
  config.tick_hz = args.tick_hz;
  parse_listen(args.listen, config);

  // Signals are taken synchronously on this thread; the service runs on
  // its own.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  Service service(config);
  std::cout << "listening on " << config.address << ":" << service.port() << std::endl;
  std::thread runner([&service] {service.run();});
  int received = 0;
  sigwait(&signals, &received);
  service.stop();
  runner.join();
  return kOk;
}

template<typename F>
int guarded(F && f)
{
  try {
    return f();
  } catch (const UsageError & e) {
    std::cerr << "keepout: " << e.what() << "\n";
    return kUsage;
  } catch (const FileError & e) {
    std::cerr << "keepout: " << e.what() << "\n";
    return kIo;
  } catch (const GridError & e) {
    std::cerr << "keepout: " << e.what() << "\n";
    return kMismatch;
  } catch (const MapFormatError & e) {
    std::cerr << "keepout: " << e.what() << "\n";
    return kFormat;
  } catch (const StoreError & e) {
    std::cerr << "keepout: " << e.what() << "\n";
    return kFormat;
  } catch (const RegistryError & e) {
    std::cerr << "keepout: " << e.what() << "\n";
    return kFormat;
  } catch (const ServiceError & e) {
    std::cerr << "keepout: " << e.what() << "\n";
    return kService;
  }
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"Restricted-zone map editing tools"};
  app.require_subcommand(1);

  ApplyArgs apply_args;
  auto * apply = app.add_subcommand("apply", "Rasterize a zone document onto a map");
  apply->add_option("--map", apply_args.map, "Input map metadata (.meta)")->required();
  apply->add_option("--zones", apply_args.zones, "Zone document (JSON)")->required();
  apply->add_option("--out", apply_args.out, "Output map metadata path")->required();
  apply->add_flag("--json", apply_args.json, "Machine-readable report");

  MetricsArgs metrics_args;
  auto * metrics = app.add_subcommand("metrics", "Compare a drawn map with the ground truth");
  metrics->add_option("--truth", metrics_args.truth, "Ground-truth map")->required();
  metrics->add_option("--drawn", metrics_args.drawn, "Drawn (composite) map")->required();
  metrics->add_option("--base", metrics_args.base, "Empty-room map; its occupied cells are walls");
  metrics->add_flag("--json", metrics_args.json, "Machine-readable report");

  PlanArgs plan_args;
  auto * plan_cmd = app.add_subcommand("plan", "Plan a path on a map");
  plan_cmd->add_option("--map", plan_args.map, "Map metadata")->required();
  plan_cmd->add_option("--start", plan_args.start, "Start X,Y in meters")->required();
  plan_cmd->add_option("--goal", plan_args.goal, "Goal X,Y in meters")->required();
  plan_cmd->add_flag("--allow-unknown", plan_args.allow_unknown, "Drive through unknown cells");
  plan_cmd->add_option("--dump-path", plan_args.dump_path, "Write path cells, one 'col row' per line");
  plan_cmd->add_flag("--json", plan_args.json, "Machine-readable report");

  TrialArgs trial_args;
  auto * trial = app.add_subcommand("trial", "Run a navigation trial");
  trial->add_option("--scenario", trial_args.scenario, "Built-in name or manifest path")->required();
  auto * zones_opt = trial->add_option("--zones", trial_args.zones, "Zone document (JSON)");
  trial->add_option("--reference", trial_args.reference, "Built-in reference zones")
  ->check(CLI::IsMember({"accurate", "oversized"}))
  ->excludes(zones_opt);
  trial->add_option("--dump-path", trial_args.dump_path, "Write path cells, one 'col row' per line");
  trial->add_flag("--json", trial_args.json, "Machine-readable report");

  ServeArgs serve_args;
  auto * serve = app.add_subcommand("serve", "Run the zone editing service");
  serve->add_option("--listen", serve_args.listen, "HOST:PORT or PORT")->capture_default_str();
  serve->add_option("--store", serve_args.store, "Zone store file (omit to keep zones in memory)");
  serve->add_option("--scenario", serve_args.scenario, "Built-in name or manifest path")
  ->capture_default_str();
  serve->add_option("--speed", serve_args.speed, "Robot speed, m/s")->capture_default_str();
  serve->add_option("--tick-hz", serve_args.tick_hz, "Simulation tick rate")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (*apply) {
    return guarded([&] {return cmd_apply(apply_args);});
  }
  if (*metrics) {
    return guarded([&] {return cmd_metrics(metrics_args);});
  }
  if (*plan_cmd) {
    return guarded([&] {return cmd_plan(plan_args);});
  }
  if (*trial) {
    return guarded([&] {return cmd_trial(trial_args);});
  }
  return guarded(
    [&] {
      try {
        return cmd_serve(serve_args);
      } catch (const StoreError & e) {
        throw ServiceError(std::string("refusing to start: ") + e.what());
      } catch (const std::exception & e) {
        if (dynamic_cast<const ServiceError *>(&e)) {
          throw;
        }
        throw ServiceError(e.what());
      }
    });
}
