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

#include "keepout/service.hpp"

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <deque>
#include <iostream>
#include <optional>
#include <set>

#include "keepout/nav_sim.hpp"
#include "keepout/planner.hpp"
#include "keepout/protocol.hpp"
#include "keepout/scenarios.hpp"
#include "keepout/zone_store.hpp"

namespace keepout
{

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

namespace
{

constexpr std::size_t kMaxFrameBytes = 1 << 20;
constexpr std::size_t kMaxQueuedFrames = 256;
constexpr auto kHandshakeTimeout = std::chrono::seconds(10);
constexpr auto kSniffWindow = std::chrono::milliseconds(200);

using Frame = std::shared_ptr<const std::string>;

}  // namespace

void ServiceConfig::validate() const
{
  if (!(speed > 0.0) || !std::isfinite(speed)) {
    throw ServiceError("speed must be positive");
  }
  if (!(tick_hz > 0.0) || !std::isfinite(tick_hz)) {
    throw ServiceError("tick rate must be positive");
  }
  if (scenario.empty()) {
    throw ServiceError("no scenario given");
  }
}

void parse_listen(const std::string & spec, ServiceConfig & config)
{
  std::string host = config.address;
  std::string port = spec;
  if (const auto colon = spec.rfind(':'); colon != std::string::npos) {
    host = spec.substr(0, colon);
    port = spec.substr(colon + 1);
  }
  unsigned value = 0;
  const auto [end, ec] = std::from_chars(port.data(), port.data() + port.size(), value);
  if (port.empty() || ec != std::errc() || end != port.data() + port.size() || value > 65535 ||
    host.empty())
  {
    throw ServiceError("bad listen address \"" + spec + "\" (want HOST:PORT or PORT)");
  }
  config.address = host;
  config.port = static_cast<std::uint16_t>(value);
}

class Session : public std::enable_shared_from_this<Session>
{
public:
  virtual ~Session() = default;
  virtual void send(Frame frame) = 0;
  virtual void close() = 0;
};

namespace detail
{

class ServiceCore
{
public:
  explicit ServiceCore(ServiceConfig config);

  void run();
  void stop();
  std::vector<std::string> snapshot() const {return {map_frame(), robot_frame()};}
  std::uint16_t port() const {return bound_port_;}

  void join(const std::shared_ptr<Session> & session);
  void leave(const std::shared_ptr<Session> & session) {sessions_.erase(session);}
  void handle(Session & sender, std::string_view frame);

  asio::io_context & context() {return ioc_;}

private:
  void accept();
  void tick();
  void replan(const Pose2D & from);
  void broadcast(const std::string & frame);
  std::string map_frame() const;
  std::string robot_frame() const;
  void log(const std::string & line) const;

  ServiceConfig config_;
  asio::io_context ioc_;
  tcp::acceptor acceptor_;
  asio::steady_timer timer_;
  std::uint16_t bound_port_{0};

  Scenario scenario_;
  std::optional<ZoneStore> store_;
  ZoneRegistry registry_;

  RobotMotion motion_;
  std::vector<Point2> route_;
  protocol::RobotStatus status_{protocol::RobotStatus::NoPath};

  std::set<std::shared_ptr<Session>> sessions_;
};

}  // namespace detail

using detail::ServiceCore;

namespace
{

class LineSession : public Session
{
public:
  LineSession(ServiceCore & service, tcp::socket socket, std::string pending)
  : service_(service), socket_(std::move(socket)), in_(std::move(pending)) {}

  void start()
  {
    service_.join(shared_from_this());
    read();
  }

  void send(Frame frame) override
  {
    if (!socket_.is_open()) {
      return;
    }
    if (out_.size() >= kMaxQueuedFrames) {
      close();
      return;
    }
    out_.push_back(std::make_shared<const std::string>(*frame + "\n"));
    if (out_.size() == 1) {
      write();
    }
  }

  void close() override
  {
    beast::error_code ignored;
    socket_.shutdown(tcp::socket::shutdown_both, ignored);
    socket_.close(ignored);
  }

private:
  void read()
  {
    asio::async_read_until(
      socket_, asio::dynamic_buffer(in_, kMaxFrameBytes), '\n',
      [self = shared_from_this(), this](beast::error_code ec, std::size_t n) {
        if (ec) {
          close();
          service_.leave(self);
          return;
        }
        std::string line = in_.substr(0, n - 1);
        in_.erase(0, n);
        if (!line.empty() && line.back() == '\r') {
          line.pop_back();
        }
        if (line.find_first_not_of(" \t") != std::string::npos) {
          service_.handle(*this, line);
        }
        read();
      });
  }

  void write()
  {
    asio::async_write(
      socket_, asio::buffer(*out_.front()),
      [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
        if (ec) {
          close();
          service_.leave(self);
          return;
        }
        out_.pop_front();
        if (!out_.empty()) {
          write();
        }
      });
  }

  ServiceCore & service_;
  tcp::socket socket_;
  std::string in_;
  std::deque<Frame> out_;
};

class WebSocketSession : public Session
{
public:
  WebSocketSession(ServiceCore & service, beast::tcp_stream stream)
  : service_(service), ws_(std::move(stream)) {}

  void start(http::request<http::string_body> request)
  {
    request_ = std::move(request);
    beast::get_lowest_layer(ws_).expires_never();
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.read_message_max(kMaxFrameBytes);
    ws_.text(true);
    ws_.async_accept(
      request_, [self = shared_from_this(), this](beast::error_code ec) {
        if (ec) {
          return;
        }
        service_.join(self);
        read();
      });
  }

  void send(Frame frame) override
  {
    if (!ws_.is_open()) {
      return;
    }
    if (out_.size() >= kMaxQueuedFrames) {
      close();
      return;
    }
    out_.push_back(std::move(frame));
    if (out_.size() == 1) {
      write();
    }
  }

  void close() override
  {
    beast::error_code ignored;
    beast::get_lowest_layer(ws_).socket().shutdown(tcp::socket::shutdown_both, ignored);
    beast::get_lowest_layer(ws_).close();
  }

private:
  void read()
  {
    ws_.async_read(
      in_, [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
        if (ec) {
          service_.leave(self);
          return;
        }
        const std::string message = beast::buffers_to_string(in_.data());
        in_.consume(in_.size());
        service_.handle(*this, message);
        read();
      });
  }

  void write()
  {
    ws_.async_write(
      asio::buffer(*out_.front()),
      [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
        if (ec) {
          close();
          service_.leave(self);
          return;
        }
        out_.pop_front();
        if (!out_.empty()) {
          write();
        }
      });
  }

  ServiceCore & service_;
  websocket::stream<beast::tcp_stream> ws_;
  http::request<http::string_body> request_;
  beast::flat_buffer in_;
  std::deque<Frame> out_;
};

/// Reads the first bytes of a new connection and hands it to the matching
/// session type. HTTP clients speak first; a connection that stays silent
/// for kSniffWindow is a line client waiting for its snapshot.
class Detector : public std::enable_shared_from_this<Detector>
{
public:
  Detector(ServiceCore & service, tcp::socket socket)
  : service_(service), socket_(std::move(socket)), timer_(socket_.get_executor()) {}

  void start()
  {
    timer_.expires_after(kSniffWindow);
    timer_.async_wait(
      [self = shared_from_this(), this](beast::error_code ec) {
        if (!ec && !decided_) {
          beast::error_code ignored;
          socket_.cancel(ignored);
        }
      });
    socket_.async_read_some(
      asio::buffer(first_), [self = shared_from_this(), this](beast::error_code ec, std::size_t n) {
        decided_ = true;
        timer_.cancel();
        if (ec && ec != asio::error::operation_aborted) {
          return;
        }
        const std::string pending(first_.data(), ec ? 0 : n);
        if (pending.empty() || pending[0] == '{') {
          std::make_shared<LineSession>(service_, std::move(socket_), pending)->start();
          return;
        }
        std::make_shared<HttpRequest>(service_, std::move(socket_), pending)->start();
      });
  }

private:
  class HttpRequest : public std::enable_shared_from_this<HttpRequest>
  {
public:
    HttpRequest(ServiceCore & service, tcp::socket socket, const std::string & pending)
    : service_(service), stream_(std::move(socket))
    {
      const auto n = asio::buffer_copy(buffer_.prepare(pending.size()), asio::buffer(pending));
      buffer_.commit(n);
    }

    void start()
    {
      stream_.expires_after(kHandshakeTimeout);
      http::async_read(
        stream_, buffer_, request_, [self = shared_from_this(), this](beast::error_code ec, std::size_t) {
          if (ec) {
            return;
          }
          if (request_.target() == "/ws" && websocket::is_upgrade(request_)) {
            auto session = std::make_shared<WebSocketSession>(service_, std::move(stream_));
            session->start(std::move(request_));
            return;
          }
          respond();
        });
    }

private:
    void respond()
    {
      const bool health = request_.method() == http::verb::get && request_.target() == "/healthz";
      response_.version(request_.version());
      response_.result(health ? http::status::ok : http::status::not_found);
      response_.set(http::field::content_type, "text/plain");
      response_.keep_alive(false);
      response_.body() = health ? "ok\n" : "not found\n";
      response_.prepare_payload();
      http::async_write(
        stream_, response_, [self = shared_from_this(), this](beast::error_code, std::size_t) {
          beast::error_code ignored;
          stream_.socket().shutdown(tcp::socket::shutdown_send, ignored);
        });
    }

    ServiceCore & service_;
    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> request_;
    http::response<http::string_body> response_;
  };

  ServiceCore & service_;
  tcp::socket socket_;
  asio::steady_timer timer_;
  std::array<char, 512> first_{};
  bool decided_{false};
};

ZoneRegistry initial_registry(const Scenario & scenario, const std::optional<ZoneStore> & store)
{
  if (store) {
    if (auto loaded = store->load(scenario.base)) {
      return std::move(*loaded);
    }
  }
  return ZoneRegistry(scenario.base);
}

tcp::endpoint resolve(asio::io_context & ioc, const ServiceConfig & config)
{
  tcp::resolver resolver(ioc);
  beast::error_code ec;
  const auto results = resolver.resolve(config.address, std::to_string(config.port), ec);
  if (ec || results.empty()) {
    throw ServiceError("cannot resolve listen address " + config.address + ": " + ec.message());
  }
  return results.begin()->endpoint();
}

}  // namespace

namespace detail
{

ServiceCore::ServiceCore(ServiceConfig config)
: config_((config.validate(), std::move(config))),
  acceptor_(ioc_),
  timer_(ioc_),
  scenario_(resolve_scenario(config_.scenario)),
  store_(config_.store.empty() ? std::nullopt : std::optional<ZoneStore>(config_.store)),
  registry_(initial_registry(scenario_, store_))
{
  const tcp::endpoint endpoint = resolve(ioc_, config_);
  beast::error_code ec;
  acceptor_.open(endpoint.protocol(), ec);
  if (!ec) {
    acceptor_.set_option(asio::socket_base::reuse_address(true), ec);
  }
  if (!ec) {
    acceptor_.bind(endpoint, ec);
  }
  if (!ec) {
    acceptor_.listen(asio::socket_base::max_listen_connections, ec);
  }
  if (ec) {
    throw ServiceError(
            "cannot listen on " + config_.address + ":" + std::to_string(config_.port) + ": " +
            ec.message());
  }
  bound_port_ = acceptor_.local_endpoint().port();
  replan(scenario_.start);
  log("scenario " + scenario_.name + ", " + std::to_string(registry_.zones().size()) +
    " stored zone(s), listening on " + config_.address + ":" + std::to_string(bound_port_));
}

void ServiceCore::run()
{
  accept();
  tick();
  ioc_.run();
}

void ServiceCore::stop()
{
  asio::post(
    ioc_, [this] {
      beast::error_code ignored;
      acceptor_.close(ignored);
      timer_.cancel();
      for (const auto & session : sessions_) {
        session->close();
      }
      sessions_.clear();
      ioc_.stop();
    });
}

void ServiceCore::accept()
{
  acceptor_.async_accept(
    [this](beast::error_code ec, tcp::socket socket) {
      if (ec == asio::error::operation_aborted) {
        return;
      }
      if (!ec) {
        std::make_shared<Detector>(*this, std::move(socket))->start();
      }
      accept();
    });
}

void ServiceCore::tick()
{
  timer_.expires_after(std::chrono::duration_cast<asio::steady_timer::duration>(
      std::chrono::duration<double>(1.0 / config_.tick_hz)));
  timer_.async_wait(
    [this](beast::error_code ec) {
      if (ec) {
        return;
      }
      if (status_ == protocol::RobotStatus::Moving) {
        motion_ = step_robot(motion_, route_, 1.0 / config_.tick_hz, config_.speed);
        if (motion_.travelled >= polyline_length(route_)) {
          status_ = protocol::RobotStatus::Arrived;
        }
        broadcast(robot_frame());
      }
      tick();
    });
}

void ServiceCore::join(const std::shared_ptr<Session> & session)
{
  sessions_.insert(session);
  session->send(std::make_shared<const std::string>(map_frame()));
  session->send(std::make_shared<const std::string>(robot_frame()));
}

void ServiceCore::handle(Session & sender, std::string_view frame)
{
  protocol::WireMessage message;
  try {
    message = protocol::decode(frame);
  } catch (const protocol::ProtocolError & e) {
    sender.send(std::make_shared<const std::string>(
        protocol::encode(protocol::ErrorReply{e.code(), e.what()})));
    return;
  }

  ZoneRegistry previous = registry_;
  const protocol::ApplyResult result = protocol::apply_message(registry_, message);
  if (!result.applied) {
    sender.send(std::make_shared<const std::string>(protocol::encode(*result.reply)));
    return;
  }
  if (store_) {
    try {
      store_->save(registry_);
    } catch (const std::exception & e) {
      registry_ = std::move(previous);
      log(std::string("store write failed: ") + e.what());
      sender.send(std::make_shared<const std::string>(
          protocol::encode(protocol::ErrorReply{"store_failure", e.what()})));
      return;
    }
  }
  if (const auto * add = std::get_if<protocol::AddZone>(&message)) {
    if (footprint(registry_.base(), registry_.zones().at(add->id).polygon).clipped) {
      log("zone " + std::to_string(add->id) + " extends past the map and was clipped");
    }
  }

  replan(motion_.pose);
  for (const protocol::WireMessage & m : result.broadcast) {
    broadcast(protocol::encode(m));
  }
  broadcast(robot_frame());
}

void ServiceCore::replan(const Pose2D & from)
{
  motion_ = {from, 0.0};
  route_.clear();
  status_ = protocol::RobotStatus::NoPath;
  const OccupancyGrid & map = registry_.composite();
  const std::optional<GridIndex> cell = world_to_grid(map, {from.x, from.y});
  if (!cell) {
    return;
  }
  const PlanResult result = plan(map, *cell, scenario_.goal_cell());
  if (!result.ok()) {
    return;
  }
  const std::vector<Point2> centers = path_to_world(map, result.path.cells);
  route_.push_back({from.x, from.y});
  route_.insert(route_.end(), centers.begin() + (centers.size() > 1 ? 1 : 0), centers.end());
  status_ = polyline_length(route_) > 0.0 ? protocol::RobotStatus::Moving :
    protocol::RobotStatus::Arrived;
}

void ServiceCore::broadcast(const std::string & frame)
{
  const auto shared = std::make_shared<const std::string>(frame);
  // Sends may drop a slow client, which edits the set.
  const std::vector<std::shared_ptr<Session>> targets(sessions_.begin(), sessions_.end());
  for (const auto & session : targets) {
    session->send(shared);
  }
}

std::string ServiceCore::map_frame() const
{
  return protocol::encode(protocol::make_map_state(registry_));
}

std::string ServiceCore::robot_frame() const
{
  protocol::RobotState state;
  state.pose = motion_.pose;
  state.status = status_;
  if (!route_.empty()) {
    // Remaining route: current position, then every vertex not yet passed.
    state.path.push_back({motion_.pose.x, motion_.pose.y});
    double covered = 0.0;
    for (std::size_t i = 1; i < route_.size(); ++i) {
      covered += std::hypot(route_[i].x - route_[i - 1].x, route_[i].y - route_[i - 1].y);
      if (covered > motion_.travelled) {
        state.path.push_back(route_[i]);
      }
    }
    state.path_length = std::max(0.0, polyline_length(route_) - motion_.travelled);
  }
  return protocol::encode(state);
}

void ServiceCore::log(const std::string & line) const
{
  if (config_.verbose) {
    std::clog << "keepout: " << line << std::endl;
  }
}

}  // namespace detail

Service::Service(ServiceConfig config)
: impl_(std::make_unique<detail::ServiceCore>(std::move(config))) {}

Service::~Service() = default;

std::uint16_t Service::port() const
{
  return impl_->port();
}

void Service::run()
{
  impl_->run();
}

void Service::stop()
{
  impl_->stop();
}

std::vector<std::string> Service::snapshot() const
{
  return impl_->snapshot();
}

}  // namespace keepout
