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

#ifndef KEEPOUT_SERVICE_HPP_
#define KEEPOUT_SERVICE_HPP_

#include <cstdint>
#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace keepout
{

namespace detail
{
class ServiceCore;
}  // namespace detail

class ServiceError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct ServiceConfig
{
  std::string address{"127.0.0.1"};
  /// 0 picks a free port; see Service::port().
  std::uint16_t port{8765};
  /// Zone store file. Empty keeps zones in memory only.
  std::filesystem::path store;
  /// Built-in scenario name or manifest path.
  std::string scenario{"stage1"};
  /// Robot speed, m/s.
  double speed{0.5};
  double tick_hz{20.0};
  bool verbose{true};

  /// Throws ServiceError.
  void validate() const;
};

/// Parses "HOST:PORT" or "PORT" into `config`. Throws ServiceError.
void parse_listen(const std::string & spec, ServiceConfig & config);

// Zone editing server. One TCP port carries three kinds of client,
// told apart by the first bytes they send:
//
//   '{' ...            newline-delimited protocol frames
//   GET /healthz       plain-text "ok"
//   GET /ws (upgrade)  web socket, one protocol frame per text message
//
// Every client gets the current map and robot state on connect. Accepted
// edits are saved to the store before the new state is broadcast; rejected
// ones are answered with an error frame to the sender only.
class Service
{
public:
  /// Loads the scenario and any stored zones, plans the robot's route and
  /// binds the listening socket. Throws ServiceError (bad config, bind
  /// failure), StoreError (corrupt store) or MapFormatError / FileError
  /// (unreadable scenario).
  explicit Service(ServiceConfig config);
  ~Service();

  Service(const Service &) = delete;
  Service & operator=(const Service &) = delete;

  /// Bound port, useful when the config asked for port 0.
  std::uint16_t port() const;

  /// Serves until stop(). Call from one thread only.
  void run();

  /// Thread-safe; makes run() return.
  void stop();

  /// Encoded map and robot frames describing the current state. Only call
  /// while run() is not executing.
  std::vector<std::string> snapshot() const;

private:
  std::unique_ptr<detail::ServiceCore> impl_;
};

}  // namespace keepout

#endif  // KEEPOUT_SERVICE_HPP_
