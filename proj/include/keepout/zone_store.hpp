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

#ifndef KEEPOUT_ZONE_STORE_HPP_
#define KEEPOUT_ZONE_STORE_HPP_

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "keepout/zone_registry.hpp"

namespace keepout
{

/// Malformed zone document (bad JSON, bad schema, duplicate or invalid ids).
class StoreError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// Document layout:
//
//   {
//     "zones": [
//       { "anchor": {"theta": 0.0, "x": 0.0, "y": 0.0},
//         "id": 1,
//         "rotation": 0.0,
//         "vertices": [[x, y], ...] }
//     ]
//   }
//
// Keys are written in sorted order and zones in ascending id, so equal
// registries always serialize to identical bytes.

std::string save_store(const ZoneTable & zones);
std::string save_store(const ZoneRegistry & registry);

/// Parses a document into a zone table. `anchor` and `rotation` are
/// optional on input.
ZoneTable parse_store(std::string_view document);

/// Parses the document and recomposes it over `base`.
ZoneRegistry load_store(std::string_view document, OccupancyGrid base);

/// File-backed store. Every save replaces the whole file atomically.
class ZoneStore
{
public:
  explicit ZoneStore(std::filesystem::path path)
  : path_(std::move(path)) {}

  const std::filesystem::path & path() const {return path_;}

  /// std::nullopt when the file does not exist; throws StoreError when it
  /// exists but cannot be parsed.
  std::optional<ZoneRegistry> load(const OccupancyGrid & base) const;

  void save(const ZoneRegistry & registry) const;

private:
  std::filesystem::path path_;
};

}  // namespace keepout

#endif  // KEEPOUT_ZONE_STORE_HPP_
