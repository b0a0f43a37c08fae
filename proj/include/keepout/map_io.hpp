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

#ifndef KEEPOUT_MAP_IO_HPP_
#define KEEPOUT_MAP_IO_HPP_

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "keepout/grid.hpp"

namespace keepout
{

/// Malformed image or metadata.
class MapFormatError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Unreadable or unwritable file.
class FileError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kDefaultOccupiedThresh = 0.65;
inline constexpr double kDefaultFreeThresh = 0.196;

// Pixel values written for each state; they classify back to the same state
// under the default thresholds.
inline constexpr unsigned char kOccupiedPixel = 0;
inline constexpr unsigned char kFreePixel = 254;
inline constexpr unsigned char kUnknownPixel = 205;

/// Contents of a `<name>.meta` file. Lines are `key: value`; `origin` is
/// `[x, y, theta]`.
struct MapMetadata
{
  std::string image;
  double resolution{0.05};
  Pose2D origin;
  bool negate{false};
  double occupied_thresh{kDefaultOccupiedThresh};
  double free_thresh{kDefaultFreeThresh};
};

/// Requires `resolution` and `origin`; the remaining keys fall back to the
/// defaults above.
MapMetadata parse_map_metadata(std::string_view text);
std::string format_map_metadata(const MapMetadata & meta);

/// Decodes a binary P5 graymap. Image row 0 becomes the top grid row.
OccupancyGrid load_map(std::string_view image_bytes, std::string_view metadata_text);
OccupancyGrid load_map(std::string_view image_bytes, const MapMetadata & meta);

struct EncodedMap
{
  std::string image;
  std::string metadata;
};

EncodedMap save_map(const OccupancyGrid & grid, const std::string & image_name);

/// Loads `<name>.meta` and the image it names (relative to the metadata
/// file; `<name>.pgm` when the key is absent).
OccupancyGrid load_map_file(const std::filesystem::path & meta_path);

/// Writes `<name>.meta` and `<name>.pgm` side by side.
void save_map_file(const OccupancyGrid & grid, const std::filesystem::path & meta_path);

std::string read_file(const std::filesystem::path & path);

/// Replaces `path` through a sibling temp file and rename, so readers see
/// either the old or the new contents.
void write_file_atomic(const std::filesystem::path & path, std::string_view contents);

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

}  // namespace keepout

#endif  // KEEPOUT_MAP_IO_HPP_
