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

#include "keepout/map_io.hpp"

#include <yaml-cpp/yaml.h>

#include <unistd.h>

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <system_error>

namespace keepout
{

namespace
{

class PgmReader
{
public:
  explicit PgmReader(std::string_view bytes)
  : bytes_(bytes) {}

  // Header tokens are separated by whitespace; '#' starts a comment that
  // runs to end of line.
  std::string_view token()
  {
    for (;; ) {
      while (pos_ < bytes_.size() && std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
        ++pos_;
      }
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
          ++pos_;
        }
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      ++pos_;
    }
    if (start == pos_) {
      throw MapFormatError("truncated graymap header");
    }
    return bytes_.substr(start, pos_ - start);
  }

  std::size_t number()
  {
    const std::string_view t = token();
    std::size_t value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc() || ptr != t.data() + t.size()) {
      throw MapFormatError("invalid graymap header field '" + std::string(t) + "'");
    }
    return value;
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::string_view raster()
  {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw MapFormatError("missing raster separator");
    }
    return bytes_.substr(pos_ + 1);
  }

private:
  std::string_view bytes_;
  std::size_t pos_{0};
};

double require_double(const YAML::Node & root, const char * key)
{
  const YAML::Node node = root[key];
  if (!node) {
    throw MapFormatError(std::string("missing metadata key '") + key + "'");
  }
  try {
    return node.as<double>();
  } catch (const YAML::Exception &) {
    throw MapFormatError(std::string("metadata key '") + key + "' is not a number");
  }
}

}  // namespace

std::string format_double(double value)
{
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) {
    throw std::runtime_error("cannot format number");
  }
  std::string out(buf.data(), ptr);
  if (std::isfinite(value) && out.find_first_of(".e") == std::string::npos) {
    out += ".0";
  }
  return out;
}

MapMetadata parse_map_metadata(std::string_view text)
{
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception & e) {
    throw MapFormatError(std::string("unparseable metadata: ") + e.what());
  }
  if (!root.IsMap()) {
    throw MapFormatError("metadata must be a list of 'key: value' lines");
  }

  MapMetadata meta;
  if (root["image"]) {
    meta.image = root["image"].as<std::string>();
  }
  meta.resolution = require_double(root, "resolution");
  if (!(meta.resolution > 0.0) || !std::isfinite(meta.resolution)) {
    throw MapFormatError("resolution must be positive");
  }

  const YAML::Node origin = root["origin"];
  if (!origin) {
    throw MapFormatError("missing metadata key 'origin'");
  }
  if (!origin.IsSequence() || origin.size() != 3) {
    throw MapFormatError("origin must be [x, y, theta]");
  }
  try {
    meta.origin = Pose2D(origin[0].as<double>(), origin[1].as<double>(), origin[2].as<double>());
  } catch (const YAML::Exception &) {
    throw MapFormatError("origin entries must be numbers");
  }

  if (root["negate"]) {
    try {
      meta.negate = root["negate"].as<int>() != 0;
    } catch (const YAML::Exception &) {
      throw MapFormatError("negate must be 0 or 1");
    }
  }
  if (root["occupied_thresh"]) {
    meta.occupied_thresh = require_double(root, "occupied_thresh");
  }
  if (root["free_thresh"]) {
    meta.free_thresh = require_double(root, "free_thresh");
  }
  auto in_unit = [](double v) {return v >= 0.0 && v <= 1.0;};
  if (!in_unit(meta.occupied_thresh) || !in_unit(meta.free_thresh)) {
    throw MapFormatError("thresholds must lie in [0, 1]");
  }
  if (meta.free_thresh >= meta.occupied_thresh) {
    throw MapFormatError("free_thresh must be below occupied_thresh");
  }
  return meta;
}

std::string format_map_metadata(const MapMetadata & meta)
{
  std::ostringstream out;
  out << "image: " << meta.image << '\n'
      << "resolution: " << format_double(meta.resolution) << '\n'
      << "origin: [" << format_double(meta.origin.x) << ", " << format_double(meta.origin.y)
      << ", " << format_double(meta.origin.theta) << "]\n"
      << "negate: " << (meta.negate ? 1 : 0) << '\n'
      << "occupied_thresh: " << format_double(meta.occupied_thresh) << '\n'
      << "free_thresh: " << format_double(meta.free_thresh) << '\n';
  return out.str();
}

OccupancyGrid load_map(std::string_view image_bytes, const MapMetadata & meta)
{
  PgmReader reader(image_bytes);
  if (reader.token() != "P5") {
    throw MapFormatError("not a binary graymap (expected magic P5)");
  }
  const std::size_t width = reader.number();
  const std::size_t height = reader.number();
  const std::size_t maxval = reader.number();
  if (width == 0 || height == 0) {
    throw MapFormatError("graymap dimensions must be positive");
  }
  if (maxval == 0 || maxval > 255) {
    throw MapFormatError("only 8-bit graymaps are supported");
  }
  const std::string_view raster = reader.raster();
  if (raster.size() < width * height) {
    throw MapFormatError("graymap raster is truncated");
  }

  std::vector<CellState> cells(width * height);
  const double scale = static_cast<double>(maxval);
  for (std::size_t image_row = 0; image_row < height; ++image_row) {
    const std::size_t row = height - 1 - image_row;
    for (std::size_t col = 0; col < width; ++col) {
      const double v = static_cast<unsigned char>(raster[image_row * width + col]);
      const double occ = meta.negate ? v / scale : (scale - v) / scale;
      CellState state = CellState::Unknown;
      if (occ > meta.occupied_thresh) {
        state = CellState::Occupied;
      } else if (occ < meta.free_thresh) {
        state = CellState::Free;
      }
      cells[row * width + col] = state;
    }
  }
  return OccupancyGrid(width, height, meta.resolution, meta.origin, std::move(cells));
}

OccupancyGrid load_map(std::string_view image_bytes, std::string_view metadata_text)
{
  return load_map(image_bytes, parse_map_metadata(metadata_text));
}

EncodedMap save_map(const OccupancyGrid & grid, const std::string & image_name)
{
  const std::size_t width = grid.width();
  const std::size_t height = grid.height();

  std::string image = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n255\n";
  const std::size_t header = image.size();
  image.resize(header + width * height);
  for (std::size_t image_row = 0; image_row < height; ++image_row) {
    const std::size_t row = height - 1 - image_row;
    for (std::size_t col = 0; col < width; ++col) {
      unsigned char pixel = kUnknownPixel;
      switch (grid[row * width + col]) {
        case CellState::Free: pixel = kFreePixel; break;
        case CellState::Occupied: pixel = kOccupiedPixel; break;
        case CellState::Unknown: pixel = kUnknownPixel; break;
      }
      image[header + image_row * width + col] = static_cast<char>(pixel);
    }
  }

  MapMetadata meta;
  meta.image = image_name;
  meta.resolution = grid.resolution();
  meta.origin = grid.origin();
  return {std::move(image), format_map_metadata(meta)};
}

OccupancyGrid load_map_file(const std::filesystem::path & meta_path)
{
  const MapMetadata meta = parse_map_metadata(read_file(meta_path));
  std::filesystem::path image_path = meta.image.empty() ?
    std::filesystem::path(meta_path).replace_extension(".pgm") :
    std::filesystem::path(meta.image);
  if (image_path.is_relative()) {
    image_path = meta_path.parent_path() / image_path;
  }
  return load_map(read_file(image_path), meta);
}

void save_map_file(const OccupancyGrid & grid, const std::filesystem::path & meta_path)
{
  const std::filesystem::path image_path = std::filesystem::path(meta_path).replace_extension(".pgm");
  const EncodedMap encoded = save_map(grid, image_path.filename().string());
  write_file_atomic(image_path, encoded.image);
  write_file_atomic(meta_path, encoded.metadata);
}

std::string read_file(const std::filesystem::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw FileError("cannot open '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw FileError("cannot read '" + path.string() + "'");
  }
  return buf.str();
}

void write_file_atomic(const std::filesystem::path & path, std::string_view contents)
{
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());

  std::FILE * f = std::fopen(tmp.c_str(), "wb");
  if (f == nullptr) {
    throw FileError("cannot create '" + tmp.string() + "'");
  }
  const bool written = std::fwrite(contents.data(), 1, contents.size(), f) == contents.size();
  const bool flushed = std::fflush(f) == 0 && ::fsync(::fileno(f)) == 0;
  const bool closed = std::fclose(f) == 0;
  if (!written || !flushed || !closed) {
    std::filesystem::remove(tmp);
    throw FileError("cannot write '" + tmp.string() + "'");
  }

  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw FileError("cannot replace '" + path.string() + "': " + ec.message());
  }
}

}  // namespace keepout
