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

#ifndef KEEPOUT_METRICS_HPP_
#define KEEPOUT_METRICS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "keepout/grid.hpp"

namespace keepout
{

/// Exact ratio; a zero denominator means "undefined".
struct Ratio
{
  std::uint64_t num{0};
  std::uint64_t den{0};

  bool defined() const {return den != 0;}
  std::optional<double> value() const;

  /// Compares values exactly; two undefined ratios are equal.
  bool same_value(const Ratio & other) const;
};

/// Decimal value, or "n/a" when undefined.
std::string format_ratio(const Ratio & r);

struct ConfusionCounts
{
  std::uint64_t tp{0};
  std::uint64_t fp{0};
  std::uint64_t fn{0};
  std::uint64_t tn{0};
  std::uint64_t excluded_wall_cells{0};

  std::uint64_t classified() const {return tp + fp + fn + tn;}
  std::uint64_t total() const {return classified() + excluded_wall_cells;}

  bool operator==(const ConfusionCounts &) const = default;
};

struct MetricReport
{
  Ratio accuracy;
  Ratio precision;
  Ratio recall;
  Ratio specificity;
  Ratio f1;
};

class CellMask
{
public:
  CellMask(std::size_t width, std::size_t height)
  : width_(width), height_(height), bits_(width * height, false) {}

  static CellMask empty_for(const OccupancyGrid & grid)
  {
    return CellMask(grid.width(), grid.height());
  }

  std::size_t width() const {return width_;}
  std::size_t height() const {return height_;}
  bool test(std::size_t linear_index) const {return bits_[linear_index];}
  void set(std::size_t linear_index, bool value = true) {bits_[linear_index] = value;}
  std::size_t count() const;

  bool operator==(const CellMask &) const = default;

private:
  std::size_t width_;
  std::size_t height_;
  std::vector<bool> bits_;
};

/// Occupied cells of the empty-room base map.
CellMask wall_mask_from_base(const OccupancyGrid & base);

/// Per-cell comparison, walls excluded. A cell counts as positive when it is
/// Occupied; Free and Unknown are both negative:
///   truth Occupied,  drawn Occupied      -> tp
///   truth not Occ.,  drawn Occupied      -> fp
///   truth Occupied,  drawn not Occupied  -> fn
///   truth not Occ.,  drawn not Occupied  -> tn
/// Throws GridError when the grids (or the mask) do not share a frame.
ConfusionCounts classify_cells(
  const OccupancyGrid & ground_truth, const OccupancyGrid & drawn, const CellMask & walls);

/// accuracy = (tp+tn)/all, precision = tp/(tp+fp), recall = tp/(tp+fn),
/// specificity = tn/(tn+fp), f1 = 2pr/(p+r) = 2tp/(2tp+fp+fn), undefined
/// whenever p + r is zero or undefined.
MetricReport compute_metrics(const ConfusionCounts & counts);

}  // namespace keepout

#endif  // KEEPOUT_METRICS_HPP_
