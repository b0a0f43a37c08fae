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

#include "keepout/metrics.hpp"

#include <algorithm>

#include "keepout/map_io.hpp"

namespace keepout
{

std::optional<double> Ratio::value() const
{
  if (!defined()) {
    return std::nullopt;
  }
  return static_cast<double>(num) / static_cast<double>(den);
}

bool Ratio::same_value(const Ratio & other) const
{
  if (!defined() || !other.defined()) {
    return defined() == other.defined();
  }
  __extension__ typedef unsigned __int128 uwide;
  return static_cast<uwide>(num) * other.den == static_cast<uwide>(other.num) * den;
}

std::string format_ratio(const Ratio & r)
{
  const auto v = r.value();
  return v ? format_double(*v) : std::string("n/a");
}

std::size_t CellMask::count() const
{
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

CellMask wall_mask_from_base(const OccupancyGrid & base)
{
  CellMask mask = CellMask::empty_for(base);
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i] == CellState::Occupied) {
      mask.set(i);
    }
  }
  return mask;
}

ConfusionCounts classify_cells(
  const OccupancyGrid & ground_truth, const OccupancyGrid & drawn, const CellMask & walls)
{
  if (!ground_truth.same_frame(drawn)) {
    throw GridError("ground truth and drawn map differ in size, resolution or origin");
  }
  if (walls.width() != ground_truth.width() || walls.height() != ground_truth.height()) {
    throw GridError("wall mask does not match the map size");
  }

  ConfusionCounts counts;
  for (std::size_t i = 0; i < ground_truth.size(); ++i) {
    if (walls.test(i)) {
      ++counts.excluded_wall_cells;
      continue;
    }
    const bool truth = ground_truth[i] == CellState::Occupied;
    const bool marked = drawn[i] == CellState::Occupied;
    if (truth && marked) {
      ++counts.tp;
    } else if (marked) {
      ++counts.fp;
    } else if (truth) {
      ++counts.fn;
    } else {
      ++counts.tn;
    }
  }
  return counts;
}

MetricReport compute_metrics(const ConfusionCounts & c)
{
  MetricReport r;
  r.accuracy = {c.tp + c.tn, c.classified()};
  r.precision = {c.tp, c.tp + c.fp};
  r.recall = {c.tp, c.tp + c.fn};
  r.specificity = {c.tn, c.tn + c.fp};
  // p + r > 0 exactly when tp > 0.
  if (c.tp > 0) {
    r.f1 = {2 * c.tp, 2 * c.tp + c.fp + c.fn};
  }
  return r;
}

}  // namespace keepout
