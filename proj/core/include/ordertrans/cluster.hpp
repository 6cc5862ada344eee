// Copyright 2026 The ordertrans Authors
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

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace ordertrans {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  bool operator==(const Point2&) const = default;
};

inline constexpr double kDefaultEps = 3.95;
inline constexpr std::size_t kDefaultMinPts = 3;

struct DbscanParams {
  double eps = kDefaultEps;  // closed-ball radius
  std::size_t min_pts = kDefaultMinPts;  // neighbourhood size, counting the point itself

  /// Throws ValidationError unless eps > 0 and min_pts >= 1.
  void validate() const;
};

enum class PointRole { kCore, kBorder, kNoise };
std::string_view to_string(PointRole role) noexcept;

inline constexpr int kNoiseLabel = -1;

struct ClusterLabels {
  std::vector<int> labels;  // cluster id >= 0 or kNoiseLabel
  std::vector<PointRole> roles;
  std::size_t cluster_count = 0;
};

/// Density-based clustering with Euclidean distance. Points are visited in
/// input order; clusters are numbered in discovery order and a border point
/// reachable from several clusters joins the first one discovered.
ClusterLabels dbscan(std::span<const Point2> points, const DbscanParams& params);

/// Distance from each point to its k-th nearest other point, sorted
/// descending (the k-distance graph). Throws KTooLarge unless 1 <= k < n.
std::vector<double> k_distance(std::span<const Point2> points, std::size_t k);

}  // namespace ordertrans
