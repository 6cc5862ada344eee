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

#include "ordertrans/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "ordertrans/error.hpp"

namespace ordertrans {
namespace {

double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::vector<std::size_t> neighbours(std::span<const Point2> points, std::size_t i, double eps) {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < points.size(); ++j)
    if (distance(points[i], points[j]) <= eps) out.push_back(j);
  return out;
}

}  // namespace

void DbscanParams::validate() const {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ValidationError("dbscan.eps: must be positive");
  if (min_pts < 1) throw ValidationError("dbscan.min_pts: must be at least 1");
}

std::string_view to_string(PointRole role) noexcept {
  switch (role) {
    case PointRole::kCore: return "core";
    case PointRole::kBorder: return "border";
    case PointRole::kNoise: return "noise";
  }
  return "unknown";
}

ClusterLabels dbscan(std::span<const Point2> points, const DbscanParams& params) {
  params.validate();
  const std::size_t n = points.size();
  ClusterLabels out;
  out.labels.assign(n, kNoiseLabel);
  out.roles.assign(n, PointRole::kNoise);

  // O(n^2) neighbourhoods; n is tiny for the time-zone embedding.
  std::vector<std::vector<std::size_t>> hood(n);
  for (std::size_t i = 0; i < n; ++i) {
    hood[i] = neighbours(points, i, params.eps);
    if (hood[i].size() >= params.min_pts) out.roles[i] = PointRole::kCore;
  }

  std::vector<bool> visited(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (visited[i]) continue;
    visited[i] = true;
    if (out.roles[i] != PointRole::kCore) continue;  // noise unless a later cluster claims it

    const int id = static_cast<int>(out.cluster_count++);
    out.labels[i] = id;
    std::vector<std::size_t> frontier(hood[i].begin(), hood[i].end());
    for (std::size_t f = 0; f < frontier.size(); ++f) {
      const auto q = frontier[f];
      if (out.labels[q] == kNoiseLabel) {
        out.labels[q] = id;
        if (out.roles[q] != PointRole::kCore) out.roles[q] = PointRole::kBorder;
      }
      if (visited[q]) continue;
      visited[q] = true;
      if (out.roles[q] == PointRole::kCore)
        frontier.insert(frontier.end(), hood[q].begin(), hood[q].end());
    }
  }
  return out;
}

std::vector<double> k_distance(std::span<const Point2> points, std::size_t k) {
  const std::size_t n = points.size();
  if (k < 1 || k >= n) throw KTooLarge(k, n);
  std::vector<double> out;
  out.reserve(n);
  std::vector<double> d;
  for (std::size_t i = 0; i < n; ++i) {
    d.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) d.push_back(distance(points[i], points[j]));
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
    out.push_back(d[k - 1]);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

}  // namespace ordertrans
