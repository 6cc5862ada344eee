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

#include "ordertrans/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordertrans/error.hpp"

namespace ordertrans {
namespace {

constexpr double kSumTolerance = 1e-12;

void check_weights(const std::vector<double>& w) {
  if (w.empty()) throw InvalidDistribution("distribution is empty");
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!std::isfinite(w[i]) || w[i] < 0.0)
      throw InvalidDistribution("entry " + std::to_string(i) + " is negative or not finite");
}

double sum_of(const std::vector<double>& w) {
  long double s = 0.0L;
  for (double v : w) s += v;
  return static_cast<double>(s);
}

// u_i log2(u_i / m_i) summed over u_i > 0; m is the midpoint so m_i > 0 there.
double kld_to_midpoint(const Distribution& u, const std::vector<double>& m) {
  long double s = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (u[i] > 0.0) s += u[i] * std::log2(u[i] / m[i]);
  return static_cast<double>(s);
}

}  // namespace

Distribution::Distribution(std::vector<double> p) : p_(std::move(p)) {
  check_weights(p_);
  const double s = sum_of(p_);
  if (std::abs(s - 1.0) > kSumTolerance)
    throw InvalidDistribution("distribution sums to " + std::to_string(s));
}

Distribution Distribution::normalized(std::vector<double> weights) {
  check_weights(weights);
  const double s = sum_of(weights);
  if (!(s > 0.0)) throw InvalidDistribution("weights sum to zero");
  for (auto& w : weights) w /= s;
  return Distribution(std::move(weights));
}

double kld(const Distribution& u, const Distribution& v) {
  if (u.size() != v.size()) throw LengthMismatch(u.size(), v.size());
  long double s = 0.0L;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (u[i] == 0.0) continue;
    if (v[i] == 0.0) throw AbsoluteContinuityViolation(i);
    s += u[i] * std::log2(u[i] / v[i]);
  }
  return std::max(0.0, static_cast<double>(s));
}

double jsd(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw LengthMismatch(p.size(), q.size());
  std::vector<double> m(p.size());
  for (std::size_t i = 0; i < m.size(); ++i) m[i] = 0.5 * (p[i] + q[i]);
  const double d = 0.5 * (kld_to_midpoint(p, m) + kld_to_midpoint(q, m));
  return std::clamp(d, 0.0, 1.0);
}

double js_distance(const Distribution& p, const Distribution& q) { return std::sqrt(jsd(p, q)); }

Eigen::MatrixXd jsd_matrix(std::span<const Distribution> dists, JsdScale scale) {
  if (dists.size() < 2) throw EmptyInput("need at least two distributions");
  const auto n = static_cast<Eigen::Index>(dists.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const auto& a = dists[static_cast<std::size_t>(i)];
      const auto& b = dists[static_cast<std::size_t>(j)];
      const double v = scale == JsdScale::kDistance ? js_distance(a, b) : jsd(a, b);
      out(i, j) = out(j, i) = v;
    }
  }
  return out;
}

}  // namespace ordertrans
