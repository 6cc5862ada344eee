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

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ordertrans {

/// Discrete probability vector: non-negative, summing to one within 1e-12.
class Distribution {
 public:
  /// Throws InvalidDistribution when the invariant does not hold.
  explicit Distribution(std::vector<double> p);
  /// Rescales non-negative weights to sum to one.
  static Distribution normalized(std::vector<double> weights);

  std::size_t size() const noexcept { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& values() const noexcept { return p_; }

 private:
  std::vector<double> p_;
};

/// sum_i u_i log2(u_i / v_i). Throws AbsoluteContinuityViolation if some
/// u_i > 0 has v_i = 0, LengthMismatch on differing lengths.
double kld(const Distribution& u, const Distribution& v);

/// Jensen-Shannon divergence in bits, in [0, 1].
double jsd(const Distribution& p, const Distribution& q);

/// sqrt(jsd): the Jensen-Shannon distance, a metric.
double js_distance(const Distribution& p, const Distribution& q);

enum class JsdScale {
  kDivergence,  // jsd
  kDistance,    // sqrt(jsd), the scale of the reference time-zone tables
};

/// Symmetric matrix of pairwise values with a zero diagonal.
/// Throws LengthMismatch, or EmptyInput for fewer than two distributions.
Eigen::MatrixXd jsd_matrix(std::span<const Distribution> dists,
                           JsdScale scale = JsdScale::kDistance);

}  // namespace ordertrans
