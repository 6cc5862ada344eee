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

#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ordertrans {

class TransitionMatrix;

/// l observations (rows) by m variables (columns).
struct ObservationMatrix {
  Eigen::MatrixXd data;
  std::vector<std::string> row_labels;
};

/// Row-major concatenation of the matrix cells (100 entries for 10 states).
Eigen::RowVectorXd flatten(const TransitionMatrix& p);
Eigen::MatrixXd unflatten(const Eigen::RowVectorXd& flat, std::size_t states);

/// One flattened row per matrix.
ObservationMatrix make_observations(std::span<const TransitionMatrix> matrices,
                                    std::vector<std::string> labels);

/// Column z-scores with the 1/(l-1) standard deviation; columns whose
/// deviation is below 1e-12 become all-zero. Throws TooFewObservations for l < 2.
ObservationMatrix normalize(const ObservationMatrix& obs);

struct PcaResult {
  Eigen::MatrixXd components;  // k x m, unit-norm loadings
  Eigen::MatrixXd scores;      // l x k
  std::vector<double> eigenvalues;   // descending, min(l, m) of them
  std::vector<double> contribution;  // eigenvalue / total
  std::vector<double> cumulative;    // prefix sums of contribution
  std::vector<std::string> row_labels;

  std::size_t k() const noexcept { return static_cast<std::size_t>(components.rows()); }
};

/// Principal components of already-normalized data. Uses the l x l Gram
/// matrix when l < m. Each loading's largest-magnitude entry is made positive.
/// Throws TooFewObservations, ValidationError for k outside [1, min(l-1, m)],
/// ConvergenceFailure if the eigensolver fails.
PcaResult pca(const ObservationMatrix& normalized, std::size_t k);

/// Reconstructs the (centered) data from scores and loadings.
Eigen::MatrixXd reconstruct(const PcaResult& result);

struct GateReport {
  bool passed = false;
  std::size_t k = 0;
  double threshold = 0.0;
  double cumulative = 0.0;
  std::vector<double> contributions;  // all components
};

inline constexpr double kDefaultCumulativeThreshold = 0.80;

/// Whether the first k components reach `threshold` of the total variance.
/// k defaults to the number of retained components.
GateReport cumulative_gate(const PcaResult& result,
                           double threshold = kDefaultCumulativeThreshold,
                           std::optional<std::size_t> k = std::nullopt);

}  // namespace ordertrans
