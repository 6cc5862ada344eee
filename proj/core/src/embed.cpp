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

#include "ordertrans/embed.hpp"

#include <algorithm>
#include <cmath>

#include "ordertrans/dtmc.hpp"
#include "ordertrans/error.hpp"

namespace ordertrans {
namespace {

constexpr double kZeroVariance = 1e-12;

// Makes the largest-magnitude entry positive; ties go to the lowest index.
void fix_sign(Eigen::Ref<Eigen::RowVectorXd> loading) {
  Eigen::Index best = 0;
  for (Eigen::Index j = 1; j < loading.size(); ++j)
    if (std::abs(loading(j)) > std::abs(loading(best))) best = j;
  if (loading(best) < 0.0) loading = -loading;
}

// Unit vector orthogonal to the first `filled` rows of `basis`.
Eigen::RowVectorXd orthogonal_complement(const Eigen::MatrixXd& basis, Eigen::Index filled) {
  const auto m = basis.cols();
  for (Eigen::Index e = 0; e < m; ++e) {
    Eigen::RowVectorXd v = Eigen::RowVectorXd::Unit(m, e);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index r = 0; r < filled; ++r) v -= v.dot(basis.row(r)) * basis.row(r);
    const double norm = v.norm();
    if (norm > 1e-6) return v / norm;
  }
  throw InternalError("no orthogonal direction left");
}

}  // namespace

Eigen::RowVectorXd flatten(const TransitionMatrix& p) {
  const auto n = static_cast<Eigen::Index>(p.states());
  Eigen::RowVectorXd out(n * n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i * n + j) = p.probs()(i, j);
  return out;
}

Eigen::MatrixXd unflatten(const Eigen::RowVectorXd& flat, std::size_t states) {
  const auto n = static_cast<Eigen::Index>(states);
  if (flat.size() != n * n) throw DimensionMismatch("flattened size does not match state count");
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) out(i, j) = flat(i * n + j);
  return out;
}

ObservationMatrix make_observations(std::span<const TransitionMatrix> matrices,
                                    std::vector<std::string> labels) {
  if (matrices.empty()) throw EmptyInput("no matrices to embed");
  if (labels.size() != matrices.size())
    throw DimensionMismatch("one label per matrix is required");
  const auto width = static_cast<Eigen::Index>(matrices.front().states() * matrices.front().states());
  ObservationMatrix obs{Eigen::MatrixXd(static_cast<Eigen::Index>(matrices.size()), width),
                        std::move(labels)};
  for (std::size_t r = 0; r < matrices.size(); ++r) {
    const auto flat = flatten(matrices[r]);
    if (flat.size() != width) throw DimensionMismatch("matrices differ in size");
    obs.data.row(static_cast<Eigen::Index>(r)) = flat;
  }
  return obs;
}

ObservationMatrix normalize(const ObservationMatrix& obs) {
  const auto l = obs.data.rows();
  if (l < 2) throw TooFewObservations(static_cast<std::size_t>(l), 2);
  ObservationMatrix out{Eigen::MatrixXd(l, obs.data.cols()), obs.row_labels};
  for (Eigen::Index c = 0; c < obs.data.cols(); ++c) {
    const auto col = obs.data.col(c);
    const double mean = col.mean();
    const double sd = std::sqrt((col.array() - mean).square().sum() / static_cast<double>(l - 1));
    if (sd < kZeroVariance)
      out.data.col(c).setZero();
    else
      out.data.col(c) = (col.array() - mean) / sd;
  }
  return out;
}

PcaResult pca(const ObservationMatrix& normalized, std::size_t k) {
  const auto l = normalized.data.rows();
  const auto m = normalized.data.cols();
  if (l < 2) throw TooFewObservations(static_cast<std::size_t>(l), 2);
  const auto max_k = static_cast<std::size_t>(std::min(l - 1, m));
  if (k < 1 || k > max_k)
    throw ValidationError("k = " + std::to_string(k) + " must lie in [1, " +
                          std::to_string(max_k) + "]");

  const Eigen::MatrixXd y = normalized.data.rowwise() - normalized.data.colwise().mean();
  const double denom = static_cast<double>(l - 1);
  const bool use_gram = l < m;

  const Eigen::MatrixXd sym = use_gram ? Eigen::MatrixXd(y * y.transpose() / denom)
                                       : Eigen::MatrixXd(y.transpose() * y / denom);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw ConvergenceFailure("symmetric eigensolver failed");

  // Eigen returns ascending order.
  const auto count = sym.rows();
  PcaResult res;
  res.row_labels = normalized.row_labels;
  res.eigenvalues.resize(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i)
    res.eigenvalues[static_cast<std::size_t>(i)] = std::max(0.0, solver.eigenvalues()(count - 1 - i));

  const double total = [&] {
    long double s = 0.0L;
    for (double v : res.eigenvalues) s += v;
    return static_cast<double>(s);
  }();
  double running = 0.0;
  for (double v : res.eigenvalues) {
    const double c = total > 0.0 ? v / total : 0.0;
    running += c;
    res.contribution.push_back(c);
    res.cumulative.push_back(running);
  }

  const double tiny = 1e-12 * std::max(1.0, res.eigenvalues.front());
  res.components.resize(static_cast<Eigen::Index>(k), m);
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(k); ++c) {
    const Eigen::VectorXd vec = solver.eigenvectors().col(count - 1 - c);
    Eigen::RowVectorXd loading;
    if (use_gram) {
      loading = (y.transpose() * vec).transpose();
      const double norm = loading.norm();
      if (res.eigenvalues[static_cast<std::size_t>(c)] > tiny && norm > 0.0)
        loading /= norm;
      else
        loading = orthogonal_complement(res.components, c);
    } else {
      loading = vec.transpose();
    }
    fix_sign(loading);
    res.components.row(c) = loading;
  }
  res.scores = y * res.components.transpose();
  return res;
}

Eigen::MatrixXd reconstruct(const PcaResult& result) { return result.scores * result.components; }

GateReport cumulative_gate(const PcaResult& result, double threshold, std::optional<std::size_t> k) {
  GateReport r;
  r.k = k.value_or(result.k());
  r.threshold = threshold;
  long double total = 0.0L;
  for (double v : result.eigenvalues) total += v;
  long double head = 0.0L;
  for (std::size_t i = 0; i < result.eigenvalues.size(); ++i) {
    const double c = total > 0 ? static_cast<double>(result.eigenvalues[i] / total) : 0.0;
    r.contributions.push_back(c);
    if (i < r.k) head += result.eigenvalues[i];
  }
  r.cumulative = total > 0 ? static_cast<double>(head / total) : 0.0;
  r.passed = r.cumulative >= threshold;
  return r;
}

}  // namespace ordertrans
