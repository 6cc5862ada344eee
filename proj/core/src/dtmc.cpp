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

#include "ordertrans/dtmc.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "ordertrans/ingest.hpp"

namespace ordertrans {
namespace {

constexpr double kRowSumTolerance = 1e-9;
constexpr double kSolverAgreement = 1e-8;
constexpr double kBalanceTolerance = 1e-10;

}  // namespace

// ---------------------------------------------------------------------------
// CountMatrix

CountMatrix::CountMatrix(std::size_t states) : n_(states), cells_(states * states, 0) {}

void CountMatrix::add(std::size_t i, std::size_t j, std::uint64_t count) {
  if (i >= n_ || j >= n_) throw DataError("state index out of range");
  cells_[i * n_ + j] += count;
  total_ += count;
}

std::uint64_t CountMatrix::row_total(std::size_t i) const {
  std::uint64_t s = 0;
  for (std::size_t j = 0; j < n_; ++j) s += cells_[i * n_ + j];
  return s;
}

CountMatrix& CountMatrix::operator+=(const CountMatrix& other) {
  if (other.n_ != n_) throw DimensionMismatch("cannot merge count matrices of different size");
  for (std::size_t k = 0; k < cells_.size(); ++k) cells_[k] += other.cells_[k];
  total_ += other.total_;
  return *this;
}

CountMatrix accumulate(std::span<const std::uint8_t> symbols, std::size_t states) {
  if (symbols.size() < 2) throw SequenceTooShort(symbols.size(), 1);
  CountMatrix counts(states);
  for (std::size_t t = 0; t + 1 < symbols.size(); ++t) counts.add(symbols[t], symbols[t + 1]);
  return counts;
}

CountMatrix accumulate(const SymbolSequence& seq, std::size_t states) {
  return accumulate(std::span<const std::uint8_t>(seq.symbols), states);
}

LaggedCounter::LaggedCounter(std::size_t max_lag, std::size_t states)
    : states_(states), lagged_(max_lag, CountMatrix(states)), ring_(max_lag, 0), kinds_(states, 0) {
  if (max_lag == 0) throw ValidationError("max_lag must be positive");
}

void LaggedCounter::push(std::uint8_t symbol) {
  if (symbol >= states_) throw DataError("state index out of range");
  const std::size_t lags = lagged_.size();
  // ring_ holds the previous `lags` symbols; slot (length_ - k) % lags is lag k back.
  for (std::size_t k = 1; k <= lags && k <= length_; ++k) {
    const auto prev = ring_[(length_ - k) % lags];
    lagged_[k - 1].add(prev, symbol);
  }
  ring_[length_ % lags] = symbol;
  ++kinds_[symbol];
  ++length_;
}

// ---------------------------------------------------------------------------
// TransitionMatrix

TransitionMatrix::TransitionMatrix(Eigen::MatrixXd probs) : probs_(std::move(probs)) {
  if (probs_.rows() != probs_.cols() || probs_.rows() == 0)
    throw InvalidTransitionMatrix("transition matrix must be square and non-empty");
  const auto n = static_cast<std::size_t>(probs_.rows());
  supported_.assign(n, false);
  for (Eigen::Index i = 0; i < probs_.rows(); ++i) {
    double sum = 0.0;
    for (Eigen::Index j = 0; j < probs_.cols(); ++j) {
      const double v = probs_(i, j);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw InvalidTransitionMatrix("entry (" + std::to_string(i) + "," + std::to_string(j) +
                                      ") outside [0, 1]");
      sum += v;
    }
    if (sum == 0.0) continue;
    if (std::abs(sum - 1.0) > kRowSumTolerance)
      throw InvalidTransitionMatrix("row " + std::to_string(i) + " sums to " +
                                    std::to_string(sum));
    supported_[static_cast<std::size_t>(i)] = true;
  }
}

TransitionMatrix TransitionMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(r.size()) != n)
      throw InvalidTransitionMatrix("transition matrix must be square");
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = r[static_cast<std::size_t>(j)];
  }
  return TransitionMatrix(std::move(m));
}

std::vector<std::size_t> TransitionMatrix::support() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < supported_.size(); ++i)
    if (supported_[i]) out.push_back(i);
  return out;
}

std::vector<std::vector<double>> TransitionMatrix::rows() const {
  std::vector<std::vector<double>> out(states(), std::vector<double>(states()));
  for (std::size_t i = 0; i < states(); ++i)
    for (std::size_t j = 0; j < states(); ++j) out[i][j] = (*this)(i, j);
  return out;
}

TransitionMatrix estimate(const CountMatrix& counts) {
  if (counts.total() == 0) throw EmptyCounts();
  const auto n = static_cast<Eigen::Index>(counts.states());
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto row = counts.row_total(static_cast<std::size_t>(i));
    if (row == 0) continue;
    for (Eigen::Index j = 0; j < n; ++j)
      p(i, j) = static_cast<double>(counts(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) /
                static_cast<double>(row);
  }
  return TransitionMatrix(std::move(p));
}

TransitionMatrix average(std::span<const TransitionMatrix> matrices) {
  if (matrices.empty()) throw EmptyInput("no matrices to average");
  const auto n = static_cast<Eigen::Index>(matrices.front().states());
  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::size_t> seen(static_cast<std::size_t>(n), 0);

  for (const auto& m : matrices) {
    if (static_cast<Eigen::Index>(m.states()) != n)
      throw DimensionMismatch("cannot average matrices of different size");
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = static_cast<std::size_t>(i);
      if (!m.supported(row)) continue;
      const double k = static_cast<double>(++seen[row]);
      // Incremental mean: exact when every input row is identical.
      for (Eigen::Index j = 0; j < n; ++j) mean(i, j) += (m.probs()(i, j) - mean(i, j)) / k;
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (seen[static_cast<std::size_t>(i)] == 0) continue;
    const double sum = mean.row(i).sum();
    if (std::abs(sum - 1.0) > 1e-15) mean.row(i) /= sum;
  }
  return TransitionMatrix(std::move(mean));
}

// ---------------------------------------------------------------------------
// Classification

std::string_view to_string(ChainClass c) noexcept {
  switch (c) {
    case ChainClass::kErgodic: return "ergodic";
    case ChainClass::kReducible: return "reducible";
    case ChainClass::kPeriodic: return "periodic";
  }
  return "unknown";
}

Classification classify(const TransitionMatrix& p) {
  const std::size_t n = p.states();
  std::vector<bool> active(n, false);
  bool dangling = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (!p.supported(i)) continue;
    active[i] = true;
    for (std::size_t j = 0; j < n; ++j)
      if (p(i, j) > 0.0) active[j] = true;
  }
  Classification c;
  for (std::size_t i = 0; i < n; ++i) {
    if (!active[i]) continue;
    c.active_states.push_back(i);
    if (!p.supported(i)) dangling = true;
  }
  if (c.active_states.empty()) throw EmptyInput("transition matrix has no supported rows");

  // Tarjan's strongly connected components.
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  int counter = 0;
  std::function<void(std::size_t)> strongconnect = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (!(p(v, w) > 0.0)) continue;
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      ++c.components;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
      } while (w != v);
    }
  };
  for (auto v : c.active_states)
    if (index[v] < 0) strongconnect(v);

  if (c.components != 1 || dangling) {
    c.kind = ChainClass::kReducible;
    return c;
  }

  // Period: gcd over edges of level[u] + 1 - level[v] for BFS levels.
  std::vector<long> level(n, -1);
  std::vector<std::size_t> queue{c.active_states.front()};
  level[queue.front()] = 0;
  long g = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const auto u = queue[head];
    for (std::size_t v = 0; v < n; ++v) {
      if (!(p(u, v) > 0.0)) continue;
      if (level[v] < 0) {
        level[v] = level[u] + 1;
        queue.push_back(v);
      } else {
        g = std::gcd(g, std::abs(level[u] + 1 - level[v]));
      }
    }
  }
  c.period = static_cast<std::size_t>(g);
  c.kind = c.period == 1 ? ChainClass::kErgodic : ChainClass::kPeriodic;
  return c;
}

// ---------------------------------------------------------------------------
// Stationary distribution

namespace {

Eigen::MatrixXd restrict_to(const TransitionMatrix& p, const std::vector<std::size_t>& states) {
  const auto a = static_cast<Eigen::Index>(states.size());
  Eigen::MatrixXd sub(a, a);
  for (Eigen::Index i = 0; i < a; ++i)
    for (Eigen::Index j = 0; j < a; ++j)
      sub(i, j) = p(states[static_cast<std::size_t>(i)], states[static_cast<std::size_t>(j)]);
  return sub;
}

std::vector<double> expand(const Eigen::VectorXd& pi, const std::vector<std::size_t>& states,
                           std::size_t n) {
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < states.size(); ++k) out[states[k]] = pi(static_cast<Eigen::Index>(k));
  return out;
}

std::vector<std::size_t> active_states(const TransitionMatrix& p) {
  return classify(p).active_states;
}

}  // namespace

std::vector<double> stationary_linear(const TransitionMatrix& p) {
  const auto states = active_states(p);
  const Eigen::MatrixXd sub = restrict_to(p, states);
  const auto a = sub.rows();

  // [(P^T - I); 1^T] pi = [0; 1]
  Eigen::MatrixXd system(a + 1, a);
  system.topRows(a) = sub.transpose() - Eigen::MatrixXd::Identity(a, a);
  system.row(a).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(a + 1);
  rhs(a) = 1.0;

  Eigen::VectorXd pi = system.colPivHouseholderQr().solve(rhs);
  for (auto& v : pi) v = std::max(v, 0.0);
  pi /= pi.sum();
  return expand(pi, states, p.states());
}

std::vector<double> stationary_power(const TransitionMatrix& p, double tolerance,
                                     std::size_t max_iterations) {
  const auto states = active_states(p);
  const Eigen::MatrixXd sub = restrict_to(p, states);
  const auto a = sub.rows();

  Eigen::RowVectorXd pi = Eigen::RowVectorXd::Constant(a, 1.0 / static_cast<double>(a));
  double diff = 1.0;
  for (std::size_t it = 0; it < max_iterations && diff > tolerance; ++it) {
    Eigen::RowVectorXd next = pi * sub;
    next /= next.sum();
    diff = (next - pi).cwiseAbs().maxCoeff();
    pi = std::move(next);
  }
  if (diff > 1e-12)
    throw ConvergenceFailure("power iteration did not converge (last step " +
                             std::to_string(diff) + ")");
  return expand(pi.transpose(), states, p.states());
}

double balance_residual(const TransitionMatrix& p, std::span<const double> pi) {
  const auto n = p.states();
  if (pi.size() != n) throw LengthMismatch(pi.size(), n);
  double worst = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < n; ++i) s += static_cast<long double>(pi[i]) * p(i, j);
    worst = std::max(worst, std::abs(static_cast<double>(s) - pi[j]));
  }
  return worst;
}

StationaryDistribution stationary(const TransitionMatrix& p) {
  auto c = classify(p);
  if (c.kind != ChainClass::kErgodic) throw NotErgodic(std::move(c));

  auto direct = stationary_linear(p);
  const auto iterated = stationary_power(p);
  double gap = 0.0;
  for (std::size_t i = 0; i < direct.size(); ++i)
    gap = std::max(gap, std::abs(direct[i] - iterated[i]));
  if (gap > kSolverAgreement)
    throw InternalError("stationary solvers disagree by " + std::to_string(gap));
  if (const double r = balance_residual(p, direct); r > kBalanceTolerance)
    throw InternalError("stationary balance residual " + std::to_string(r));
  return {std::move(direct)};
}

std::vector<double> degree_of_inertia(const TransitionMatrix& p) {
  std::vector<double> out(p.states());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p(i, i);
  return out;
}

}  // namespace ordertrans
