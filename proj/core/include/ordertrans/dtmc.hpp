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

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ordertrans/domain.hpp"
#include "ordertrans/error.hpp"

namespace ordertrans {

struct SymbolSequence;

/// n x n one-step transition counts.
class CountMatrix {
 public:
  explicit CountMatrix(std::size_t states = kNumStates);

  std::size_t states() const noexcept { return n_; }
  std::uint64_t operator()(std::size_t i, std::size_t j) const { return cells_[i * n_ + j]; }
  void add(std::size_t i, std::size_t j, std::uint64_t count = 1);

  std::uint64_t row_total(std::size_t i) const;
  std::uint64_t total() const noexcept { return total_; }

  /// Cell-wise sum. Throws DimensionMismatch on differing sizes.
  CountMatrix& operator+=(const CountMatrix& other);
  friend CountMatrix operator+(CountMatrix a, const CountMatrix& b) { return a += b; }
  bool operator==(const CountMatrix&) const = default;

 private:
  std::size_t n_;
  std::vector<std::uint64_t> cells_;
  std::uint64_t total_ = 0;
};

/// Counts consecutive pairs. Throws SequenceTooShort for fewer than two symbols.
CountMatrix accumulate(std::span<const std::uint8_t> symbols, std::size_t states = kNumStates);
CountMatrix accumulate(const SymbolSequence& seq, std::size_t states = kNumStates);

/// Incremental pair counter for lags 1..max_lag, fed one symbol at a time.
/// Memory is independent of the sequence length.
class LaggedCounter {
 public:
  explicit LaggedCounter(std::size_t max_lag = 1, std::size_t states = kNumStates);

  void push(std::uint8_t symbol);

  std::size_t max_lag() const noexcept { return lagged_.size(); }
  std::uint64_t length() const noexcept { return length_; }
  /// Pair counts at the given lag (1-based).
  const CountMatrix& at_lag(std::size_t lag) const { return lagged_.at(lag - 1); }
  const std::vector<std::uint64_t>& kind_counts() const noexcept { return kinds_; }

 private:
  std::size_t states_;
  std::vector<CountMatrix> lagged_;
  std::vector<std::uint8_t> ring_;
  std::vector<std::uint64_t> kinds_;
  std::uint64_t length_ = 0;
};

/// Row-stochastic matrix. Rows that never occurred are all-zero and marked
/// unsupported.
class TransitionMatrix {
 public:
  /// Validates entries in [0, 1] and each row summing to 1 (within 1e-9) or to 0.
  explicit TransitionMatrix(Eigen::MatrixXd probs);
  static TransitionMatrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t states() const noexcept { return static_cast<std::size_t>(probs_.rows()); }
  double operator()(std::size_t i, std::size_t j) const {
    return probs_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  const Eigen::MatrixXd& probs() const noexcept { return probs_; }
  bool supported(std::size_t i) const { return supported_.at(i); }
  std::vector<std::size_t> support() const;
  std::vector<std::vector<double>> rows() const;

  bool operator==(const TransitionMatrix& other) const { return probs_ == other.probs_; }

 private:
  Eigen::MatrixXd probs_;
  std::vector<bool> supported_;
};

/// Maximum-likelihood estimate p_ij = n_ij / sum_j n_ij. Throws EmptyCounts.
TransitionMatrix estimate(const CountMatrix& counts);

/// Cell-wise mean over the inputs in which each row is supported, rows
/// renormalized. Throws EmptyInput / DimensionMismatch.
TransitionMatrix average(std::span<const TransitionMatrix> matrices);

enum class ChainClass { kErgodic, kReducible, kPeriodic };
std::string_view to_string(ChainClass c) noexcept;

struct Classification {
  ChainClass kind = ChainClass::kReducible;
  std::size_t period = 0;      // gcd of cycle lengths; 0 when reducible
  std::size_t components = 0;  // strongly connected components among active states
  std::vector<std::size_t> active_states;  // supported or reachable states
};

/// Irreducibility via strongly connected components of the graph p_ij > 0 over
/// states that are supported or entered; aperiodicity via the cycle-length gcd.
/// A reachable state with no observed outgoing transitions makes the chain reducible.
Classification classify(const TransitionMatrix& p);

class NotErgodic : public DataError {
 public:
  explicit NotErgodic(Classification c)
      : DataError("chain is not ergodic (" + std::string(to_string(c.kind)) + ")"),
        classification_(std::move(c)) {}
  const Classification& classification() const noexcept { return classification_; }

 private:
  Classification classification_;
};

struct StationaryDistribution {
  std::vector<double> pi;
};

/// Unique pi with pi P = pi and sum(pi) = 1. Solved as a linear system and
/// cross-checked by power iteration. Throws NotErgodic.
StationaryDistribution stationary(const TransitionMatrix& p);

/// The two routes used by stationary(), exposed for testing. Both assume an
/// ergodic chain and operate on the active states only.
std::vector<double> stationary_linear(const TransitionMatrix& p);
std::vector<double> stationary_power(const TransitionMatrix& p, double tolerance = 1e-15,
                                     std::size_t max_iterations = 2'000'000);

/// max_j |(pi P)_j - pi_j|
double balance_residual(const TransitionMatrix& p, std::span<const double> pi);

/// Diagonal p_ii: probability that the next event repeats the current one.
std::vector<double> degree_of_inertia(const TransitionMatrix& p);

}  // namespace ordertrans
