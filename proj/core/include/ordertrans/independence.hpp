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
#include <vector>

#include "ordertrans/domain.hpp"

namespace ordertrans {

struct SymbolSequence;

/// Significance level used to reject independence.
inline constexpr double kSignificanceLevel = 0.05;

/// r x c table of non-negative counts, row-major.
class ContingencyTable {
 public:
  ContingencyTable(std::size_t rows, std::size_t cols, std::size_t lag = 1);
  ContingencyTable(std::size_t rows, std::size_t cols, std::vector<std::uint64_t> counts,
                   std::size_t lag = 1);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t lag() const noexcept { return lag_; }

  std::uint64_t operator()(std::size_t i, std::size_t j) const { return counts_[i * cols_ + j]; }
  void add(std::size_t i, std::size_t j, std::uint64_t n = 1) {
    counts_[i * cols_ + j] += n;
    total_ += n;
  }

  std::uint64_t total() const noexcept { return total_; }
  std::vector<std::uint64_t> row_totals() const;
  std::vector<std::uint64_t> col_totals() const;

  bool operator==(const ContingencyTable&) const = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::size_t lag_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

struct GTestResult {
  double g = 0.0;
  std::size_t df = 0;
  double p_value = 1.0;

  bool dependent(double alpha = kSignificanceLevel) const noexcept { return p_value < alpha; }
};

/// Counts (seq[t], seq[t + lag]) pairs into a 10 x 10 table.
/// Throws SequenceTooShort unless length > lag.
ContingencyTable build_table(std::span<const std::uint8_t> symbols, std::size_t lag = 1);
ContingencyTable build_table(const SymbolSequence& seq, std::size_t lag = 1);

/// Likelihood-ratio (G) test of independence on the table's rows and columns.
/// Zero cells contribute nothing; rows and columns with zero marginals are
/// excluded from the statistic and from the degrees of freedom.
/// Throws DegenerateTable when fewer than two rows or two columns remain.
GTestResult g_statistic(const ContingencyTable& table);

/// Pearson chi-square statistic with the same zero-marginal handling.
double pearson_chi_square(const ContingencyTable& table);

/// Upper tail of the chi-square distribution, Q(df/2, x/2).
double chi_square_sf(double x, std::size_t df);

struct LagAssociation {
  std::size_t lag = 0;
  std::uint64_t n = 0;
  double cramers_v = 0.0;      // bias-corrected
  double cramers_v_raw = 0.0;  // sqrt(chi2 / (n (min(r, c) - 1)))
  double threshold = 0.0;      // 1 / sqrt(n)

  bool exceeds() const noexcept { return cramers_v > threshold; }
};

/// Association of the lag-k pair table for k = 1..max_lag.
///
/// The plain statistic is biased upwards: for independent symbols on a full
/// 10 x 10 table it concentrates near 3 / sqrt(n), above the 1 / sqrt(n)
/// threshold. exceeds() therefore compares the bias-corrected value.
std::vector<LagAssociation> lagged_association(std::span<const std::uint8_t> symbols,
                                               std::size_t max_lag);
std::vector<LagAssociation> lagged_association(const SymbolSequence& seq, std::size_t max_lag);

/// Cramér's V of an already-built table, over rows and columns with
/// non-zero marginals. Throws DegenerateTable.
double cramers_v(const ContingencyTable& table);

/// Bias-corrected Cramér's V (Bergsma 2013): phi^2 is reduced by its
/// expectation under independence and the table dimensions shrunk to match.
double cramers_v_corrected(const ContingencyTable& table);

}  // namespace ordertrans
