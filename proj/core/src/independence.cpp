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

#include "ordertrans/independence.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "ordertrans/error.hpp"
#include "ordertrans/ingest.hpp"

namespace ordertrans {

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols, std::size_t lag)
    : rows_(rows), cols_(cols), lag_(lag), counts_(rows * cols, 0) {}

ContingencyTable::ContingencyTable(std::size_t rows, std::size_t cols,
                                   std::vector<std::uint64_t> counts, std::size_t lag)
    : rows_(rows), cols_(cols), lag_(lag), counts_(std::move(counts)) {
  if (counts_.size() != rows_ * cols_)
    throw DimensionMismatch("contingency table needs " + std::to_string(rows_ * cols_) +
                            " cells, got " + std::to_string(counts_.size()));
  for (auto c : counts_) total_ += c;
}

std::vector<std::uint64_t> ContingencyTable::row_totals() const {
  std::vector<std::uint64_t> out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j);
  return out;
}

std::vector<std::uint64_t> ContingencyTable::col_totals() const {
  std::vector<std::uint64_t> out(cols_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[j] += (*this)(i, j);
  return out;
}

ContingencyTable build_table(std::span<const std::uint8_t> symbols, std::size_t lag) {
  if (lag == 0) throw ValidationError("lag must be positive");
  if (symbols.size() <= lag) throw SequenceTooShort(symbols.size(), lag);
  ContingencyTable table(kNumStates, kNumStates, lag);
  for (std::size_t t = 0; t + lag < symbols.size(); ++t) {
    if (symbols[t] >= kNumStates || symbols[t + lag] >= kNumStates)
      throw DataError("state index out of range");
    table.add(symbols[t], symbols[t + lag]);
  }
  return table;
}

ContingencyTable build_table(const SymbolSequence& seq, std::size_t lag) {
  return build_table(std::span<const std::uint8_t>(seq.symbols), lag);
}

namespace {

__extension__ typedef unsigned __int128 u128;

struct Marginals {
  std::vector<std::uint64_t> rows;
  std::vector<std::uint64_t> cols;
  std::size_t live_rows = 0;
  std::size_t live_cols = 0;
};

Marginals live_marginals(const ContingencyTable& table) {
  Marginals m{table.row_totals(), table.col_totals(), 0, 0};
  m.live_rows = static_cast<std::size_t>(std::count_if(m.rows.begin(), m.rows.end(),
                                                       [](auto v) { return v > 0; }));
  m.live_cols = static_cast<std::size_t>(std::count_if(m.cols.begin(), m.cols.end(),
                                                       [](auto v) { return v > 0; }));
  if (m.live_rows < 2 || m.live_cols < 2)
    throw DegenerateTable("table has " + std::to_string(m.live_rows) + " non-empty rows and " +
                          std::to_string(m.live_cols) + " non-empty columns");
  return m;
}

}  // namespace

GTestResult g_statistic(const ContingencyTable& table) {
  if (table.total() == 0) throw DegenerateTable("table is empty");
  const auto m = live_marginals(table);
  const u128 n = table.total();

  // O ln(O / E) with E = R C / N, evaluated as ln((O N) / (R C)) on exact
  // integer products so that O == E yields exactly zero.
  long double sum = 0.0L;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (m.rows[i] == 0) continue;
    for (std::size_t j = 0; j < table.cols(); ++j) {
      const auto o = table(i, j);
      if (o == 0) continue;
      const u128 num = static_cast<u128>(o) * n;
      const u128 den = static_cast<u128>(m.rows[i]) * m.cols[j];
      if (num == den) continue;
      const long double ratio = static_cast<long double>(num) / static_cast<long double>(den);
      sum += static_cast<long double>(o) * std::log(ratio);
    }
  }
  GTestResult r;
  r.g = std::max(0.0, static_cast<double>(2.0L * sum));
  r.df = (m.live_rows - 1) * (m.live_cols - 1);
  r.p_value = chi_square_sf(r.g, r.df);
  return r;
}

double pearson_chi_square(const ContingencyTable& table) {
  if (table.total() == 0) throw DegenerateTable("table is empty");
  const auto m = live_marginals(table);
  const double n = static_cast<double>(table.total());
  long double sum = 0.0L;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (m.rows[i] == 0) continue;
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (m.cols[j] == 0) continue;
      const double e = static_cast<double>(m.rows[i]) * static_cast<double>(m.cols[j]) / n;
      const double d = static_cast<double>(table(i, j)) - e;
      sum += d * d / e;
    }
  }
  return static_cast<double>(sum);
}

double chi_square_sf(double x, std::size_t df) {
  if (df == 0) throw ValidationError("chi-square needs df >= 1");
  if (!(x >= 0.0)) throw ValidationError("chi-square statistic must be non-negative");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  return boost::math::gamma_q(static_cast<double>(df) / 2.0, x / 2.0);
}

double cramers_v(const ContingencyTable& table) {
  const auto m = live_marginals(table);
  const double chi2 = pearson_chi_square(table);
  const double k = static_cast<double>(std::min(m.live_rows, m.live_cols) - 1);
  return std::sqrt(chi2 / (static_cast<double>(table.total()) * k));
}

double cramers_v_corrected(const ContingencyTable& table) {
  const auto m = live_marginals(table);
  const double n = static_cast<double>(table.total());
  const double r = static_cast<double>(m.live_rows);
  const double c = static_cast<double>(m.live_cols);
  if (n < 2) return 0.0;
  const double phi2 = std::max(0.0, pearson_chi_square(table) / n - (r - 1) * (c - 1) / (n - 1));
  const double rt = r - (r - 1) * (r - 1) / (n - 1);
  const double ct = c - (c - 1) * (c - 1) / (n - 1);
  const double k = std::min(rt, ct) - 1;
  return k > 0 ? std::sqrt(phi2 / k) : 0.0;
}

std::vector<LagAssociation> lagged_association(std::span<const std::uint8_t> symbols,
                                               std::size_t max_lag) {
  if (max_lag == 0) throw ValidationError("max_lag must be positive");
  if (symbols.size() <= max_lag) throw SequenceTooShort(symbols.size(), max_lag);
  std::vector<LagAssociation> out;
  out.reserve(max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) {
    const auto table = build_table(symbols, lag);
    LagAssociation a;
    a.lag = lag;
    a.n = table.total();
    a.cramers_v = cramers_v_corrected(table);
    a.cramers_v_raw = cramers_v(table);
    a.threshold = 1.0 / std::sqrt(static_cast<double>(a.n));
    out.push_back(a);
  }
  return out;
}

std::vector<LagAssociation> lagged_association(const SymbolSequence& seq, std::size_t max_lag) {
  return lagged_association(std::span<const std::uint8_t>(seq.symbols), max_lag);
}

}  // namespace ordertrans
