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

#include <array>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ordertrans/domain.hpp"

namespace ordertrans {

/// One row of the tick feed.
struct OrderEvent {
  Date date;
  TimeOfDay timestamp;
  std::uint64_t order_id = 0;
  OrderKind kind = OrderKind::AB;
  std::string ticker;
  double price = 0.0;
  std::uint64_t quantity = 0;
  std::string exchange;
};

/// Parses a single CSV row. On failure returns nullopt and fills `reason`.
std::optional<OrderEvent> parse_row(std::string_view line, std::string& reason);

struct MalformedRow {
  std::size_t line = 0;
  std::string reason;
};

struct ParseOptions {
  std::optional<std::set<std::string>> tickers;  // keep only these, when set
  std::optional<std::string> exchange;           // keep only this exchange, when set
  std::optional<std::set<Date>> days;            // keep only these days, when set
  std::size_t max_errors = 1000;                 // abort once exceeded
  std::size_t max_recorded_errors = 100;         // detail kept in the report
};

struct ParseReport {
  std::size_t lines = 0;         // physical lines read
  std::size_t header_lines = 0;  // leading non-data line, if any
  std::size_t blank_lines = 0;
  std::size_t rows = 0;          // data rows seen = accepted + filtered + malformed
  std::size_t accepted = 0;
  std::size_t filtered = 0;
  std::size_t malformed = 0;
  std::vector<MalformedRow> errors;  // first max_recorded_errors malformed rows
};

/// Pull parser over a tick-feed CSV stream. Holds one line at a time.
///
/// The first line is treated as a header when its first field is not a
/// YYYY-MM-DD date; every later line must be data.
class EventReader {
 public:
  explicit EventReader(std::istream& in, ParseOptions options = {});

  /// Next accepted event in file order, or nullopt at end of stream.
  /// Throws TooManyMalformedRows once more than max_errors rows fail.
  std::optional<OrderEvent> next();

  /// 1-based line number of the most recently returned event.
  std::size_t line() const noexcept { return line_of_last_; }
  const ParseReport& report() const noexcept { return report_; }

 private:
  std::istream& in_;
  ParseOptions options_;
  ParseReport report_;
  std::string buffer_;
  std::size_t line_of_last_ = 0;
};

/// Ordered state indices for one (ticker, day, zone).
struct SymbolSequence {
  std::string ticker;
  Date date;
  std::string zone;
  std::vector<std::uint8_t> symbols;
};

struct SequenceKey {
  std::string ticker;
  Date date;
  std::string zone;

  auto operator<=>(const SequenceKey&) const = default;
  bool operator==(const SequenceKey&) const = default;
};

using SequenceMap = std::map<SequenceKey, SymbolSequence>;

/// Checks per-(ticker, day) timestamp order and maps events onto zones.
class SessionRouter {
 public:
  explicit SessionRouter(std::vector<TimeZoneSpec> zones);

  /// Zone index of the event, or nullopt when it falls outside every zone.
  /// Throws OutOfOrderTimestamp if the event precedes the previous event of
  /// the same ticker and day.
  std::optional<std::size_t> route(const OrderEvent& event, std::size_t line);

  const std::vector<TimeZoneSpec>& zones() const noexcept { return zones_; }
  std::size_t routed() const noexcept { return routed_; }
  std::size_t out_of_session() const noexcept { return out_of_session_; }

 private:
  std::vector<TimeZoneSpec> zones_;
  std::map<std::pair<std::string, Date>, TimeOfDay> last_seen_;
  std::size_t routed_ = 0;
  std::size_t out_of_session_ = 0;
};

struct SegmentStats {
  std::size_t segmented = 0;
  std::size_t out_of_session = 0;
};

/// Drains the reader into per-(ticker, day, zone) sequences.
SequenceMap segment(EventReader& reader, const std::vector<TimeZoneSpec>& zones,
                    SegmentStats* stats = nullptr);
SequenceMap segment(const std::vector<OrderEvent>& events,
                    const std::vector<TimeZoneSpec>& zones, SegmentStats* stats = nullptr);

using KindCounts = std::array<std::uint64_t, kNumStates>;

/// Per-kind totals grouped by category label. Tickers outside every category
/// are reported under kUncategorized.
inline constexpr std::string_view kUncategorized = "OTHER";
std::map<std::string, KindCounts> count_orders(const SequenceMap& sequences,
                                               std::span<const CapCategory> categories);
KindCounts count_kinds(const SymbolSequence& sequence);

/// Writes `<stem>.seq` (one state index per line) and `<stem>.json`
/// ({ticker, date, zone, length}) into `dir`; returns the .seq path.
std::filesystem::path write_sequence_file(const std::filesystem::path& dir,
                                          const SymbolSequence& sequence);
SymbolSequence read_sequence_file(const std::filesystem::path& seq_path);

}  // namespace ordertrans
