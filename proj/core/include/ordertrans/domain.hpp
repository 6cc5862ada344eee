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
#include <chrono>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ordertrans {

inline constexpr std::size_t kNumStates = 10;

/// The ten limit-order-book event types. The enumerator value is the
/// canonical matrix index used everywhere in the library.
enum class OrderKind : std::uint8_t { AB, AA, DB, DA, FB, FA, EB, EA, CB, CA };

inline constexpr std::array<OrderKind, kNumStates> kAllOrderKinds = {
    OrderKind::AB, OrderKind::AA, OrderKind::DB, OrderKind::DA, OrderKind::FB,
    OrderKind::FA, OrderKind::EB, OrderKind::EA, OrderKind::CB, OrderKind::CA};

constexpr std::size_t index_of(OrderKind kind) noexcept {
  return static_cast<std::size_t>(kind);
}
OrderKind kind_from_index(std::size_t index);

/// Feed string, e.g. "ADD-BID".
std::string_view wire_name(OrderKind kind) noexcept;
/// Two-letter code, e.g. "AB".
std::string_view code_name(OrderKind kind) noexcept;

/// Exact, case-sensitive match against the ten feed strings.
/// Throws UnknownEventType otherwise.
OrderKind parse_order_kind(std::string_view wire);
std::optional<OrderKind> parse_code_name(std::string_view code) noexcept;

/// Time of day with millisecond resolution.
class TimeOfDay {
 public:
  static constexpr std::int32_t kMillisPerDay = 24 * 3600 * 1000;

  constexpr TimeOfDay() = default;
  static constexpr TimeOfDay from_millis(std::int32_t ms) { return TimeOfDay(ms); }
  static constexpr TimeOfDay from_hms(int h, int m, int s, int ms = 0) {
    return TimeOfDay(((h * 60 + m) * 60 + s) * 1000 + ms);
  }

  /// Accepts "H:MM:SS", "HH:MM:SS" and either with a fractional part.
  /// Digits beyond the third fractional digit are truncated.
  static std::optional<TimeOfDay> parse(std::string_view text) noexcept;

  constexpr std::int32_t millis() const noexcept { return ms_; }
  /// Always "HH:MM:SS.mmm".
  std::string to_string() const;

  constexpr auto operator<=>(const TimeOfDay&) const = default;

 private:
  constexpr explicit TimeOfDay(std::int32_t ms) : ms_(ms) {}
  std::int32_t ms_ = 0;
};

using Date = std::chrono::year_month_day;

/// Strict "YYYY-MM-DD".
std::optional<Date> parse_date(std::string_view text) noexcept;
std::string format_date(const Date& date);

inline constexpr TimeOfDay kSessionOpen = TimeOfDay::from_hms(9, 30, 0);
inline constexpr TimeOfDay kSessionClose = TimeOfDay::from_hms(16, 0, 0);

/// Intraday window, closed on both ends.
struct TimeZoneSpec {
  std::string label;
  TimeOfDay start;
  TimeOfDay end;

  bool contains(TimeOfDay t) const noexcept { return start <= t && t <= end; }
  std::int64_t capacity_ms() const noexcept {
    return static_cast<std::int64_t>(end.millis()) - start.millis() + 1;
  }
  bool operator==(const TimeZoneSpec&) const = default;
};

/// T1..T6 covering 09:30:00.000 through 16:00:00.000.
std::vector<TimeZoneSpec> default_time_zones();

/// Throws ValidationError on empty/inverted/overlapping windows or duplicate labels.
void validate_zones(std::span<const TimeZoneSpec> zones);

std::optional<std::size_t> zone_index(TimeOfDay t, std::span<const TimeZoneSpec> zones) noexcept;
std::optional<TimeZoneSpec> zone_of(TimeOfDay t, std::span<const TimeZoneSpec> zones);

struct CapCategory {
  std::string label;
  std::vector<std::string> tickers;
  bool operator==(const CapCategory&) const = default;
};

/// HMC / MMC / LMC groupings of the NASDAQ100 sample.
std::vector<CapCategory> default_cap_categories();

/// Throws ValidationError if a ticker appears in more than one category.
void validate_categories(std::span<const CapCategory> categories);

std::optional<std::size_t> category_index(std::string_view ticker,
                                          std::span<const CapCategory> categories) noexcept;

/// The twelve sample trading days (six up days, six down days).
std::vector<Date> default_trading_days();

}  // namespace ordertrans
