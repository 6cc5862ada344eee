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

#include "ordertrans/domain.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <set>

#include "ordertrans/error.hpp"

namespace ordertrans {
namespace {

struct KindNames {
  std::string_view code;
  std::string_view wire;
};

constexpr std::array<KindNames, kNumStates> kNames = {{
    {"AB", "ADD-BID"},
    {"AA", "ADD-ASK"},
    {"DB", "DELETE-BID"},
    {"DA", "DELETE-ASK"},
    {"FB", "FILL-BID"},
    {"FA", "FILL-ASK"},
    {"EB", "EXECUTE-BID"},
    {"EA", "EXECUTE-ASK"},
    {"CB", "CANCEL-BID"},
    {"CA", "CANCEL-ASK"},
}};

bool parse_digits(std::string_view text, int& out) noexcept {
  if (text.empty()) return false;
  for (char c : text)
    if (c < '0' || c > '9') return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

OrderKind kind_from_index(std::size_t index) {
  if (index >= kNumStates) throw DataError("state index out of range: " + std::to_string(index));
  return static_cast<OrderKind>(index);
}

std::string_view wire_name(OrderKind kind) noexcept { return kNames[index_of(kind)].wire; }

std::string_view code_name(OrderKind kind) noexcept { return kNames[index_of(kind)].code; }

OrderKind parse_order_kind(std::string_view wire) {
  for (std::size_t i = 0; i < kNumStates; ++i)
    if (kNames[i].wire == wire) return static_cast<OrderKind>(i);
  throw UnknownEventType(std::string(wire));
}

std::optional<OrderKind> parse_code_name(std::string_view code) noexcept {
  for (std::size_t i = 0; i < kNumStates; ++i)
    if (kNames[i].code == code) return static_cast<OrderKind>(i);
  return std::nullopt;
}

std::optional<TimeOfDay> TimeOfDay::parse(std::string_view text) noexcept {
  // H:MM:SS[.fff...] or HH:MM:SS[.fff...]
  const auto c1 = text.find(':');
  if (c1 == std::string_view::npos || c1 < 1 || c1 > 2) return std::nullopt;
  if (text.size() < c1 + 6 || text[c1 + 3] != ':') return std::nullopt;

  int h = 0, m = 0, s = 0;
  if (!parse_digits(text.substr(0, c1), h)) return std::nullopt;
  if (!parse_digits(text.substr(c1 + 1, 2), m)) return std::nullopt;
  if (!parse_digits(text.substr(c1 + 4, 2), s)) return std::nullopt;
  if (h > 23 || m > 59 || s > 59) return std::nullopt;

  int ms = 0;
  auto rest = text.substr(c1 + 6);
  if (!rest.empty()) {
    if (rest[0] != '.' || rest.size() < 2 || rest.size() > 10) return std::nullopt;
    rest.remove_prefix(1);
    int scale = 100;
    for (std::size_t i = 0; i < rest.size(); ++i) {
      const char c = rest[i];
      if (c < '0' || c > '9') return std::nullopt;
      if (i < 3) {
        ms += (c - '0') * scale;
        scale /= 10;
      }
    }
  }
  return TimeOfDay::from_hms(h, m, s, ms);
}

std::string TimeOfDay::to_string() const {
  char buf[48];
  const int h = ms_ / 3'600'000;
  const int m = (ms_ / 60'000) % 60;
  const int s = (ms_ / 1000) % 60;
  const int f = ms_ % 1000;
  std::snprintf(buf, sizeof buf, "%02d:%02d:%02d.%03d", h, m, s, f);
  return buf;
}

std::optional<Date> parse_date(std::string_view text) noexcept {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  int y = 0, m = 0, d = 0;
  if (!parse_digits(text.substr(0, 4), y) || !parse_digits(text.substr(5, 2), m) ||
      !parse_digits(text.substr(8, 2), d))
    return std::nullopt;
  const Date date{std::chrono::year{y}, std::chrono::month{static_cast<unsigned>(m)},
                  std::chrono::day{static_cast<unsigned>(d)}};
  if (!date.ok()) return std::nullopt;
  return date;
}

std::string format_date(const Date& date) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()), static_cast<unsigned>(date.day()));
  return buf;
}

std::vector<TimeZoneSpec> default_time_zones() {
  using T = TimeOfDay;
  return {
      {"T1", T::from_hms(9, 30, 0, 0), T::from_hms(10, 29, 59, 999)},
      {"T2", T::from_hms(10, 30, 0, 0), T::from_hms(11, 29, 59, 999)},
      {"T3", T::from_hms(11, 30, 0, 0), T::from_hms(12, 44, 59, 999)},
      {"T4", T::from_hms(12, 45, 0, 0), T::from_hms(13, 59, 59, 999)},
      {"T5", T::from_hms(14, 0, 0, 0), T::from_hms(14, 59, 59, 999)},
      {"T6", T::from_hms(15, 0, 0, 0), T::from_hms(16, 0, 0, 0)},
  };
}

void validate_zones(std::span<const TimeZoneSpec> zones) {
  if (zones.empty()) throw ValidationError("zones: at least one time-zone is required");
  std::set<std::string> labels;
  for (std::size_t i = 0; i < zones.size(); ++i) {
    const auto& z = zones[i];
    const std::string path = "zones[" + std::to_string(i) + "]";
    if (z.label.empty()) throw ValidationError(path + ".label: must be non-empty");
    if (!labels.insert(z.label).second)
      throw ValidationError(path + ".label: duplicate label '" + z.label + "'");
    if (z.end < z.start) throw ValidationError(path + ": end precedes start");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& o = zones[j];
      if (z.start <= o.end && o.start <= z.end)
        throw ValidationError(path + ": overlaps zone '" + o.label + "'");
    }
  }
}

std::optional<std::size_t> zone_index(TimeOfDay t, std::span<const TimeZoneSpec> zones) noexcept {
  for (std::size_t i = 0; i < zones.size(); ++i)
    if (zones[i].contains(t)) return i;
  return std::nullopt;
}

std::optional<TimeZoneSpec> zone_of(TimeOfDay t, std::span<const TimeZoneSpec> zones) {
  if (auto i = zone_index(t, zones)) return zones[*i];
  return std::nullopt;
}

std::vector<CapCategory> default_cap_categories() {
  return {
      {"HMC", {"AMZN", "JNJ", "JPM", "MSFT", "XOM"}},
      {"MMC", {"ABBV", "HSBC", "NFLX", "ORCL", "PEP"}},
      {"LMC", {"AVGO", "BKNG", "BMY", "NKE", "UNP"}},
  };
}

void validate_categories(std::span<const CapCategory> categories) {
  std::set<std::string> labels;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const auto& c = categories[i];
    const std::string path = "categories[" + std::to_string(i) + "]";
    if (c.label.empty()) throw ValidationError(path + ".label: must be non-empty");
    if (!labels.insert(c.label).second)
      throw ValidationError(path + ".label: duplicate label '" + c.label + "'");
    for (const auto& t : c.tickers)
      if (!seen.insert(t).second)
        throw ValidationError(path + ".tickers: '" + t + "' already belongs to another category");
  }
}

std::optional<std::size_t> category_index(std::string_view ticker,
                                          std::span<const CapCategory> categories) noexcept {
  for (std::size_t i = 0; i < categories.size(); ++i) {
    const auto& ts = categories[i].tickers;
    if (std::find(ts.begin(), ts.end(), ticker) != ts.end()) return i;
  }
  return std::nullopt;
}

std::vector<Date> default_trading_days() {
  using namespace std::chrono;
  return {
      2018y / November / 7,  2018y / November / 9,  2018y / November / 12,
      2018y / November / 14, 2018y / November / 15, 2018y / November / 28,
      2018y / December / 4,  2018y / December / 6,  2018y / December / 7,
      2018y / December / 10, 2018y / December / 21, 2018y / December / 26,
  };
}

}  // namespace ordertrans
