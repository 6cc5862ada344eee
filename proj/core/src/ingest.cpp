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

#include "ordertrans/ingest.hpp"

#include <charconv>
#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "ordertrans/error.hpp"

namespace ordertrans {
namespace {

constexpr std::size_t kColumns = 8;

std::string_view first_field(std::string_view line) {
  return line.substr(0, line.find(','));
}

template <typename Int>
bool parse_uint(std::string_view text, Int& out) {
  if (text.empty() || text[0] == '-' || text[0] == '+') return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc() && ptr == text.data() + text.size();
}

}  // namespace

std::optional<OrderEvent> parse_row(std::string_view line, std::string& reason) {
  std::array<std::string_view, kColumns> f;
  std::size_t n = 0;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    if (n == kColumns) {
      reason = "expected 8 columns, found more";
      return std::nullopt;
    }
    f[n++] = line.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  if (n != kColumns) {
    reason = "expected 8 columns, found " + std::to_string(n);
    return std::nullopt;
  }

  OrderEvent ev;
  auto date = parse_date(f[0]);
  if (!date) {
    reason = "bad date '" + std::string(f[0]) + "'";
    return std::nullopt;
  }
  ev.date = *date;

  auto ts = TimeOfDay::parse(f[1]);
  if (!ts) {
    reason = "bad timestamp '" + std::string(f[1]) + "'";
    return std::nullopt;
  }
  ev.timestamp = *ts;

  if (!parse_uint(f[2], ev.order_id)) {
    reason = "bad order id '" + std::string(f[2]) + "'";
    return std::nullopt;
  }

  try {
    ev.kind = parse_order_kind(f[3]);
  } catch (const UnknownEventType& e) {
    reason = e.what();
    return std::nullopt;
  }

  if (f[4].empty()) {
    reason = "empty ticker";
    return std::nullopt;
  }
  ev.ticker = std::string(f[4]);

  {
    const auto p = f[5];
    auto [ptr, ec] = std::from_chars(p.data(), p.data() + p.size(), ev.price);
    if (p.empty() || ec != std::errc() || ptr != p.data() + p.size() || !std::isfinite(ev.price) ||
        ev.price < 0.0) {
      reason = "bad price '" + std::string(p) + "'";
      return std::nullopt;
    }
  }

  if (!parse_uint(f[6], ev.quantity) || ev.quantity < 1) {
    reason = "bad quantity '" + std::string(f[6]) + "'";
    return std::nullopt;
  }

  ev.exchange = std::string(f[7]);
  return ev;
}

EventReader::EventReader(std::istream& in, ParseOptions options)
    : in_(in), options_(std::move(options)) {}

std::optional<OrderEvent> EventReader::next() {
  while (std::getline(in_, buffer_)) {
    ++report_.lines;
    std::string_view line = buffer_;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      ++report_.blank_lines;
      continue;
    }
    if (report_.rows == 0 && report_.header_lines == 0 && !parse_date(first_field(line))) {
      ++report_.header_lines;
      continue;
    }

    ++report_.rows;
    std::string reason;
    auto ev = parse_row(line, reason);
    if (!ev) {
      ++report_.malformed;
      if (report_.errors.size() < options_.max_recorded_errors)
        report_.errors.push_back({report_.lines, reason});
      if (report_.malformed > options_.max_errors)
        throw TooManyMalformedRows(report_.malformed, report_.lines, reason);
      continue;
    }
    if ((options_.tickers && !options_.tickers->contains(ev->ticker)) ||
        (options_.exchange && *options_.exchange != ev->exchange) ||
        (options_.days && !options_.days->contains(ev->date))) {
      ++report_.filtered;
      continue;
    }
    ++report_.accepted;
    line_of_last_ = report_.lines;
    return ev;
  }
  return std::nullopt;
}

SessionRouter::SessionRouter(std::vector<TimeZoneSpec> zones) : zones_(std::move(zones)) {
  validate_zones(zones_);
}

std::optional<std::size_t> SessionRouter::route(const OrderEvent& event, std::size_t line) {
  auto key = std::make_pair(event.ticker, event.date);
  auto it = last_seen_.find(key);
  if (it == last_seen_.end()) {
    last_seen_.emplace(std::move(key), event.timestamp);
  } else {
    if (event.timestamp < it->second)
      throw OutOfOrderTimestamp(event.ticker, format_date(event.date), line);
    it->second = event.timestamp;
  }

  auto zone = zone_index(event.timestamp, zones_);
  if (zone)
    ++routed_;
  else
    ++out_of_session_;
  return zone;
}

namespace {

void append(SequenceMap& out, const SessionRouter& router, const OrderEvent& ev,
            std::size_t zone) {
  SequenceKey key{ev.ticker, ev.date, router.zones()[zone].label};
  auto it = out.find(key);
  if (it == out.end()) {
    SymbolSequence seq{key.ticker, key.date, key.zone, {}};
    it = out.emplace(std::move(key), std::move(seq)).first;
  }
  it->second.symbols.push_back(static_cast<std::uint8_t>(index_of(ev.kind)));
}

}  // namespace

SequenceMap segment(EventReader& reader, const std::vector<TimeZoneSpec>& zones,
                    SegmentStats* stats) {
  SessionRouter router(zones);
  SequenceMap out;
  while (auto ev = reader.next()) {
    if (auto zone = router.route(*ev, reader.line())) append(out, router, *ev, *zone);
  }
  if (stats) *stats = {router.routed(), router.out_of_session()};
  return out;
}

SequenceMap segment(const std::vector<OrderEvent>& events,
                    const std::vector<TimeZoneSpec>& zones, SegmentStats* stats) {
  SessionRouter router(zones);
  SequenceMap out;
  for (std::size_t i = 0; i < events.size(); ++i) {
    if (auto zone = router.route(events[i], i + 1)) append(out, router, events[i], *zone);
  }
  if (stats) *stats = {router.routed(), router.out_of_session()};
  return out;
}

KindCounts count_kinds(const SymbolSequence& sequence) {
  KindCounts counts{};
  for (auto s : sequence.symbols) {
    if (s >= kNumStates) throw DataError("state index out of range: " + std::to_string(s));
    ++counts[s];
  }
  return counts;
}

std::map<std::string, KindCounts> count_orders(const SequenceMap& sequences,
                                               std::span<const CapCategory> categories) {
  std::map<std::string, KindCounts> out;
  for (const auto& c : categories) out[c.label] = KindCounts{};
  for (const auto& [key, seq] : sequences) {
    const auto cat = category_index(key.ticker, categories);
    auto& bucket = out[cat ? categories[*cat].label : std::string(kUncategorized)];
    const auto counts = count_kinds(seq);
    for (std::size_t k = 0; k < kNumStates; ++k) bucket[k] += counts[k];
  }
  return out;
}

std::filesystem::path write_sequence_file(const std::filesystem::path& dir,
                                          const SymbolSequence& sequence) {
  std::filesystem::create_directories(dir);
  const std::string stem = sequence.ticker + "_" + format_date(sequence.date) + "_" + sequence.zone;
  const auto seq_path = dir / (stem + ".seq");
  {
    std::ofstream out(seq_path, std::ios::binary);
    if (!out) throw DataError("cannot write " + seq_path.string());
    std::string buf;
    buf.reserve(sequence.symbols.size() * 2);
    for (auto s : sequence.symbols) {
      buf += static_cast<char>('0' + s);
      buf += '\n';
    }
    out << buf;
  }
  nlohmann::ordered_json meta;
  meta["ticker"] = sequence.ticker;
  meta["date"] = format_date(sequence.date);
  meta["zone"] = sequence.zone;
  meta["length"] = sequence.symbols.size();
  std::ofstream(dir / (stem + ".json"), std::ios::binary) << meta.dump(2) << '\n';
  return seq_path;
}

SymbolSequence read_sequence_file(const std::filesystem::path& seq_path) {
  auto json_path = seq_path;
  json_path.replace_extension(".json");
  std::ifstream meta_in(json_path);
  if (!meta_in) throw DataError("missing sidecar " + json_path.string());
  const auto meta = nlohmann::json::parse(meta_in);

  SymbolSequence seq;
  seq.ticker = meta.at("ticker").get<std::string>();
  auto date = parse_date(meta.at("date").get<std::string>());
  if (!date) throw DataError(json_path.string() + ": bad date");
  seq.date = *date;
  seq.zone = meta.at("zone").get<std::string>();

  std::ifstream in(seq_path);
  if (!in) throw DataError("cannot read " + seq_path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    unsigned v = 0;
    if (!parse_uint(std::string_view(line), v) || v >= kNumStates)
      throw DataError(seq_path.string() + ": bad state '" + line + "'");
    seq.symbols.push_back(static_cast<std::uint8_t>(v));
  }
  if (seq.symbols.size() != meta.at("length").get<std::size_t>())
    throw DataError(seq_path.string() + ": length disagrees with sidecar");
  return seq;
}

}  // namespace ordertrans
