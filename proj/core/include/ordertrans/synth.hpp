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
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordertrans/domain.hpp"
#include "ordertrans/dtmc.hpp"
#include "ordertrans/ingest.hpp"

namespace ordertrans {

/// Portable seeded generator: std::mt19937_64 (its output sequence is fixed
/// by the standard) with hand-rolled conversions, since the standard
/// distributions differ between library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n);
  /// Standard normal via Box-Muller.
  double normal();

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_;
};

/// splitmix64 of (master, stream): independent per-task seeds.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept;

/// Draws a sequence from the chain. The first state comes from the stationary
/// distribution unless `start` is given. Throws NotErgodic.
SymbolSequence simulate(const TransitionMatrix& p, std::size_t n, std::uint64_t seed,
                        std::optional<std::size_t> start = std::nullopt);

/// Strictly positive row-stochastic matrix with Dirichlet(1) rows.
TransitionMatrix random_ergodic_tpm(std::size_t states, Rng& rng);

/// Writes one feed row in the vendor layout (hour without a leading zero).
void write_event_row(std::ostream& out, const OrderEvent& event);
inline constexpr std::string_view kCsvHeader =
    "Date,Timestamp,OrderId,EventType,Ticker,Price,Quantity,Exchange";

/// One feed row per symbol, timestamps strictly increasing and spread evenly
/// over the zone. Throws ZoneTooShort when the zone has fewer milliseconds
/// than symbols.
void render_csv(std::ostream& out, const SymbolSequence& seq, const std::string& ticker,
                const Date& date, const TimeZoneSpec& zone, std::uint64_t seed,
                const std::string& exchange = "NASDAQ");

/// Ground truth for a synthetic corpus: one TPM per (category, zone).
struct SynthManifest {
  std::uint64_t seed = 20181106;
  std::size_t events_per_sequence = 2000;
  std::size_t off_session_events = 2;  // per ticker-day, before the open and after the close
  std::string exchange = "NASDAQ";
  std::vector<TimeZoneSpec> zones;
  std::vector<CapCategory> categories;
  std::vector<Date> days;
  std::map<std::pair<std::string, std::string>, TransitionMatrix> tpms;

  const TransitionMatrix& tpm(const std::string& category, const std::string& zone) const;
};

/// Builds order-flow-like ground-truth TPMs: a dominant add/delete block,
/// rare fill/execute/cancel states, category-specific departures in the first
/// and last zone and small perturbations elsewhere.
SynthManifest make_manifest(std::vector<CapCategory> categories, std::vector<TimeZoneSpec> zones,
                            std::vector<Date> days, std::uint64_t seed,
                            std::size_t events_per_sequence);

nlohmann::ordered_json manifest_to_json(const SynthManifest& manifest);
SynthManifest manifest_from_json(const nlohmann::json& j);

/// Writes `orders_<date>.csv` per day into `dir` and returns the paths.
/// Each file carries the header row, then ticker blocks in category order.
std::vector<std::filesystem::path> write_corpus(const SynthManifest& manifest,
                                                const std::filesystem::path& dir);

}  // namespace ordertrans
