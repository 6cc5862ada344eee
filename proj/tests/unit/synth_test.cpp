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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "fixtures.hpp"
#include "ordertrans/dtmc.hpp"
#include "ordertrans/error.hpp"
#include "ordertrans/independence.hpp"
#include "ordertrans/ingest.hpp"
#include "ordertrans/synth.hpp"

using namespace ordertrans;
using namespace std::chrono;

namespace {

const TimeZoneSpec& t1() {
  static const auto zones = default_time_zones();
  return zones[0];
}

std::string render(const SymbolSequence& seq, std::uint64_t seed) {
  std::ostringstream out;
  render_csv(out, seq, "MSFT", 2018y / November / 7, t1(), seed);
  return out.str();
}

std::vector<OrderEvent> read_all(const std::string& text) {
  std::istringstream in(text);
  EventReader reader(in);
  std::vector<OrderEvent> events;
  while (auto e = reader.next()) events.push_back(*e);
  REQUIRE(reader.report().malformed == 0);
  return events;
}

// Pearson goodness of fit of each visited row against the generating row.
double row_gof_p(const TransitionMatrix& p, const CountMatrix& c) {
  double stat = 0;
  std::size_t df = 0;
  for (std::size_t i = 0; i < p.states(); ++i) {
    const auto n = c.row_total(i);
    if (n == 0) continue;
    for (std::size_t j = 0; j < p.states(); ++j) {
      const double e = static_cast<double>(n) * p(i, j);
      const double d = static_cast<double>(c(i, j)) - e;
      stat += d * d / e;
    }
    df += p.states() - 1;
  }
  return chi_square_sf(stat, df);
}

}  // namespace

TEST_CASE("generator") {
  SUBCASE("mt19937_64 reference output") {
    Rng rng(5489);
    std::uint64_t v = 0;
    for (int i = 0; i < 10000; ++i) v = rng.next();
    CHECK(v == 9981545732273789042ULL);
  }
  SUBCASE("uniform, below and normal") {
    Rng rng(1);
    double sum = 0, sq = 0;
    std::vector<int> bins(7, 0);
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      REQUIRE(u >= 0.0);
      REQUIRE(u < 1.0);
      const auto b = rng.below(7);
      REQUIRE(b < 7);
      ++bins[b];
      const double z = rng.normal();
      sum += z;
      sq += z * z;
    }
    CHECK(std::abs(sum / n) < 0.01);
    CHECK(std::abs(sq / n - 1.0) < 0.02);
    for (int c : bins) CHECK(std::abs(c - n / 7.0) < 5 * std::sqrt(n / 7.0));
    CHECK(rng.below(1) == 0);
  }
  SUBCASE("derived seeds") {
    CHECK(derive_seed(1, 2) == derive_seed(1, 2));
    std::set<std::uint64_t> seen;
    for (std::uint64_t m = 0; m < 10; ++m)
      for (std::uint64_t s = 0; s < 100; ++s) seen.insert(derive_seed(m, s));
    CHECK(seen.size() == 1000);
  }
  SUBCASE("random ergodic matrices") {
    Rng rng(2);
    for (int t = 0; t < 20; ++t) {
      const auto p = random_ergodic_tpm(kNumStates, rng);
      for (std::size_t i = 0; i < kNumStates; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < kNumStates; ++j) {
          CHECK(p(i, j) > 0.0);
          s += p(i, j);
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
}

TEST_CASE("simulate") {
  CHECK_THROWS_AS(simulate(TransitionMatrix::from_rows({{1, 0}, {0.5, 0.5}}), 10, 1), NotErgodic);
  CHECK_THROWS_AS(simulate(TransitionMatrix::from_rows({{0, 1}, {1, 0}}), 10, 1), NotErgodic);

  const auto half = TransitionMatrix::from_rows({{0.5, 0.5}, {0.5, 0.5}});
  const auto seq = simulate(half, 1'000'000, 3);
  REQUIRE(seq.symbols.size() == 1'000'000);
  const double ones = static_cast<double>(std::count(seq.symbols.begin(), seq.symbols.end(), 1));
  CHECK(std::abs(ones / 1e6 - 0.5) <= 0.002);

  const auto p = fixtures::random_tpm(kNumStates, 9);
  const auto pi = stationary(p).pi;
  const auto q = estimate(accumulate(simulate(p, 1'000'000, 4)));
  for (std::size_t i = 0; i < kNumStates; ++i)
    if (pi[i] >= 0.01)
      for (std::size_t j = 0; j < kNumStates; ++j) CHECK(std::abs(q(i, j) - p(i, j)) < 0.01);

  const auto started = simulate(p, 1, 5, 7);
  CHECK(started.symbols == std::vector<std::uint8_t>{7});
  CHECK(simulate(p, 50, 6, 2).symbols[0] == 2);
  CHECK_THROWS(simulate(p, 5, 6, 10));
  CHECK_THROWS(simulate(p, 0, 6));
}

TEST_CASE("simulation is deterministic per seed") {
  const auto p = fixtures::random_tpm(kNumStates, 10);
  const auto a = simulate(p, 5000, 11), b = simulate(p, 5000, 11), c = simulate(p, 5000, 12);
  CHECK(a.symbols == b.symbols);
  CHECK(a.symbols != c.symbols);
  CHECK(render(a, 1) == render(b, 1));
  CHECK(render(a, 1) != render(a, 2));
}

TEST_CASE("row frequencies fit the generating chain") {
  const auto p = fixtures::random_tpm(kNumStates, 13);
  int passed = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep)
    if (row_gof_p(p, accumulate(simulate(p, 1'000'000, derive_seed(13, rep)))) >= 0.01) ++passed;
  CHECK(passed >= 98);
}

TEST_CASE("rendered feed rows") {
  SymbolSequence seq;
  seq.symbols = {0, 4, 9};
  const auto events = read_all(render(seq, 1));
  REQUIRE(events.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(events[i].kind == kind_from_index(seq.symbols[i]));
    CHECK(t1().contains(events[i].timestamp));
    CHECK(events[i].ticker == "MSFT");
    CHECK(events[i].exchange == "NASDAQ");
    CHECK(events[i].price > 0.0);
    CHECK(events[i].quantity > 0);
    if (i > 0) CHECK(events[i - 1].timestamp < events[i].timestamp);
  }
  CHECK(render(seq, 1).substr(0, kCsvHeader.size()) != kCsvHeader);
}

TEST_CASE("rendered feed reproduces the pair counts exactly") {
  const auto seq = simulate(fixtures::random_tpm(kNumStates, 14), 100'000, 15);
  const auto text = render(seq, 16);
  std::istringstream in(text);
  EventReader reader(in);
  SegmentStats stats;
  const auto map = segment(reader, default_time_zones(), &stats);
  REQUIRE(map.size() == 1);
  CHECK(stats.segmented == 100'000);
  CHECK(stats.out_of_session == 0);
  const auto& back = map.begin()->second;
  CHECK(back.zone == "T1");
  CHECK(back.symbols == seq.symbols);
  CHECK(accumulate(back) == accumulate(seq));
}

TEST_CASE("zone capacity") {
  CHECK(t1().capacity_ms() == 3'600'000);
  SymbolSequence seq;
  seq.symbols.assign(3'600'001, 0);
  std::ostringstream sink;
  CHECK_THROWS_AS(render_csv(sink, seq, "MSFT", 2018y / November / 7, t1(), 1), ZoneTooShort);
  CHECK(sink.str().empty());

  seq.symbols.pop_back();
  std::ofstream devnull("/dev/null");
  CHECK_NOTHROW(render_csv(devnull, seq, "MSFT", 2018y / November / 7, t1(), 1));
}

TEST_CASE("manifest") {
  const auto days = std::vector<Date>{2018y / November / 7, 2018y / November / 9};
  const auto m = make_manifest(default_cap_categories(), default_time_zones(), days, 77, 300);
  CHECK(m.tpms.size() == 18);
  for (const auto& [key, p] : m.tpms) CHECK(classify(p).kind == ChainClass::kErgodic);
  CHECK(m.tpm("HMC", "T1") == m.tpms.at({"HMC", "T1"}));
  CHECK_THROWS(m.tpm("XYZ", "T1"));

  const auto again = make_manifest(default_cap_categories(), default_time_zones(), days, 77, 300);
  CHECK(again.tpms == m.tpms);
  const auto other = make_manifest(default_cap_categories(), default_time_zones(), days, 78, 300);
  CHECK(other.tpms != m.tpms);

  const auto back = manifest_from_json(nlohmann::json::parse(manifest_to_json(m).dump()));
  CHECK(back.tpms == m.tpms);
  CHECK(back.seed == 77);
  CHECK(back.events_per_sequence == 300);
  CHECK(back.days == days);
  CHECK(manifest_to_json(back) == manifest_to_json(m));
}

TEST_CASE("corpus files") {
  const auto dir = std::filesystem::temp_directory_path() / "ordertrans_synth_corpus";
  std::filesystem::remove_all(dir);
  const auto days = std::vector<Date>{2018y / November / 7, 2018y / November / 9};
  const auto m = make_manifest(default_cap_categories(), default_time_zones(), days, 5, 200);
  const auto files = write_corpus(m, dir);
  REQUIRE(files.size() == 2);
  CHECK(files[0].filename() == "orders_2018-11-07.csv");

  std::size_t sequences = 0;
  for (const auto& f : files) {
    std::ifstream in(f);
    EventReader reader(in);
    SegmentStats stats;
    const auto map = segment(reader, m.zones, &stats);
    CHECK(reader.report().header_lines == 1);
    CHECK(reader.report().malformed == 0);
    CHECK(stats.out_of_session == 15 * 2 * m.off_session_events);
    for (const auto& [key, seq] : map) CHECK(seq.symbols.size() == 200);
    sequences += map.size();
  }
  CHECK(sequences == 2 * 15 * 6);

  // Same manifest, same bytes.
  const auto dir2 = dir.string() + "_again";
  std::filesystem::remove_all(dir2);
  const auto files2 = write_corpus(m, dir2);
  for (std::size_t i = 0; i < files.size(); ++i) {
    std::ifstream a(files[i]), b(files2[i]);
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
  }
  std::filesystem::remove_all(dir);
  std::filesystem::remove_all(dir2);
}
