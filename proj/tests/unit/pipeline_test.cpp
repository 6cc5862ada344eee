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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "ordertrans/error.hpp"
#include "ordertrans/pipeline.hpp"

using namespace ordertrans;
namespace fs = std::filesystem;
using namespace std::chrono;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("ordertrans_pipeline_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string emit(const CsvTable& t) {
  std::ostringstream out;
  write_csv(out, t);
  return out.str();
}

// Re-emits a bundle CSV through the reader matching its file name.
std::string reemit(const fs::path& p) {
  const auto table = read_csv_file(p);
  const auto name = p.filename().string();
  auto starts = [&](std::string_view s) { return name.rfind(s, 0) == 0; };
  if (name == "gtest.csv") return emit(gtest_csv(gtest_from_csv(table)));
  if (name == "lags.csv") return emit(lag_csv(lag_from_csv(table)));
  if (name == "order_counts.csv") return emit(order_counts_csv(order_counts_from_csv(table)));
  if (name == "doi.csv" || name == "stationary.csv") return emit(labeled_vectors_csv(labeled_vectors_from_csv(table)));
  if (name == "transitions.csv") return emit(pair_series_csv(pair_series_from_csv(table)));
  if (name == "pca_spectrum.csv") return emit(pca_spectrum_csv(pca_spectrum_from_csv(table)));
  if (starts("jsd_")) return emit(lower_triangular_csv(lower_triangular_from_csv(table)));
  if (starts("pca_scores_")) return emit(scores_csv(scores_from_csv(table)));
  if (starts("clusters_")) return emit(clusters_csv(clusters_from_csv(table)));
  if (p.parent_path().filename() == "tpm" && name.find("heatmap") == std::string::npos)
    return emit(tpm_long_csv(tpm_from_long_csv(table)));
  return emit(table);
}

std::map<std::string, std::string> bundle_files(const fs::path& root) {
  std::map<std::string, std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) out[fs::relative(e.path(), root).generic_string()] = slurp(e.path());
  return out;
}

std::string without_timestamp(const std::string& run_json) {
  std::istringstream in(run_json);
  std::string line, out;
  while (std::getline(in, line))
    if (line.find("\"generated_at\"") == std::string::npos) out += line + "\n";
  return out;
}

PipelineConfig small_config() {
  PipelineConfig c;
  c.days = std::vector<Date>{2018y / November / 7, 2018y / December / 21};
  c.events_per_sequence = 500;
  return c;
}

}  // namespace

TEST_CASE("configuration") {
  SUBCASE("defaults") {
    const PipelineConfig c;
    CHECK_NOTHROW(c.validate());
    CHECK(c.days->size() == 12);
    CHECK(c.dbscan.eps == 3.95);
    CHECK(c.dbscan.min_pts == 3);
    CHECK(c.pca_k == 2);
    CHECK(c.pca_mode == PcaMode::kPooled);
    CHECK(c.zones.size() == 6);
    CHECK(c.categories.size() == 3);
  }
  SUBCASE("json round trip") {
    auto c = small_config();
    c.tickers = std::set<std::string>{"MSFT", "NKE"};
    c.exchange = "NASDAQ";
    c.pca_mode = PcaMode::kPerCategory;
    const auto j = config_to_json(c);
    const auto back = config_from_json(nlohmann::json::parse(j.dump()));
    CHECK(config_to_json(back) == j);
    CHECK(back.days == c.days);
    CHECK(back.tickers == c.tickers);

    CHECK_FALSE(config_from_json(nlohmann::json{{"days", "all"}}).days.has_value());
    const auto rel = config_from_json(nlohmann::json{{"inputs", {"a.csv"}}}, "/data");
    CHECK(rel.inputs.front() == fs::path("/data/a.csv"));
  }
  SUBCASE("empty day list") {
    auto c = small_config();
    c.days = std::vector<Date>{};
    CHECK_THROWS_AS(c.validate(), ValidationError);
    CHECK_THROWS_AS(config_from_json(nlohmann::json{{"days", nlohmann::json::array()}}), ValidationError);
    CHECK_THROWS_AS(run_pipeline(c, scratch("empty_days")), ValidationError);
  }
  SUBCASE("errors name the field") {
    auto message = [](const nlohmann::json& j) {
      try {
        config_from_json(j);
      } catch (const ValidationError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(message({{"colour", 1}}).find("config.colour") != std::string::npos);
    CHECK(message({{"dbscan", {{"eps", -1.0}}}}).find("config.dbscan.eps") != std::string::npos);
    CHECK(message({{"dbscan", {{"radius", 1.0}}}}).find("config.dbscan.radius") != std::string::npos);
    CHECK(message({{"pca", {{"mode", "both"}}}}).find("config.pca.mode") != std::string::npos);
    CHECK(message({{"days", {"2018-11-07", "2018-13-01"}}}).find("config.days[1]") != std::string::npos);
    CHECK(message({{"seed", "x"}}).find("config.seed") != std::string::npos);
  }
  SUBCASE("config file") {
    const auto dir = scratch("config_file");
    fs::create_directories(dir);
    std::ofstream(dir / "c.json") << R"({"inputs": ["feed.csv"], "dbscan": {"eps": 2.5}})";
    const auto c = load_config(dir / "c.json");
    CHECK(c.inputs.front() == dir / "feed.csv");
    CHECK(c.dbscan.eps == 2.5);
    std::ofstream(dir / "bad.json") << "{";
    CHECK_THROWS_AS(load_config(dir / "bad.json"), ValidationError);
    CHECK_THROWS_AS(load_config(dir / "missing.json"), ValidationError);
    fs::remove_all(dir);
  }
}

TEST_CASE("synthetic replicate re-estimates the manifest") {
  PipelineConfig c;
  const auto all_days = default_trading_days();
  c.days = std::vector<Date>(all_days.begin(), all_days.begin() + 4);
  c.events_per_sequence = 20'000;
  const auto out = scratch("replicate");
  const auto run = run_pipeline(c, out);
  REQUIRE(run.manifest.has_value());

  CHECK(run.ingest.parse.malformed == 0);
  CHECK(run.ingest.parse.rows == run.ingest.segment.segmented + run.ingest.dropped() + run.ingest.parse.malformed);
  CHECK(run.ingest.segment.segmented == 4u * 15 * 6 * 20'000);
  CHECK(run.result.sequences.size() == 4u * 15 * 6);
  CHECK(run.result.empty_groups.empty());

  REQUIRE(run.result.groups.size() == 18);
  double worst = 0;
  for (const auto& g : run.result.groups) {
    CAPTURE(g.category);
    CAPTURE(g.zone);
    CHECK(g.sequences == 20);
    const auto& truth = run.manifest->tpm(g.category, g.zone);
    const auto pi = stationary(truth).pi;
    for (std::size_t i = 0; i < kNumStates; ++i) {
      if (pi[i] < 0.05) continue;
      for (std::size_t j = 0; j < kNumStates; ++j) {
        worst = std::max(worst, std::abs(g.tpm(i, j) - truth(i, j)));
        CHECK(std::abs(g.tpm(i, j) - truth(i, j)) < 0.01);
      }
    }
    CHECK(balance_residual(g.tpm, g.stationary.pi) <= 1e-10);
  }
  MESSAGE("largest cell error on rows with pi >= 0.05: " << worst);

  std::size_t tpm_json = 0;
  for (const auto& e : fs::directory_iterator(out / "tpm"))
    if (e.path().extension() == ".json") {
      ++tpm_json;
      const auto p = tpm_from_json(nlohmann::json::parse(slurp(e.path())));
      const auto stem = e.path().stem().string();
      const auto us = stem.find('_');
      CHECK(run.result.groups.end() !=
            std::find_if(run.result.groups.begin(), run.result.groups.end(), [&](const GroupResult& g) {
              return g.category == stem.substr(0, us) && g.zone == stem.substr(us + 1) && g.tpm == p;
            }));
    }
  CHECK(tpm_json == 18);

  REQUIRE(run.result.jsd.size() == 3);
  for (const auto& [cat, m] : run.result.jsd) {
    CHECK(m.labels.size() == 6);
    CHECK(m.values.diagonal().isZero(0.0));
  }
  REQUIRE(run.result.embeddings.size() == 1);
  const auto& emb = run.result.embeddings.front();
  CHECK(emb.group == "pooled");
  CHECK(emb.pca.scores.rows() == 18);
  REQUIRE(emb.clusters.has_value());
  CHECK(emb.clusters->labels.size() == 18);
  fs::remove_all(out);
}

TEST_CASE("bundle outputs are deterministic and round-trip through their schemas") {
  const auto a = scratch("det_a"), b = scratch("det_b");
  run_pipeline(small_config(), a);
  run_pipeline(small_config(), b);
  const auto fa = bundle_files(a), fb = bundle_files(b);
  REQUIRE(fa.size() == fb.size());
  for (const auto& [name, body] : fa) {
    CAPTURE(name);
    REQUIRE(fb.count(name) == 1);
    if (name == "run.json") {
      CHECK(body != without_timestamp(body));
      CHECK(without_timestamp(body) == without_timestamp(fb.at(name)));
    } else {
      CHECK(body == fb.at(name));
    }
  }

  const auto run = nlohmann::json::parse(fa.at("run.json"));
  CHECK(run["groups"].size() == 18);
  for (const auto& o : run["outputs"]) CHECK(fa.count(o.get<std::string>()) == 1);

  std::size_t checked = 0;
  for (const auto& e : fs::recursive_directory_iterator(a)) {
    if (e.path().extension() != ".csv" || e.path().parent_path().filename() == "corpus") continue;
    CAPTURE(e.path().string());
    CHECK(reemit(e.path()) == slurp(e.path()));
    ++checked;
  }
  CHECK(checked >= 18 * 2 + 10);
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("per-category embedding") {
  auto c = small_config();
  c.pca_mode = PcaMode::kPerCategory;
  const auto out = scratch("per_category");
  const auto run = run_pipeline(c, out);
  REQUIRE(run.result.embeddings.size() == 3);
  for (const auto& e : run.result.embeddings) CHECK(e.pca.scores.rows() == 6);
  CHECK(fs::exists(out / "pca_scores_HMC.csv"));
  fs::remove_all(out);
}

TEST_CASE("ingestion of user files") {
  const auto dir = scratch("user_files");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "feed.csv");
    f << kCsvHeader << "\n";
    f << "2018-11-07,9:30:00.001,1,ADD-BID,MSFT,100.5,10,NASDAQ\n";
    f << "2018-11-07,9:30:00.002,2,DELETE-BID,MSFT,100.5,10,NASDAQ\n";
    f << "2018-11-07,9:30:00.003,3,ADD-BID,MSFT,100.6,10,NASDAQ\n";
    f << "2018-11-07,9:30:00.003,9,ADD-BID,MSFT,100.6,10,NASDAQ\n";
    f << "2018-11-07,9:30:00.004,4,NOT-A-KIND,MSFT,100.6,10,NASDAQ\n";
    f << "2018-11-07,8:00:00.000,5,ADD-ASK,NKE,50,1,NASDAQ\n";
    f << "2018-11-07,9:31:00.000,6,ADD-ASK,NKE,50,1,NYSE\n";
    f << "2018-11-08,9:31:00.000,7,ADD-ASK,NKE,50,1,NASDAQ\n";
    f << "2018-11-07,9:31:00.000,8,ADD-ASK,ZZZZ,50,1,NASDAQ\n";
  }
  PipelineConfig c;
  c.inputs = {dir / "feed.csv"};
  c.exchange = "NASDAQ";
  SequenceMap kept;
  const auto ing = ingest_files(c, &kept);
  CHECK(ing.files == std::vector<std::string>{"feed.csv"});
  CHECK(ing.parse.rows == 9);
  CHECK(ing.parse.malformed == 1);
  CHECK(ing.parse.filtered == 2);  // other exchange, day not listed
  CHECK(ing.segment.out_of_session == 1);
  CHECK(ing.segment.segmented == 5);
  CHECK(ing.parse.rows == ing.segment.segmented + ing.dropped() + ing.parse.malformed);
  REQUIRE(kept.size() == 2);
  CHECK(ing.counters.size() == 2);
  const auto report = ingest_report_json(ing);
  CHECK(report["malformed"] == 1);

  const auto result = analyze(c, ing);
  CHECK(result.sequences.size() == 2);
  for (const auto& s : result.sequences)
    if (s.key.ticker == "ZZZZ") {
      CHECK(s.category == kUncategorized);
      CHECK(s.gtest.status == "too_short");
      CHECK_FALSE(s.tpm.has_value());
    }
  CHECK(result.groups.size() == 1);
  CHECK(result.empty_groups.size() == 17);

  {
    std::ofstream f(dir / "late.csv");
    f << "2018-11-07,9:30:00.005,1,ADD-BID,MSFT,100.5,10,NASDAQ\n";
    f << "2018-11-07,9:30:00.001,2,ADD-BID,MSFT,100.5,10,NASDAQ\n";
  }
  c.inputs = {dir / "late.csv"};
  try {
    ingest_files(c);
    FAIL("expected OutOfOrderTimestamp");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("late.csv") != std::string::npos);
  }
  c.inputs = {dir / "absent.csv"};
  CHECK_THROWS_AS(ingest_files(c), DataError);
  fs::remove_all(dir);
}

TEST_CASE("module errors carry the group they concern") {
  PipelineConfig c;
  IngestResult ing;
  const SequenceKey key{"MSFT", 2018y / November / 7, "T1"};
  LaggedCounter counter(c.max_lag);
  for (int t = 0; t < 200; ++t) counter.push(static_cast<std::uint8_t>(t % 2));
  ing.counters.emplace(key, counter);
  try {
    analyze(c, ing);
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("(HMC, T1)") != std::string::npos);
  }
  const auto s = analyze_sequence(key, counter, c.categories);
  CHECK(s.category == "HMC");
  CHECK(s.length == 200);
  REQUIRE(s.gtest.result.has_value());
  CHECK(s.gtest.result->df == 1);
  CHECK(s.lags.size() == c.max_lag);
}
