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
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ordertrans/cluster.hpp"
#include "ordertrans/domain.hpp"
#include "ordertrans/dtmc.hpp"
#include "ordertrans/embed.hpp"
#include "ordertrans/independence.hpp"
#include "ordertrans/ingest.hpp"
#include "ordertrans/report.hpp"
#include "ordertrans/synth.hpp"

namespace ordertrans {

enum class PcaMode { kPooled, kPerCategory };

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;  // empty: generate a synthetic corpus
  std::vector<CapCategory> categories = default_cap_categories();
  std::vector<TimeZoneSpec> zones = default_time_zones();
  std::optional<std::vector<Date>> days = default_trading_days();  // nullopt: every day
  std::optional<std::set<std::string>> tickers;
  std::optional<std::string> exchange;
  DbscanParams dbscan;
  PcaMode pca_mode = PcaMode::kPooled;
  std::size_t pca_k = 2;
  double pca_threshold = kDefaultCumulativeThreshold;
  std::size_t max_lag = 5;
  std::size_t max_malformed = 1000;
  std::uint64_t seed = 20181106;
  std::size_t events_per_sequence = 2000;

  /// Throws ValidationError naming the offending field.
  void validate() const;
};

/// Reads the declarative config. Missing keys keep their defaults; unknown
/// keys are rejected. Relative input paths are resolved against `base_dir`.
PipelineConfig config_from_json(const nlohmann::json& j,
                                const std::filesystem::path& base_dir = {});
nlohmann::ordered_json config_to_json(const PipelineConfig& config);
PipelineConfig load_config(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Streaming ingestion

struct IngestResult {
  std::map<SequenceKey, LaggedCounter> counters;  // lags 1..max_lag per sequence
  ParseReport parse;                              // summed over all inputs
  SegmentStats segment;
  std::vector<std::string> files;                 // input file names, in order
  /// parse.rows == segmented + dropped + malformed
  std::size_t dropped() const noexcept { return parse.filtered + segment.out_of_session; }
};

/// Reads every input once, holding one line at a time. When `keep` is given
/// the symbol sequences are also materialized into it.
IngestResult ingest_files(const PipelineConfig& config, SequenceMap* keep = nullptr);

nlohmann::ordered_json ingest_report_json(const IngestResult& ingest);

// ---------------------------------------------------------------------------
// Analysis

ContingencyTable to_table(const CountMatrix& counts, std::size_t lag = 1);

struct SequenceResult {
  SequenceKey key;
  std::string category;  // kUncategorized for tickers outside every category
  std::uint64_t length = 0;
  std::optional<TransitionMatrix> tpm;  // absent for sequences shorter than two
  GTestRow gtest;
  std::vector<LagRow> lags;
};

/// Per-sequence estimate, G-test and lagged association.
SequenceResult analyze_sequence(const SequenceKey& key, const LaggedCounter& counter,
                                const std::vector<CapCategory>& categories);

struct GroupResult {
  std::string category;
  std::string zone;
  std::size_t sequences = 0;
  TransitionMatrix tpm;
  StationaryDistribution stationary;
};

struct EmbeddingResult {
  std::string group;  // "pooled" or a category label
  PcaResult pca;
  GateReport gate;
  std::optional<ClusterLabels> clusters;  // needs at least two components
  std::vector<double> k_distance;
};

struct PipelineResult {
  std::vector<SequenceResult> sequences;
  std::vector<GroupResult> groups;                   // category order, then zone order
  std::vector<std::pair<std::string, std::string>> empty_groups;
  std::map<std::string, LabeledMatrix> jsd;          // per category, distance scale
  std::vector<EmbeddingResult> embeddings;
  std::vector<OrderCountRow> order_counts;
};

/// Runs every stage after ingestion. Module errors are rethrown as DataError
/// carrying the (ticker, date, zone) or (category, zone) they concern.
PipelineResult analyze(const PipelineConfig& config, const IngestResult& ingest);

/// Transition pairs tracked across zones.
const std::vector<std::pair<OrderKind, OrderKind>>& tracked_pairs();

/// Writes the full report bundle into `out`.
void write_bundle(const PipelineConfig& config, const IngestResult& ingest,
                  const PipelineResult& result, const std::filesystem::path& out);

struct RunSummary {
  IngestResult ingest;
  PipelineResult result;
  std::optional<SynthManifest> manifest;  // set when the corpus was generated
};

/// Generates the synthetic corpus when the config lists no inputs, then
/// ingests, analyzes and writes the bundle. run.json carries a single
/// "generated_at" line that differs between runs.
RunSummary run_pipeline(PipelineConfig config, const std::filesystem::path& out);

}  // namespace ordertrans
