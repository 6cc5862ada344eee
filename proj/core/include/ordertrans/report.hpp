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
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "ordertrans/cluster.hpp"
#include "ordertrans/domain.hpp"
#include "ordertrans/dtmc.hpp"
#include "ordertrans/independence.hpp"

namespace ordertrans {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);
double parse_number(std::string_view text);

// ---------------------------------------------------------------------------
// Plain CSV: comma-separated, no quoting, fields must not contain commas.

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& out, const CsvTable& table);
CsvTable read_csv(std::istream& in);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv_file(const std::filesystem::path& path);

/// "AB".."CA" for ten states, "S0".."Sn-1" otherwise.
std::vector<std::string> state_labels(std::size_t states);

// ---------------------------------------------------------------------------
// JSON

/// {states: [...], probs: [[...]], support: [...]}
nlohmann::ordered_json tpm_to_json(const TransitionMatrix& p);
TransitionMatrix tpm_from_json(const nlohmann::json& j);

/// {states: [...], pi: [...]}
nlohmann::ordered_json stationary_to_json(const StationaryDistribution& pi);

nlohmann::ordered_json zones_to_json(const std::vector<TimeZoneSpec>& zones);
std::vector<TimeZoneSpec> zones_from_json(const nlohmann::json& j, const std::string& path);
nlohmann::ordered_json categories_to_json(const std::vector<CapCategory>& categories);
std::vector<CapCategory> categories_from_json(const nlohmann::json& j, const std::string& path);

// ---------------------------------------------------------------------------
// Typed CSV schemas

/// from_state,to_state,prob  (rows = current state, as estimated)
CsvTable tpm_long_csv(const TransitionMatrix& p);
TransitionMatrix tpm_from_long_csv(const CsvTable& table);

/// Heatmap layout: one row per next state, one column per current state.
CsvTable tpm_heatmap_csv(const TransitionMatrix& p);

struct LabeledVector {
  std::string category;
  std::string zone;
  std::vector<double> values;
};

/// category,zone,AB,...,CA (stationary table, degree-of-inertia series)
CsvTable labeled_vectors_csv(const std::vector<LabeledVector>& rows, std::size_t states = kNumStates);
std::vector<LabeledVector> labeled_vectors_from_csv(const CsvTable& table);

struct PairProbability {
  std::string category;
  std::string zone;
  std::string from;
  std::string to;
  double prob = 0.0;
};

/// category,zone,from_state,to_state,prob
CsvTable pair_series_csv(const std::vector<PairProbability>& rows);
std::vector<PairProbability> pair_series_from_csv(const CsvTable& table);

struct LabeledMatrix {
  std::vector<std::string> labels;
  Eigen::MatrixXd values;  // symmetric
};

/// Lower-triangular: header "zone,<labels...>", row i holds columns 0..i.
CsvTable lower_triangular_csv(const LabeledMatrix& m);
LabeledMatrix lower_triangular_from_csv(const CsvTable& table);

struct ScoreRow {
  std::string label;
  std::vector<double> scores;
};

/// label,pc1,...,pck
CsvTable scores_csv(const std::vector<ScoreRow>& rows);
std::vector<ScoreRow> scores_from_csv(const CsvTable& table);

struct ClusterRow {
  std::string label;
  Point2 point;
  int cluster = kNoiseLabel;
  PointRole role = PointRole::kNoise;
};

/// label,pc1,pc2,cluster,role  (cluster is -1 for noise)
CsvTable clusters_csv(const std::vector<ClusterRow>& rows);
std::vector<ClusterRow> clusters_from_csv(const CsvTable& table);

struct GTestRow {
  std::string category;
  std::string ticker;
  std::string date;
  std::string zone;
  std::uint64_t n = 0;
  std::optional<GTestResult> result;  // absent when the table was degenerate
  std::string status = "ok";
};

/// category,ticker,date,zone,n,g,df,p_value,status
CsvTable gtest_csv(const std::vector<GTestRow>& rows);
std::vector<GTestRow> gtest_from_csv(const CsvTable& table);

struct LagRow {
  std::string ticker;
  std::string date;
  std::string zone;
  LagAssociation association;
};

/// ticker,date,zone,lag,n,cramers_v,cramers_v_raw,threshold
CsvTable lag_csv(const std::vector<LagRow>& rows);
std::vector<LagRow> lag_from_csv(const CsvTable& table);

struct OrderCountRow {
  std::string category;
  std::string kind;
  std::uint64_t total = 0;
  double mean_per_sequence = 0.0;
};

/// category,kind,total,mean_per_sequence
CsvTable order_counts_csv(const std::vector<OrderCountRow>& rows);
std::vector<OrderCountRow> order_counts_from_csv(const CsvTable& table);

struct ComponentRow {
  std::string group;
  std::size_t component = 0;
  double eigenvalue = 0.0;
  double contribution = 0.0;
  double cumulative = 0.0;
};

/// group,component,eigenvalue,contribution,cumulative
CsvTable pca_spectrum_csv(const std::vector<ComponentRow>& rows);
std::vector<ComponentRow> pca_spectrum_from_csv(const CsvTable& table);

}  // namespace ordertrans
