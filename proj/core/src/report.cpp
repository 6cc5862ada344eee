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

#include "ordertrans/report.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "ordertrans/error.hpp"

namespace ordertrans {

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw InternalError("number formatting failed");
  return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw DataError("not a number: '" + std::string(text) + "'");
  return v;
}

namespace {

std::uint64_t parse_count(std::string_view text) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw DataError("not a count: '" + std::string(text) + "'");
  return v;
}

int parse_int(std::string_view text) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
    throw DataError("not an integer: '" + std::string(text) + "'");
  return v;
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.emplace_back(line.substr(pos, comma == std::string_view::npos ? std::string_view::npos
                                                                       : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

void expect_header(const CsvTable& t, const std::vector<std::string>& header) {
  if (t.header != header) {
    std::string want;
    for (const auto& h : header) want += (want.empty() ? "" : ",") + h;
    throw DataError("unexpected CSV header (want " + want + ")");
  }
}

void expect_width(const std::vector<std::string>& row, std::size_t width) {
  if (row.size() != width)
    throw DataError("CSV row has " + std::to_string(row.size()) + " fields, expected " +
                    std::to_string(width));
}

std::vector<std::string> with_prefix(std::vector<std::string> prefix,
                                     const std::vector<std::string>& rest) {
  prefix.insert(prefix.end(), rest.begin(), rest.end());
  return prefix;
}

}  // namespace

// ---------------------------------------------------------------------------

void write_csv(std::ostream& out, const CsvTable& table) {
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (fields[i].find_first_of(",\n\r") != std::string::npos)
        throw DataError("CSV field contains a separator: '" + fields[i] + "'");
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
}

CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first) {
      t.header = split(line);
      first = false;
    } else {
      t.rows.push_back(split(line));
    }
  }
  if (first) throw DataError("CSV input is empty");
  return t;
}

void write_csv_file(const std::filesystem::path& path, const CsvTable& table) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  write_csv(out, table);
}

CsvTable read_csv_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  return read_csv(in);
}

std::vector<std::string> state_labels(std::size_t states) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < states; ++i)
    out.push_back(states == kNumStates ? std::string(code_name(kind_from_index(i)))
                                       : "S" + std::to_string(i));
  return out;
}

namespace {

std::size_t state_index(const std::vector<std::string>& labels, const std::string& s) {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == s) return i;
  throw DataError("unknown state '" + s + "'");
}

}  // namespace

// ---------------------------------------------------------------------------
// JSON

nlohmann::ordered_json tpm_to_json(const TransitionMatrix& p) {
  nlohmann::ordered_json j;
  j["states"] = state_labels(p.states());
  j["probs"] = p.rows();
  j["support"] = p.support();
  return j;
}

TransitionMatrix tpm_from_json(const nlohmann::json& j) {
  auto rows = j.at("probs").get<std::vector<std::vector<double>>>();
  TransitionMatrix p = TransitionMatrix::from_rows(rows);
  if (j.contains("states") && j.at("states").size() != p.states())
    throw DataError("TPM JSON: states and probs disagree in size");
  if (j.contains("support") && j.at("support").get<std::vector<std::size_t>>() != p.support())
    throw DataError("TPM JSON: support does not match the zero rows of probs");
  return p;
}

nlohmann::ordered_json stationary_to_json(const StationaryDistribution& pi) {
  nlohmann::ordered_json j;
  j["states"] = state_labels(pi.pi.size());
  j["pi"] = pi.pi;
  return j;
}

nlohmann::ordered_json zones_to_json(const std::vector<TimeZoneSpec>& zones) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& z : zones)
    arr.push_back({{"label", z.label}, {"start", z.start.to_string()}, {"end", z.end.to_string()}});
  return arr;
}

std::vector<TimeZoneSpec> zones_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": must be an array");
  std::vector<TimeZoneSpec> zones;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const auto& e = j[i];
    if (!e.is_object()) throw ValidationError(at + ": must be an object");
    TimeZoneSpec z;
    if (!e.contains("label") || !e["label"].is_string())
      throw ValidationError(at + ".label: required string");
    z.label = e["label"].get<std::string>();
    for (const char* field : {"start", "end"}) {
      if (!e.contains(field) || !e[field].is_string())
        throw ValidationError(at + "." + field + ": required string");
      auto t = TimeOfDay::parse(e[field].get<std::string>());
      if (!t) throw ValidationError(at + "." + field + ": bad time '" + e[field].get<std::string>() + "'");
      (std::string_view(field) == "start" ? z.start : z.end) = *t;
    }
    zones.push_back(std::move(z));
  }
  validate_zones(zones);
  return zones;
}

nlohmann::ordered_json categories_to_json(const std::vector<CapCategory>& categories) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : categories) arr.push_back({{"label", c.label}, {"tickers", c.tickers}});
  return arr;
}

std::vector<CapCategory> categories_from_json(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array()) throw ValidationError(path + ": must be an array");
  std::vector<CapCategory> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    const auto& e = j[i];
    if (!e.is_object() || !e.contains("label") || !e["label"].is_string())
      throw ValidationError(at + ".label: required string");
    if (!e.contains("tickers") || !e["tickers"].is_array())
      throw ValidationError(at + ".tickers: required array of strings");
    CapCategory c;
    c.label = e["label"].get<std::string>();
    for (const auto& t : e["tickers"]) {
      if (!t.is_string()) throw ValidationError(at + ".tickers: entries must be strings");
      c.tickers.push_back(t.get<std::string>());
    }
    out.push_back(std::move(c));
  }
  validate_categories(out);
  return out;
}

// ---------------------------------------------------------------------------
// Typed CSV schemas

CsvTable tpm_long_csv(const TransitionMatrix& p) {
  CsvTable t{{"from_state", "to_state", "prob"}, {}};
  const auto labels = state_labels(p.states());
  for (std::size_t i = 0; i < p.states(); ++i)
    for (std::size_t j = 0; j < p.states(); ++j)
      t.rows.push_back({labels[i], labels[j], format_number(p(i, j))});
  return t;
}

TransitionMatrix tpm_from_long_csv(const CsvTable& t) {
  expect_header(t, {"from_state", "to_state", "prob"});
  std::size_t n = 0;
  while (n * n < t.rows.size()) ++n;
  if (n * n != t.rows.size()) throw DataError("TPM CSV must have n*n rows");
  const auto labels = state_labels(n);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& r : t.rows) {
    expect_width(r, 3);
    m(static_cast<Eigen::Index>(state_index(labels, r[0])),
      static_cast<Eigen::Index>(state_index(labels, r[1]))) = parse_number(r[2]);
  }
  return TransitionMatrix(std::move(m));
}

CsvTable tpm_heatmap_csv(const TransitionMatrix& p) {
  const auto labels = state_labels(p.states());
  CsvTable t{with_prefix({"next\\current"}, labels), {}};
  for (std::size_t next = 0; next < p.states(); ++next) {
    std::vector<std::string> row{labels[next]};
    for (std::size_t cur = 0; cur < p.states(); ++cur) row.push_back(format_number(p(cur, next)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable labeled_vectors_csv(const std::vector<LabeledVector>& rows, std::size_t states) {
  CsvTable t{with_prefix({"category", "zone"}, state_labels(states)), {}};
  for (const auto& r : rows) {
    if (r.values.size() != states) throw DimensionMismatch("vector length differs from state count");
    std::vector<std::string> row{r.category, r.zone};
    for (double v : r.values) row.push_back(format_number(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<LabeledVector> labeled_vectors_from_csv(const CsvTable& t) {
  if (t.header.size() < 3 || t.header[0] != "category" || t.header[1] != "zone")
    throw DataError("expected header category,zone,<states...>");
  const std::size_t states = t.header.size() - 2;
  expect_header(t, with_prefix({"category", "zone"}, state_labels(states)));
  std::vector<LabeledVector> out;
  for (const auto& r : t.rows) {
    expect_width(r, states + 2);
    LabeledVector v{r[0], r[1], {}};
    for (std::size_t k = 0; k < states; ++k) v.values.push_back(parse_number(r[k + 2]));
    out.push_back(std::move(v));
  }
  return out;
}

CsvTable pair_series_csv(const std::vector<PairProbability>& rows) {
  CsvTable t{{"category", "zone", "from_state", "to_state", "prob"}, {}};
  for (const auto& r : rows) t.rows.push_back({r.category, r.zone, r.from, r.to, format_number(r.prob)});
  return t;
}

std::vector<PairProbability> pair_series_from_csv(const CsvTable& t) {
  expect_header(t, {"category", "zone", "from_state", "to_state", "prob"});
  std::vector<PairProbability> out;
  for (const auto& r : t.rows) {
    expect_width(r, 5);
    out.push_back({r[0], r[1], r[2], r[3], parse_number(r[4])});
  }
  return out;
}

CsvTable lower_triangular_csv(const LabeledMatrix& m) {
  const auto n = m.labels.size();
  if (static_cast<std::size_t>(m.values.rows()) != n || static_cast<std::size_t>(m.values.cols()) != n)
    throw DimensionMismatch("matrix and labels disagree in size");
  CsvTable t{with_prefix({"zone"}, m.labels), {}};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> row{m.labels[i]};
    for (std::size_t j = 0; j < n; ++j)
      row.push_back(j <= i ? format_number(m.values(static_cast<Eigen::Index>(i),
                                                    static_cast<Eigen::Index>(j)))
                           : std::string());
    t.rows.push_back(std::move(row));
  }
  return t;
}

LabeledMatrix lower_triangular_from_csv(const CsvTable& t) {
  if (t.header.empty() || t.header[0] != "zone") throw DataError("expected header zone,<labels...>");
  LabeledMatrix m;
  m.labels.assign(t.header.begin() + 1, t.header.end());
  const auto n = m.labels.size();
  if (t.rows.size() != n) throw DataError("lower-triangular CSV must be square");
  m.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& r = t.rows[i];
    expect_width(r, n + 1);
    if (r[0] != m.labels[i]) throw DataError("row label does not match header order");
    for (std::size_t j = 0; j < n; ++j) {
      if (j > i) {
        if (!r[j + 1].empty()) throw DataError("upper triangle must be empty");
        continue;
      }
      const double v = parse_number(r[j + 1]);
      m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      m.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  return m;
}

CsvTable scores_csv(const std::vector<ScoreRow>& rows) {
  const std::size_t k = rows.empty() ? 2 : rows.front().scores.size();
  CsvTable t{{"label"}, {}};
  for (std::size_t c = 1; c <= k; ++c) t.header.push_back("pc" + std::to_string(c));
  for (const auto& r : rows) {
    if (r.scores.size() != k) throw DimensionMismatch("score rows differ in width");
    std::vector<std::string> row{r.label};
    for (double v : r.scores) row.push_back(format_number(v));
    t.rows.push_back(std::move(row));
  }
  return t;
}

std::vector<ScoreRow> scores_from_csv(const CsvTable& t) {
  if (t.header.size() < 2 || t.header[0] != "label") throw DataError("expected header label,pc1,...");
  const std::size_t k = t.header.size() - 1;
  for (std::size_t c = 1; c <= k; ++c)
    if (t.header[c] != "pc" + std::to_string(c)) throw DataError("expected header label,pc1,...");
  std::vector<ScoreRow> out;
  for (const auto& r : t.rows) {
    expect_width(r, k + 1);
    ScoreRow s{r[0], {}};
    for (std::size_t c = 1; c <= k; ++c) s.scores.push_back(parse_number(r[c]));
    out.push_back(std::move(s));
  }
  return out;
}

CsvTable clusters_csv(const std::vector<ClusterRow>& rows) {
  CsvTable t{{"label", "pc1", "pc2", "cluster", "role"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.label, format_number(r.point.x), format_number(r.point.y),
                      std::to_string(r.cluster), std::string(to_string(r.role))});
  return t;
}

std::vector<ClusterRow> clusters_from_csv(const CsvTable& t) {
  expect_header(t, {"label", "pc1", "pc2", "cluster", "role"});
  std::vector<ClusterRow> out;
  for (const auto& r : t.rows) {
    expect_width(r, 5);
    ClusterRow c{r[0], {parse_number(r[1]), parse_number(r[2])}, parse_int(r[3]), PointRole::kNoise};
    if (r[4] == "core")
      c.role = PointRole::kCore;
    else if (r[4] == "border")
      c.role = PointRole::kBorder;
    else if (r[4] != "noise")
      throw DataError("unknown role '" + r[4] + "'");
    out.push_back(std::move(c));
  }
  return out;
}

CsvTable gtest_csv(const std::vector<GTestRow>& rows) {
  CsvTable t{{"category", "ticker", "date", "zone", "n", "g", "df", "p_value", "status"}, {}};
  for (const auto& r : rows) {
    if (r.result)
      t.rows.push_back({r.category, r.ticker, r.date, r.zone, std::to_string(r.n),
                        format_number(r.result->g), std::to_string(r.result->df),
                        format_number(r.result->p_value), r.status});
    else
      t.rows.push_back({r.category, r.ticker, r.date, r.zone, std::to_string(r.n), "", "", "", r.status});
  }
  return t;
}

std::vector<GTestRow> gtest_from_csv(const CsvTable& t) {
  expect_header(t, {"category", "ticker", "date", "zone", "n", "g", "df", "p_value", "status"});
  std::vector<GTestRow> out;
  for (const auto& r : t.rows) {
    expect_width(r, 9);
    GTestRow g{r[0], r[1], r[2], r[3], parse_count(r[4]), std::nullopt, r[8]};
    if (!r[5].empty())
      g.result = GTestResult{parse_number(r[5]), static_cast<std::size_t>(parse_count(r[6])),
                             parse_number(r[7])};
    out.push_back(std::move(g));
  }
  return out;
}

CsvTable lag_csv(const std::vector<LagRow>& rows) {
  CsvTable t{{"ticker", "date", "zone", "lag", "n", "cramers_v", "cramers_v_raw", "threshold"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.ticker, r.date, r.zone, std::to_string(r.association.lag),
                      std::to_string(r.association.n), format_number(r.association.cramers_v),
                      format_number(r.association.cramers_v_raw),
                      format_number(r.association.threshold)});
  return t;
}

std::vector<LagRow> lag_from_csv(const CsvTable& t) {
  expect_header(t, {"ticker", "date", "zone", "lag", "n", "cramers_v", "cramers_v_raw", "threshold"});
  std::vector<LagRow> out;
  for (const auto& r : t.rows) {
    expect_width(r, 8);
    LagAssociation a{static_cast<std::size_t>(parse_count(r[3])), parse_count(r[4]),
                     parse_number(r[5]), parse_number(r[6]), parse_number(r[7])};
    out.push_back({r[0], r[1], r[2], a});
  }
  return out;
}

CsvTable order_counts_csv(const std::vector<OrderCountRow>& rows) {
  CsvTable t{{"category", "kind", "total", "mean_per_sequence"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.category, r.kind, std::to_string(r.total), format_number(r.mean_per_sequence)});
  return t;
}

std::vector<OrderCountRow> order_counts_from_csv(const CsvTable& t) {
  expect_header(t, {"category", "kind", "total", "mean_per_sequence"});
  std::vector<OrderCountRow> out;
  for (const auto& r : t.rows) {
    expect_width(r, 4);
    out.push_back({r[0], r[1], parse_count(r[2]), parse_number(r[3])});
  }
  return out;
}

CsvTable pca_spectrum_csv(const std::vector<ComponentRow>& rows) {
  CsvTable t{{"group", "component", "eigenvalue", "contribution", "cumulative"}, {}};
  for (const auto& r : rows)
    t.rows.push_back({r.group, std::to_string(r.component), format_number(r.eigenvalue),
                      format_number(r.contribution), format_number(r.cumulative)});
  return t;
}

std::vector<ComponentRow> pca_spectrum_from_csv(const CsvTable& t) {
  expect_header(t, {"group", "component", "eigenvalue", "contribution", "cumulative"});
  std::vector<ComponentRow> out;
  for (const auto& r : t.rows) {
    expect_width(r, 5);
    out.push_back({r[0], static_cast<std::size_t>(parse_count(r[1])), parse_number(r[2]),
                   parse_number(r[3]), parse_number(r[4])});
  }
  return out;
}

}  // namespace ordertrans
