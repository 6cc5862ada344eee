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

#include "ordertrans/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <numeric>

#include "ordertrans/divergence.hpp"
#include "ordertrans/error.hpp"
#include "ordertrans/independence.hpp"

namespace ordertrans {

namespace {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

std::string key_context(const SequenceKey& k) {
  return "(" + k.ticker + ", " + format_date(k.date) + ", " + k.zone + ")";
}

std::string group_context(const std::string& category, const std::string& zone) {
  return "(" + category + ", " + zone + ")";
}

std::uint64_t get_count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw ValidationError(path + ": must be a non-negative integer");
  return j.get<std::uint64_t>();
}

double get_double(const json& j, const std::string& path) {
  if (!j.is_number()) throw ValidationError(path + ": must be a number");
  return j.get<double>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) throw ValidationError(path + ": must be a string");
  return j.get<std::string>();
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<std::string_view> known) {
  if (!j.is_object()) throw ValidationError(path + ": must be an object");
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      throw ValidationError(path + "." + k + ": unknown key");
}

void write_json_file(const std::filesystem::path& path, const ojson& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

// ---------------------------------------------------------------------------
// Config

void PipelineConfig::validate() const {
  if (categories.empty()) throw ValidationError("config.categories: must not be empty");
  try {
    validate_categories(categories);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config.categories: ") + e.what());
  }
  if (zones.empty()) throw ValidationError("config.zones: must not be empty");
  try {
    validate_zones(zones);
  } catch (const ValidationError& e) {
    throw ValidationError(std::string("config.zones: ") + e.what());
  }
  if (days && days->empty()) throw ValidationError("config.days: must not be empty");
  if (tickers && tickers->empty()) throw ValidationError("config.tickers: must not be empty");
  if (!(dbscan.eps > 0.0)) throw ValidationError("config.dbscan.eps: must be positive");
  if (dbscan.min_pts < 1) throw ValidationError("config.dbscan.min_pts: must be at least 1");
  if (pca_k < 1) throw ValidationError("config.pca.k: must be at least 1");
  if (!(pca_threshold > 0.0 && pca_threshold <= 1.0))
    throw ValidationError("config.pca.threshold: must lie in (0, 1]");
  if (max_lag < 1) throw ValidationError("config.max_lag: must be at least 1");
  if (events_per_sequence < 2)
    throw ValidationError("config.synth.events_per_sequence: must be at least 2");
}

PipelineConfig config_from_json(const json& j, const std::filesystem::path& base_dir) {
  reject_unknown(j, "config",
                 {"inputs", "categories", "zones", "days", "tickers", "exchange", "dbscan", "pca",
                  "max_lag", "max_malformed", "seed", "synth"});
  PipelineConfig c;
  if (j.contains("inputs")) {
    const auto& a = j["inputs"];
    if (!a.is_array()) throw ValidationError("config.inputs: must be an array of paths");
    for (std::size_t i = 0; i < a.size(); ++i) {
      std::filesystem::path p = get_string(a[i], "config.inputs[" + std::to_string(i) + "]");
      c.inputs.push_back(p.is_relative() && !base_dir.empty() ? base_dir / p : p);
    }
  }
  if (j.contains("categories")) c.categories = categories_from_json(j["categories"], "config.categories");
  if (j.contains("zones")) c.zones = zones_from_json(j["zones"], "config.zones");
  if (j.contains("days")) {
    const auto& d = j["days"];
    if (d.is_string() && d.get<std::string>() == "all") {
      c.days.reset();
    } else {
      if (!d.is_array()) throw ValidationError("config.days: must be an array of dates or \"all\"");
      std::vector<Date> days;
      for (std::size_t i = 0; i < d.size(); ++i) {
        const std::string at = "config.days[" + std::to_string(i) + "]";
        const auto parsed = parse_date(get_string(d[i], at));
        if (!parsed) throw ValidationError(at + ": expected YYYY-MM-DD");
        days.push_back(*parsed);
      }
      c.days = std::move(days);
    }
  }
  if (j.contains("tickers")) {
    const auto& t = j["tickers"];
    if (!t.is_array()) throw ValidationError("config.tickers: must be an array of strings");
    std::set<std::string> s;
    for (std::size_t i = 0; i < t.size(); ++i)
      s.insert(get_string(t[i], "config.tickers[" + std::to_string(i) + "]"));
    c.tickers = std::move(s);
  }
  if (j.contains("exchange")) c.exchange = get_string(j["exchange"], "config.exchange");
  if (j.contains("dbscan")) {
    const auto& d = j["dbscan"];
    reject_unknown(d, "config.dbscan", {"eps", "min_pts"});
    if (d.contains("eps")) c.dbscan.eps = get_double(d["eps"], "config.dbscan.eps");
    if (d.contains("min_pts")) c.dbscan.min_pts = get_count(d["min_pts"], "config.dbscan.min_pts");
  }
  if (j.contains("pca")) {
    const auto& p = j["pca"];
    reject_unknown(p, "config.pca", {"mode", "k", "threshold"});
    if (p.contains("mode")) {
      const auto m = get_string(p["mode"], "config.pca.mode");
      if (m == "pooled")
        c.pca_mode = PcaMode::kPooled;
      else if (m == "per-category")
        c.pca_mode = PcaMode::kPerCategory;
      else
        throw ValidationError("config.pca.mode: expected \"pooled\" or \"per-category\"");
    }
    if (p.contains("k")) c.pca_k = get_count(p["k"], "config.pca.k");
    if (p.contains("threshold")) c.pca_threshold = get_double(p["threshold"], "config.pca.threshold");
  }
  if (j.contains("max_lag")) c.max_lag = get_count(j["max_lag"], "config.max_lag");
  if (j.contains("max_malformed")) c.max_malformed = get_count(j["max_malformed"], "config.max_malformed");
  if (j.contains("seed")) c.seed = get_count(j["seed"], "config.seed");
  if (j.contains("synth")) {
    const auto& s = j["synth"];
    reject_unknown(s, "config.synth", {"events_per_sequence"});
    if (s.contains("events_per_sequence"))
      c.events_per_sequence = get_count(s["events_per_sequence"], "config.synth.events_per_sequence");
  }
  c.validate();
  return c;
}

ojson config_to_json(const PipelineConfig& c) {
  ojson j;
  auto inputs = ojson::array();
  for (const auto& p : c.inputs) inputs.push_back(p.generic_string());
  j["inputs"] = inputs;
  j["categories"] = categories_to_json(c.categories);
  j["zones"] = zones_to_json(c.zones);
  if (c.days) {
    auto days = ojson::array();
    for (const auto& d : *c.days) days.push_back(format_date(d));
    j["days"] = days;
  } else {
    j["days"] = "all";
  }
  if (c.tickers) j["tickers"] = *c.tickers;
  if (c.exchange) j["exchange"] = *c.exchange;
  j["dbscan"] = {{"eps", c.dbscan.eps}, {"min_pts", c.dbscan.min_pts}};
  j["pca"] = {{"mode", c.pca_mode == PcaMode::kPooled ? "pooled" : "per-category"},
              {"k", c.pca_k},
              {"threshold", c.pca_threshold}};
  j["max_lag"] = c.max_lag;
  j["max_malformed"] = c.max_malformed;
  j["seed"] = c.seed;
  j["synth"] = {{"events_per_sequence", c.events_per_sequence}};
  return j;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(j, path.parent_path());
}

// ---------------------------------------------------------------------------
// Ingestion

IngestResult ingest_files(const PipelineConfig& config, SequenceMap* keep) {
  IngestResult r;
  SessionRouter router(config.zones);
  ParseOptions opts;
  opts.tickers = config.tickers;
  opts.exchange = config.exchange;
  if (config.days) opts.days = std::set<Date>(config.days->begin(), config.days->end());

  for (const auto& path : config.inputs) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot read " + path.string());
    r.files.push_back(path.filename().string());
    opts.max_errors = config.max_malformed - std::min(config.max_malformed, r.parse.malformed);
    EventReader reader(in, opts);

    // Feeds arrive in long runs of one (ticker, day, zone); cache the slot.
    LaggedCounter* slot = nullptr;
    SymbolSequence* kept = nullptr;
    SequenceKey last;
    std::optional<std::size_t> last_zone;
    try {
      while (auto ev = reader.next()) {
        const auto z = router.route(*ev, reader.line());
        if (!z) continue;
        if (!slot || *z != *last_zone || ev->ticker != last.ticker || ev->date != last.date) {
          last = SequenceKey{ev->ticker, ev->date, config.zones[*z].label};
          last_zone = z;
          slot = &r.counters.try_emplace(last, config.max_lag).first->second;
          if (keep) {
            auto [it, fresh] = keep->try_emplace(last);
            if (fresh) it->second = SymbolSequence{last.ticker, last.date, last.zone, {}};
            kept = &it->second;
          }
        }
        const auto s = static_cast<std::uint8_t>(index_of(ev->kind));
        slot->push(s);
        if (kept) kept->symbols.push_back(s);
      }
    } catch (const DataError& e) {
      throw DataError(path.filename().string() + ": " + e.what());
    }

    const auto& p = reader.report();
    r.parse.lines += p.lines;
    r.parse.header_lines += p.header_lines;
    r.parse.blank_lines += p.blank_lines;
    r.parse.rows += p.rows;
    r.parse.accepted += p.accepted;
    r.parse.filtered += p.filtered;
    r.parse.malformed += p.malformed;
    for (const auto& e : p.errors)
      if (r.parse.errors.size() < opts.max_recorded_errors)
        r.parse.errors.push_back({e.line, path.filename().string() + ": " + e.reason});
  }
  r.segment.segmented = router.routed();
  r.segment.out_of_session = router.out_of_session();
  return r;
}

ojson ingest_report_json(const IngestResult& r) {
  ojson j;
  j["files"] = r.files;
  j["lines"] = r.parse.lines;
  j["header_lines"] = r.parse.header_lines;
  j["blank_lines"] = r.parse.blank_lines;
  j["rows"] = r.parse.rows;
  j["accepted"] = r.parse.accepted;
  j["filtered"] = r.parse.filtered;
  j["malformed"] = r.parse.malformed;
  j["segmented"] = r.segment.segmented;
  j["out_of_session"] = r.segment.out_of_session;
  j["dropped"] = r.dropped();
  j["sequences"] = r.counters.size();
  auto errors = ojson::array();
  for (const auto& e : r.parse.errors) errors.push_back({{"line", e.line}, {"reason", e.reason}});
  j["errors"] = errors;
  return j;
}

// ---------------------------------------------------------------------------
// Analysis

ContingencyTable to_table(const CountMatrix& counts, std::size_t lag) {
  const auto n = counts.states();
  std::vector<std::uint64_t> cells(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) cells[i * n + j] = counts(i, j);
  return ContingencyTable(n, n, std::move(cells), lag);
}

SequenceResult analyze_sequence(const SequenceKey& key, const LaggedCounter& counter,
                                const std::vector<CapCategory>& categories) {
  SequenceResult s;
  s.key = key;
  const auto ci = category_index(key.ticker, categories);
  s.category = ci ? categories[*ci].label : std::string(kUncategorized);
  s.length = counter.length();
  s.gtest = GTestRow{s.category, key.ticker, format_date(key.date), key.zone,
                     counter.at_lag(1).total(), std::nullopt, "ok"};
  if (s.length < 2) {
    s.gtest.status = "too_short";
    return s;
  }
  try {
    s.tpm = estimate(counter.at_lag(1));
    try {
      s.gtest.result = g_statistic(to_table(counter.at_lag(1)));
    } catch (const DegenerateTable&) {
      s.gtest.status = "degenerate";
    }
    for (std::size_t lag = 1; lag <= counter.max_lag() && lag < s.length; ++lag) {
      const auto table = to_table(counter.at_lag(lag), lag);
      LagAssociation a;
      a.lag = lag;
      a.n = table.total();
      try {
        a.cramers_v = cramers_v_corrected(table);
        a.cramers_v_raw = cramers_v(table);
      } catch (const DegenerateTable&) {
        continue;
      }
      a.threshold = 1.0 / std::sqrt(static_cast<double>(a.n));
      s.lags.push_back({key.ticker, format_date(key.date), key.zone, a});
    }
  } catch (const DataError& e) {
    throw DataError(key_context(key) + ": " + e.what());
  }
  return s;
}

const std::vector<std::pair<OrderKind, OrderKind>>& tracked_pairs() {
  static const std::vector<std::pair<OrderKind, OrderKind>> pairs = {
      {OrderKind::AB, OrderKind::DB}, {OrderKind::DB, OrderKind::AB},
      {OrderKind::AA, OrderKind::DA}, {OrderKind::DA, OrderKind::AA},
      {OrderKind::FB, OrderKind::AA}, {OrderKind::FA, OrderKind::AB}};
  return pairs;
}

namespace {

std::optional<EmbeddingResult> embed_groups(const PipelineConfig& config, const std::string& name,
                                            const std::vector<const GroupResult*>& groups) {
  if (groups.size() <= config.pca_k) return std::nullopt;
  std::vector<TransitionMatrix> tpms;
  std::vector<std::string> labels;
  for (const auto* g : groups) {
    tpms.push_back(g->tpm);
    labels.push_back(g->category + "-" + g->zone);
  }
  EmbeddingResult e;
  e.group = name;
  try {
    e.pca = pca(normalize(make_observations(tpms, labels)), config.pca_k);
    e.gate = cumulative_gate(e.pca, config.pca_threshold, config.pca_k);
    if (e.pca.k() >= 2) {
      std::vector<Point2> pts;
      for (Eigen::Index i = 0; i < e.pca.scores.rows(); ++i)
        pts.push_back({e.pca.scores(i, 0), e.pca.scores(i, 1)});
      e.clusters = dbscan(pts, config.dbscan);
      const std::size_t k = std::max<std::size_t>(1, config.dbscan.min_pts - 1);
      if (k < pts.size()) e.k_distance = k_distance(pts, k);
    }
  } catch (const DataError& err) {
    throw DataError("embedding " + name + ": " + err.what());
  }
  return e;
}

}  // namespace

PipelineResult analyze(const PipelineConfig& config, const IngestResult& ingest) {
  config.validate();
  PipelineResult r;

  std::map<std::pair<std::string, std::string>, std::vector<TransitionMatrix>> by_group;
  std::map<std::string, std::pair<KindCounts, std::size_t>> kinds;
  for (const auto& [key, counter] : ingest.counters) {
    auto s = analyze_sequence(key, counter, config.categories);
    auto& [counts, seqs] = kinds[s.category];
    for (std::size_t k = 0; k < kNumStates; ++k) counts[k] += counter.kind_counts()[k];
    ++seqs;
    if (s.tpm && s.category != kUncategorized) by_group[{s.category, key.zone}].push_back(*s.tpm);
    r.sequences.push_back(std::move(s));
  }

  auto emit_counts = [&](const std::string& label) {
    const auto it = kinds.find(label);
    if (it == kinds.end()) return;
    for (std::size_t k = 0; k < kNumStates; ++k)
      r.order_counts.push_back({label, std::string(code_name(kind_from_index(k))), it->second.first[k],
                                static_cast<double>(it->second.first[k]) /
                                    static_cast<double>(it->second.second)});
  };
  for (const auto& cat : config.categories) emit_counts(cat.label);
  emit_counts(std::string(kUncategorized));

  for (const auto& cat : config.categories) {
    for (const auto& zone : config.zones) {
      const auto it = by_group.find({cat.label, zone.label});
      if (it == by_group.end()) {
        r.empty_groups.emplace_back(cat.label, zone.label);
        continue;
      }
      try {
        auto tpm = average(it->second);
        auto pi = stationary(tpm);
        r.groups.push_back({cat.label, zone.label, it->second.size(), std::move(tpm), std::move(pi)});
      } catch (const DataError& e) {
        throw DataError(group_context(cat.label, zone.label) + ": " + e.what());
      }
    }
  }

  for (const auto& cat : config.categories) {
    std::vector<Distribution> dists;
    LabeledMatrix m;
    for (const auto& g : r.groups)
      if (g.category == cat.label) {
        dists.push_back(Distribution::normalized(g.stationary.pi));
        m.labels.push_back(g.zone);
      }
    if (dists.size() < 2) continue;
    m.values = jsd_matrix(dists, JsdScale::kDistance);
    r.jsd.emplace(cat.label, std::move(m));
  }

  if (config.pca_mode == PcaMode::kPooled) {
    std::vector<const GroupResult*> all;
    for (const auto& g : r.groups) all.push_back(&g);
    if (auto e = embed_groups(config, "pooled", all)) r.embeddings.push_back(std::move(*e));
  } else {
    for (const auto& cat : config.categories) {
      std::vector<const GroupResult*> mine;
      for (const auto& g : r.groups)
        if (g.category == cat.label) mine.push_back(&g);
      if (auto e = embed_groups(config, cat.label, mine)) r.embeddings.push_back(std::move(*e));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------
// Bundle

void write_bundle(const PipelineConfig& config, const IngestResult& ingest,
                  const PipelineResult& r, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  std::vector<std::string> written;
  auto csv = [&](const std::string& name, const CsvTable& t) {
    write_csv_file(out / name, t);
    written.push_back(name);
  };
  auto js = [&](const std::string& name, const ojson& j) {
    write_json_file(out / name, j);
    written.push_back(name);
  };

  js("ingest.json", ingest_report_json(ingest));

  std::vector<GTestRow> gtests;
  std::vector<LagRow> lags;
  for (const auto& s : r.sequences) {
    gtests.push_back(s.gtest);
    lags.insert(lags.end(), s.lags.begin(), s.lags.end());
  }
  csv("gtest.csv", gtest_csv(gtests));
  csv("lags.csv", lag_csv(lags));
  csv("order_counts.csv", order_counts_csv(r.order_counts));

  std::vector<LabeledVector> doi, stat;
  std::vector<PairProbability> pairs;
  for (const auto& g : r.groups) {
    const std::string stem = "tpm/" + g.category + "_" + g.zone;
    js(stem + ".json", tpm_to_json(g.tpm));
    csv(stem + ".csv", tpm_long_csv(g.tpm));
    csv(stem + "_heatmap.csv", tpm_heatmap_csv(g.tpm));
    doi.push_back({g.category, g.zone, degree_of_inertia(g.tpm)});
    stat.push_back({g.category, g.zone, g.stationary.pi});
    for (const auto& [from, to] : tracked_pairs())
      pairs.push_back({g.category, g.zone, std::string(code_name(from)), std::string(code_name(to)),
                       g.tpm(index_of(from), index_of(to))});
  }
  csv("doi.csv", labeled_vectors_csv(doi));
  csv("stationary.csv", labeled_vectors_csv(stat));
  csv("transitions.csv", pair_series_csv(pairs));

  for (const auto& [cat, m] : r.jsd) csv("jsd_" + cat + ".csv", lower_triangular_csv(m));

  std::vector<ComponentRow> spectrum;
  auto gates = ojson::array();
  for (const auto& e : r.embeddings) {
    std::vector<ScoreRow> scores;
    for (Eigen::Index i = 0; i < e.pca.scores.rows(); ++i) {
      ScoreRow row{e.pca.row_labels[static_cast<std::size_t>(i)], {}};
      for (Eigen::Index c = 0; c < e.pca.scores.cols(); ++c) row.scores.push_back(e.pca.scores(i, c));
      scores.push_back(std::move(row));
    }
    csv("pca_scores_" + e.group + ".csv", scores_csv(scores));
    for (std::size_t c = 0; c < e.pca.eigenvalues.size(); ++c)
      spectrum.push_back({e.group, c + 1, e.pca.eigenvalues[c], e.pca.contribution[c], e.pca.cumulative[c]});
    gates.push_back({{"group", e.group},
                     {"k", e.gate.k},
                     {"threshold", e.gate.threshold},
                     {"cumulative", e.gate.cumulative},
                     {"passed", e.gate.passed}});
    if (e.clusters) {
      std::vector<ClusterRow> rows;
      for (std::size_t i = 0; i < e.clusters->labels.size(); ++i)
        rows.push_back({scores[i].label, {scores[i].scores[0], scores[i].scores[1]},
                        e.clusters->labels[i], e.clusters->roles[i]});
      csv("clusters_" + e.group + ".csv", clusters_csv(rows));
    }
    if (!e.k_distance.empty()) {
      CsvTable t{{"rank", "distance"}, {}};
      for (std::size_t i = 0; i < e.k_distance.size(); ++i)
        t.rows.push_back({std::to_string(i + 1), format_number(e.k_distance[i])});
      csv("kdistance_" + e.group + ".csv", t);
    }
  }
  if (!spectrum.empty()) csv("pca_spectrum.csv", pca_spectrum_csv(spectrum));

  ojson run;
  run["generated_at"] = utc_now();
  auto cfg = config_to_json(config);
  cfg["inputs"] = ingest.files;
  run["config"] = cfg;
  auto groups = ojson::array();
  for (const auto& g : r.groups)
    groups.push_back({{"category", g.category}, {"zone", g.zone}, {"sequences", g.sequences}});
  run["groups"] = groups;
  auto empty = ojson::array();
  for (const auto& [c, z] : r.empty_groups) empty.push_back({{"category", c}, {"zone", z}});
  run["empty_groups"] = empty;
  run["pca_gates"] = gates;
  std::sort(written.begin(), written.end());
  run["outputs"] = written;
  write_json_file(out / "run.json", run);
}

RunSummary run_pipeline(PipelineConfig config, const std::filesystem::path& out) {
  config.validate();
  RunSummary summary;
  if (config.inputs.empty()) {
    auto m = make_manifest(config.categories, config.zones,
                           config.days ? *config.days : default_trading_days(), config.seed,
                           config.events_per_sequence);
    if (config.exchange) m.exchange = *config.exchange;
    write_json_file(out / "manifest.json", manifest_to_json(m));
    config.inputs = write_corpus(m, out / "corpus");
    summary.manifest = std::move(m);
  }
  summary.ingest = ingest_files(config);
  summary.result = analyze(config, summary.ingest);
  write_bundle(config, summary.ingest, summary.result, out);
  return summary;
}

}  // namespace ordertrans
