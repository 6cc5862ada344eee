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

// ordertrans command-line tool.
//
// Exit codes: 0 success, 1 invalid configuration or arguments, 2 data error,
// 3 internal error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ordertrans/divergence.hpp"
#include "ordertrans/error.hpp"
#include "ordertrans/independence.hpp"
#include "ordertrans/pipeline.hpp"
#include "ordertrans/report.hpp"
#include "ordertrans/synth.hpp"

namespace fs = std::filesystem;
using namespace ordertrans;

namespace {

struct Common {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::string tickers;
  std::string exchange;
  std::string days;
  std::vector<std::string> inputs;
};

void add_common(CLI::App* cmd, Common& c, bool with_inputs = true) {
  cmd->add_option("--config", c.config, "JSON config file")->check(CLI::ExistingFile);
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", c.seed, "master seed");
  cmd->add_option("--tickers", c.tickers, "comma-separated ticker filter");
  cmd->add_option("--exchange", c.exchange, "keep only this exchange");
  cmd->add_option("--days", c.days, "comma-separated YYYY-MM-DD list, or 'all'");
  if (with_inputs) cmd->add_option("inputs", c.inputs, "input files");
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

PipelineConfig resolve(const Common& c) {
  PipelineConfig cfg = c.config.empty() ? PipelineConfig{} : load_config(c.config);
  if (!c.inputs.empty()) cfg.inputs.assign(c.inputs.begin(), c.inputs.end());
  if (c.seed) cfg.seed = *c.seed;
  if (!c.tickers.empty()) {
    auto list = split_list(c.tickers);
    cfg.tickers = std::set<std::string>(list.begin(), list.end());
  }
  if (!c.exchange.empty()) cfg.exchange = c.exchange;
  if (c.days == "all") {
    cfg.days.reset();
  } else if (!c.days.empty()) {
    std::vector<Date> days;
    for (const auto& d : split_list(c.days)) {
      const auto parsed = parse_date(d);
      if (!parsed) throw ValidationError("--days: bad date '" + d + "'");
      days.push_back(*parsed);
    }
    cfg.days = std::move(days);
  }
  cfg.validate();
  return cfg;
}

void write_json(const fs::path& path, const nlohmann::ordered_json& j) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void require_inputs(const std::vector<std::string>& inputs) {
  if (inputs.empty()) throw ValidationError("no input files given");
}

/// Pair counters from feed CSVs or from .seq files written by `ingest`.
std::map<SequenceKey, LaggedCounter> load_counters(PipelineConfig cfg) {
  if (cfg.inputs.empty()) throw ValidationError("no input files given");
  std::vector<fs::path> feeds;
  std::map<SequenceKey, LaggedCounter> out;
  for (const auto& p : cfg.inputs) {
    if (p.extension() != ".seq") {
      feeds.push_back(p);
      continue;
    }
    const auto seq = read_sequence_file(p);
    auto& c = out.try_emplace(SequenceKey{seq.ticker, seq.date, seq.zone}, cfg.max_lag).first->second;
    for (auto s : seq.symbols) c.push(s);
  }
  if (!feeds.empty()) {
    cfg.inputs = feeds;
    auto ingested = ingest_files(cfg);
    for (auto& [k, c] : ingested.counters) out.insert_or_assign(k, std::move(c));
  }
  return out;
}

std::string stem_of(const fs::path& p) { return p.stem().string(); }

/// "<category>_<zone>" file stems split at the last underscore.
std::pair<std::string, std::string> split_stem(const std::string& stem) {
  const auto u = stem.rfind('_');
  if (u == std::string::npos) return {stem, ""};
  return {stem.substr(0, u), stem.substr(u + 1)};
}

TransitionMatrix read_tpm(const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw DataError("cannot read " + p.string());
  try {
    return tpm_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::exception& e) {
    throw DataError(p.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Common& c) {
  auto cfg = resolve(c);
  if (cfg.inputs.empty()) throw ValidationError("no input files given");
  SequenceMap seqs;
  const auto r = ingest_files(cfg, &seqs);
  const fs::path out = c.out;
  write_json(out / "ingest.json", ingest_report_json(r));
  for (const auto& [k, s] : seqs) write_sequence_file(out / "sequences", s);
  std::vector<OrderCountRow> rows;
  const auto counts = count_orders(seqs, cfg.categories);
  std::map<std::string, std::size_t> per_cat;
  for (const auto& [k, s] : seqs) {
    const auto ci = category_index(k.ticker, cfg.categories);
    ++per_cat[ci ? cfg.categories[*ci].label : std::string(kUncategorized)];
  }
  std::vector<std::string> order;
  for (const auto& cat : cfg.categories) order.push_back(cat.label);
  order.emplace_back(kUncategorized);
  for (const auto& cat : order) {
    const auto it = counts.find(cat);
    if (it == counts.end()) continue;
    const auto& kc = it->second;
    for (std::size_t i = 0; i < kNumStates; ++i)
      rows.push_back({cat, std::string(code_name(kind_from_index(i))), kc[i],
                      static_cast<double>(kc[i]) / static_cast<double>(per_cat[cat])});
  }
  write_csv_file(out / "order_counts.csv", order_counts_csv(rows));
  std::cout << "rows " << r.parse.rows << ": segmented " << r.segment.segmented << ", dropped "
            << r.dropped() << ", malformed " << r.parse.malformed << "; " << seqs.size()
            << " sequences\n";
  return 0;
}

int cmd_gtest(const Common& c) {
  const auto cfg = resolve(c);
  std::vector<GTestRow> gt;
  std::vector<LagRow> lags;
  std::size_t dependent = 0;
  for (const auto& [k, counter] : load_counters(cfg)) {
    auto s = analyze_sequence(k, counter, cfg.categories);
    if (s.gtest.result && s.gtest.result->dependent()) ++dependent;
    gt.push_back(std::move(s.gtest));
    lags.insert(lags.end(), s.lags.begin(), s.lags.end());
  }
  write_csv_file(fs::path(c.out) / "gtest.csv", gtest_csv(gt));
  write_csv_file(fs::path(c.out) / "lags.csv", lag_csv(lags));
  std::cout << gt.size() << " sequences tested, " << dependent << " reject independence at "
            << kSignificanceLevel << "\n";
  return 0;
}

int cmd_estimate(const Common& c) {
  const auto cfg = resolve(c);
  std::size_t n = 0;
  for (const auto& [k, counter] : load_counters(cfg)) {
    auto s = analyze_sequence(k, counter, cfg.categories);
    if (!s.tpm) continue;
    const std::string stem = k.ticker + "_" + format_date(k.date) + "_" + k.zone;
    write_json(fs::path(c.out) / (stem + ".json"), tpm_to_json(*s.tpm));
    ++n;
  }
  std::cout << n << " matrices written to " << c.out << "\n";
  return 0;
}

int cmd_average(const Common& c) {
  require_inputs(c.inputs);
  std::vector<TransitionMatrix> tpms;
  for (const auto& p : c.inputs) tpms.push_back(read_tpm(p));
  const auto avg = average(tpms);
  write_json(fs::path(c.out) / "average.json", tpm_to_json(avg));
  write_csv_file(fs::path(c.out) / "average_heatmap.csv", tpm_heatmap_csv(avg));
  std::cout << "averaged " << tpms.size() << " matrices\n";
  return 0;
}

int cmd_stationary(const Common& c) {
  require_inputs(c.inputs);
  std::vector<LabeledVector> rows;
  for (const auto& p : c.inputs) {
    const auto pi = stationary(read_tpm(p));
    auto [cat, zone] = split_stem(stem_of(p));
    write_json(fs::path(c.out) / (stem_of(p) + "_stationary.json"), stationary_to_json(pi));
    rows.push_back({cat, zone, pi.pi});
  }
  write_csv_file(fs::path(c.out) / "stationary.csv", labeled_vectors_csv(rows));
  std::cout << rows.size() << " stationary distributions\n";
  return 0;
}

int cmd_jsd(const Common& c, const std::string& scale) {
  require_inputs(c.inputs);
  std::vector<std::string> order;
  std::map<std::string, std::pair<std::vector<std::string>, std::vector<Distribution>>> by_cat;
  for (const auto& p : c.inputs)
    for (auto& v : labeled_vectors_from_csv(read_csv_file(p))) {
      if (!by_cat.count(v.category)) order.push_back(v.category);
      auto& [labels, dists] = by_cat[v.category];
      labels.push_back(v.zone);
      dists.push_back(Distribution::normalized(std::move(v.values)));
    }
  const auto s = scale == "divergence" ? JsdScale::kDivergence : JsdScale::kDistance;
  for (const auto& cat : order) {
    auto& [labels, dists] = by_cat[cat];
    LabeledMatrix m{labels, jsd_matrix(dists, s)};
    write_csv_file(fs::path(c.out) / ("jsd_" + cat + ".csv"), lower_triangular_csv(m));
  }
  std::cout << order.size() << " JSD tables\n";
  return 0;
}

int cmd_embed(const Common& c, std::optional<std::size_t> k) {
  auto cfg = resolve(c);
  require_inputs(c.inputs);
  if (k) cfg.pca_k = *k;
  std::vector<TransitionMatrix> tpms;
  std::vector<std::string> labels;
  for (const auto& p : c.inputs) {
    tpms.push_back(read_tpm(p));
    labels.push_back(stem_of(p));
  }
  const auto res = pca(normalize(make_observations(tpms, labels)), cfg.pca_k);
  const auto gate = cumulative_gate(res, cfg.pca_threshold);
  std::vector<ScoreRow> scores;
  for (Eigen::Index i = 0; i < res.scores.rows(); ++i) {
    ScoreRow r{labels[static_cast<std::size_t>(i)], {}};
    for (Eigen::Index j = 0; j < res.scores.cols(); ++j) r.scores.push_back(res.scores(i, j));
    scores.push_back(std::move(r));
  }
  std::vector<ComponentRow> spectrum;
  for (std::size_t i = 0; i < res.eigenvalues.size(); ++i)
    spectrum.push_back({"input", i + 1, res.eigenvalues[i], res.contribution[i], res.cumulative[i]});
  write_csv_file(fs::path(c.out) / "pca_scores.csv", scores_csv(scores));
  write_csv_file(fs::path(c.out) / "pca_spectrum.csv", pca_spectrum_csv(spectrum));
  std::cout << "first " << gate.k << " components explain " << gate.cumulative << " of the variance ("
            << (gate.passed ? "meets" : "below") << " " << gate.threshold << ")\n";
  return 0;
}

int cmd_cluster(const Common& c, std::optional<double> eps, std::optional<std::size_t> min_pts) {
  auto cfg = resolve(c);
  require_inputs(c.inputs);
  if (eps) cfg.dbscan.eps = *eps;
  if (min_pts) cfg.dbscan.min_pts = *min_pts;
  cfg.dbscan.validate();
  std::vector<ScoreRow> scores;
  for (const auto& p : c.inputs)
    for (auto& r : scores_from_csv(read_csv_file(p))) scores.push_back(std::move(r));
  std::vector<Point2> pts;
  for (const auto& r : scores) {
    if (r.scores.size() < 2) throw DataError("clustering needs at least two score columns");
    pts.push_back({r.scores[0], r.scores[1]});
  }
  const auto labels = dbscan(pts, cfg.dbscan);
  std::vector<ClusterRow> rows;
  for (std::size_t i = 0; i < pts.size(); ++i)
    rows.push_back({scores[i].label, pts[i], labels.labels[i], labels.roles[i]});
  write_csv_file(fs::path(c.out) / "clusters.csv", clusters_csv(rows));
  const std::size_t k = std::max<std::size_t>(1, cfg.dbscan.min_pts - 1);
  if (k < pts.size()) {
    CsvTable t{{"rank", "distance"}, {}};
    const auto kd = k_distance(pts, k);
    for (std::size_t i = 0; i < kd.size(); ++i)
      t.rows.push_back({std::to_string(i + 1), format_number(kd[i])});
    write_csv_file(fs::path(c.out) / "kdistance.csv", t);
  }
  std::cout << labels.cluster_count << " clusters among " << pts.size() << " points\n";
  return 0;
}

int cmd_simulate(const Common& c, const std::string& tpm, std::size_t events) {
  const auto cfg = resolve(c);
  const fs::path out = c.out;
  if (!tpm.empty()) {
    auto seq = simulate(read_tpm(tpm), events, cfg.seed);
    seq.ticker = "SIM";
    seq.zone = "T0";
    seq.date = cfg.days ? cfg.days->front() : default_trading_days().front();
    std::cout << write_sequence_file(out, seq).string() << "\n";
    return 0;
  }
  auto m = make_manifest(cfg.categories, cfg.zones, cfg.days ? *cfg.days : default_trading_days(),
                         cfg.seed, cfg.events_per_sequence);
  if (cfg.exchange) m.exchange = *cfg.exchange;
  write_json(out / "manifest.json", manifest_to_json(m));
  const auto files = write_corpus(m, out / "corpus");
  std::cout << files.size() << " feed files written to " << (out / "corpus").string() << "\n";
  return 0;
}

int cmd_replicate(const Common& c) {
  const auto cfg = resolve(c);
  const auto s = run_pipeline(cfg, c.out);
  std::cout << "ingested " << s.ingest.parse.rows << " rows into " << s.ingest.counters.size()
            << " sequences; " << s.result.groups.size() << " (category, zone) matrices\n";
  for (const auto& e : s.result.embeddings) {
    std::cout << e.group << ": PC1-" << e.gate.k << " explain " << e.gate.cumulative;
    if (e.clusters) std::cout << ", " << e.clusters->cluster_count << " cluster(s)";
    std::cout << "\n";
  }
  std::cout << "bundle written to " << c.out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Order-transition Markov analysis of limit order book event streams"};
  app.require_subcommand(1);

  Common ingest_o, gtest_o, estimate_o, average_o, stationary_o, jsd_o, embed_o, cluster_o,
      simulate_o, replicate_o;
  auto* ingest = app.add_subcommand("ingest", "parse feeds into per-(ticker, day, zone) sequences");
  add_common(ingest, ingest_o);
  auto* gtest = app.add_subcommand("gtest", "G-test of independence and lagged association");
  add_common(gtest, gtest_o);
  auto* estimate = app.add_subcommand("estimate", "per-sequence transition matrices");
  add_common(estimate, estimate_o);
  auto* average = app.add_subcommand("average", "average transition-matrix JSON files");
  add_common(average, average_o);
  auto* stat = app.add_subcommand("stationary", "stationary distribution of each matrix");
  add_common(stat, stationary_o);
  auto* jsd = app.add_subcommand("jsd", "pairwise Jensen-Shannon tables from stationary.csv");
  add_common(jsd, jsd_o);
  std::string scale = "distance";
  jsd->add_option("--scale", scale, "distance (sqrt) or divergence")
      ->check(CLI::IsMember({"distance", "divergence"}))
      ->capture_default_str();
  auto* embed = app.add_subcommand("embed", "PCA of flattened matrices");
  add_common(embed, embed_o);
  std::optional<std::size_t> k;
  embed->add_option("-k", k, "number of components");
  auto* cluster = app.add_subcommand("cluster", "DBSCAN on PCA scores");
  add_common(cluster, cluster_o);
  std::optional<double> eps;
  std::optional<std::size_t> min_pts;
  cluster->add_option("--eps", eps, "neighbourhood radius");
  cluster->add_option("--min-pts", min_pts, "neighbourhood size, counting the point itself");
  auto* sim = app.add_subcommand("simulate", "synthetic corpus, or one sequence from --tpm");
  add_common(sim, simulate_o, false);
  std::string tpm;
  std::size_t events = 10000;
  sim->add_option("--tpm", tpm, "transition matrix JSON")->check(CLI::ExistingFile);
  sim->add_option("--events", events, "sequence length with --tpm")->capture_default_str();
  auto* rep = app.add_subcommand("replicate", "full flow on a synthetic or configured corpus");
  add_common(rep, replicate_o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_o);
    if (*gtest) return cmd_gtest(gtest_o);
    if (*estimate) return cmd_estimate(estimate_o);
    if (*average) return cmd_average(average_o);
    if (*stat) return cmd_stationary(stationary_o);
    if (*jsd) return cmd_jsd(jsd_o, scale);
    if (*embed) return cmd_embed(embed_o, k);
    if (*cluster) return cmd_cluster(cluster_o, eps, min_pts);
    if (*sim) return cmd_simulate(simulate_o, tpm, events);
    if (*rep) return cmd_replicate(replicate_o);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
