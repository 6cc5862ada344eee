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

#include "ordertrans/synth.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>

#include "ordertrans/report.hpp"

namespace ordertrans {

std::uint64_t Rng::below(std::uint64_t n) {
  if (n == 0) throw ValidationError("Rng::below needs n > 0");
  // Rejection keeps the draw unbiased.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return x % n;
}

double Rng::normal() {
  if (spare_) {
    const double v = *spare_;
    spare_.reset();
    return v;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) noexcept {
  std::uint64_t z = master + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

std::size_t draw(const std::vector<double>& cumulative, double u) {
  for (std::size_t j = 0; j < cumulative.size(); ++j)
    if (u < cumulative[j]) return j;
  // u landed in the rounding gap above the last partial sum.
  for (std::size_t j = cumulative.size(); j-- > 0;)
    if (j == 0 || cumulative[j] > cumulative[j - 1]) return j;
  return 0;
}

std::vector<double> cumulate(const std::vector<double>& weights) {
  std::vector<double> c(weights.size());
  double run = 0.0;
  for (std::size_t j = 0; j < weights.size(); ++j) c[j] = run += weights[j];
  return c;
}

}  // namespace

SymbolSequence simulate(const TransitionMatrix& p, std::size_t n, std::uint64_t seed,
                        std::optional<std::size_t> start) {
  if (n < 1) throw ValidationError("simulate: n must be at least 1");
  if (p.states() > 255) throw ValidationError("simulate: at most 255 states");
  auto cls = classify(p);
  if (cls.kind != ChainClass::kErgodic) throw NotErgodic(std::move(cls));

  const std::size_t states = p.states();
  std::vector<std::vector<double>> rows(states);
  for (std::size_t i = 0; i < states; ++i) {
    std::vector<double> w(states);
    for (std::size_t j = 0; j < states; ++j) w[j] = p(i, j);
    rows[i] = cumulate(w);
  }

  Rng rng(seed);
  std::size_t state;
  if (start) {
    if (*start >= states || !p.supported(*start))
      throw ValidationError("simulate: start state is not a supported state");
    state = *start;
  } else {
    state = draw(cumulate(stationary(p).pi), rng.uniform());
  }

  SymbolSequence seq;
  seq.symbols.resize(n);
  seq.symbols[0] = static_cast<std::uint8_t>(state);
  for (std::size_t t = 1; t < n; ++t) {
    state = draw(rows[state], rng.uniform());
    seq.symbols[t] = static_cast<std::uint8_t>(state);
  }
  return seq;
}

TransitionMatrix random_ergodic_tpm(std::size_t states, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(states);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      double u;
      do {
        u = rng.uniform();
      } while (u <= 0.0);
      m(i, j) = -std::log(u);
    }
    m.row(i) /= m.row(i).sum();
  }
  return TransitionMatrix(std::move(m));
}

void write_event_row(std::ostream& out, const OrderEvent& ev) {
  const std::int32_t ms = ev.timestamp.millis();
  char price[32];
  if (ev.price == 0.0)
    std::snprintf(price, sizeof price, "0");
  else
    std::snprintf(price, sizeof price, "%.2f", ev.price);
  char buf[256];
  const int len = std::snprintf(
      buf, sizeof buf, "%s,%d:%02d:%02d.%03d,%llu,%.*s,%s,%s,%llu,%s\n",
      format_date(ev.date).c_str(), ms / 3'600'000, (ms / 60'000) % 60, (ms / 1000) % 60,
      ms % 1000, static_cast<unsigned long long>(ev.order_id),
      static_cast<int>(wire_name(ev.kind).size()), wire_name(ev.kind).data(), ev.ticker.c_str(),
      price, static_cast<unsigned long long>(ev.quantity), ev.exchange.c_str());
  if (len > 0 && static_cast<std::size_t>(len) < sizeof buf)
    out.write(buf, len);
  else
    throw DataError("event row too long to render");
}

namespace {

OrderEvent synthetic_event(Rng& rng, OrderKind kind, const std::string& ticker, const Date& date,
                           TimeOfDay ts, std::uint64_t order_id, const std::string& exchange) {
  OrderEvent ev;
  ev.date = date;
  ev.timestamp = ts;
  ev.order_id = order_id;
  ev.kind = kind;
  ev.ticker = ticker;
  const bool deletion = kind == OrderKind::DB || kind == OrderKind::DA;
  const double cents = std::round((50.0 + 150.0 * rng.uniform()) * 100.0);
  ev.price = deletion ? 0.0 : cents / 100.0;
  ev.quantity = 100 * (1 + rng.below(5));
  ev.exchange = exchange;
  return ev;
}

}  // namespace

void render_csv(std::ostream& out, const SymbolSequence& seq, const std::string& ticker,
                const Date& date, const TimeZoneSpec& zone, std::uint64_t seed,
                const std::string& exchange) {
  const std::int64_t capacity = zone.capacity_ms();
  const auto n = static_cast<std::int64_t>(seq.symbols.size());
  if (n > capacity) throw ZoneTooShort(seq.symbols.size(), capacity);

  Rng rng(seed);
  const std::uint64_t base_id = 10'000 + rng.below(1'000'000) * 1'000'000;
  for (std::int64_t t = 0; t < n; ++t) {
    const auto offset = static_cast<std::int32_t>(t * capacity / n);
    const auto ts = TimeOfDay::from_millis(zone.start.millis() + offset);
    write_event_row(out, synthetic_event(rng, kind_from_index(seq.symbols[static_cast<std::size_t>(t)]),
                                         ticker, date, ts, base_id + static_cast<std::uint64_t>(t),
                                         exchange));
  }
}

const TransitionMatrix& SynthManifest::tpm(const std::string& category,
                                           const std::string& zone) const {
  auto it = tpms.find({category, zone});
  if (it == tpms.end())
    throw ValidationError("manifest has no TPM for (" + category + ", " + zone + ")");
  return it->second;
}

namespace {

// Rough long-run shares of the ten event types in a liquid book.
constexpr std::array<double, kNumStates> kBaseShares = {0.2510, 0.2460, 0.2390, 0.2350, 0.0110,
                                                        0.0100, 0.0045, 0.0040, 0.0010, 0.0010};
constexpr double kBaseInertia = 0.30;
constexpr double kEdgeAmplitude = 0.45;
constexpr double kMiddayAmplitude = 0.04;
constexpr double kCategoryShare = 1.2;

Eigen::MatrixXd base_matrix() {
  const auto n = static_cast<Eigen::Index>(kNumStates);
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = (1.0 - kBaseInertia) * kBaseShares[static_cast<std::size_t>(j)] +
                (i == j ? kBaseInertia : 0.0);
  return m;
}

Eigen::MatrixXd gaussian_field(Rng& rng) {
  const auto n = static_cast<Eigen::Index>(kNumStates);
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) d(i, j) = rng.normal();
  return d;
}

TransitionMatrix perturb(const Eigen::MatrixXd& base, const Eigen::MatrixXd& log_shift) {
  Eigen::MatrixXd m = base.array() * log_shift.array().exp();
  for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) /= m.row(i).sum();
  return TransitionMatrix(std::move(m));
}

}  // namespace

SynthManifest make_manifest(std::vector<CapCategory> categories, std::vector<TimeZoneSpec> zones,
                            std::vector<Date> days, std::uint64_t seed,
                            std::size_t events_per_sequence) {
  validate_categories(categories);
  validate_zones(zones);
  SynthManifest m;
  m.seed = seed;
  m.events_per_sequence = events_per_sequence;
  m.zones = std::move(zones);
  m.categories = std::move(categories);
  m.days = std::move(days);

  Rng rng(derive_seed(seed, 0xC0FFEE));
  const Eigen::MatrixXd base = base_matrix();
  const std::size_t last = m.zones.size() - 1;
  // Opening and closing departures are largely common to every category.
  const Eigen::MatrixXd common_opening = gaussian_field(rng);
  const Eigen::MatrixXd common_closing = gaussian_field(rng);
  for (const auto& cat : m.categories) {
    const Eigen::MatrixXd opening = common_opening + kCategoryShare * gaussian_field(rng);
    const Eigen::MatrixXd closing = common_closing + kCategoryShare * gaussian_field(rng);
    for (std::size_t z = 0; z < m.zones.size(); ++z) {
      Eigen::MatrixXd shift = kMiddayAmplitude * gaussian_field(rng);
      if (z == 0) shift += kEdgeAmplitude * opening;
      if (z == last && last > 0) shift += kEdgeAmplitude * closing;
      m.tpms.emplace(std::make_pair(cat.label, m.zones[z].label), perturb(base, shift));
    }
  }
  return m;
}

nlohmann::ordered_json manifest_to_json(const SynthManifest& m) {
  nlohmann::ordered_json j;
  j["seed"] = m.seed;
  j["events_per_sequence"] = m.events_per_sequence;
  j["off_session_events"] = m.off_session_events;
  j["exchange"] = m.exchange;
  j["zones"] = zones_to_json(m.zones);
  j["categories"] = categories_to_json(m.categories);
  auto& days = j["days"] = nlohmann::ordered_json::array();
  for (const auto& d : m.days) days.push_back(format_date(d));
  auto& tpms = j["tpms"] = nlohmann::ordered_json::array();
  for (const auto& cat : m.categories) {
    for (const auto& zone : m.zones) {
      auto entry = tpm_to_json(m.tpm(cat.label, zone.label));
      entry["category"] = cat.label;
      entry["zone"] = zone.label;
      tpms.push_back(std::move(entry));
    }
  }
  return j;
}

SynthManifest manifest_from_json(const nlohmann::json& j) {
  SynthManifest m;
  m.seed = j.at("seed").get<std::uint64_t>();
  m.events_per_sequence = j.at("events_per_sequence").get<std::size_t>();
  m.off_session_events = j.value("off_session_events", std::size_t{2});
  m.exchange = j.value("exchange", std::string("NASDAQ"));
  m.zones = zones_from_json(j.at("zones"), "zones");
  m.categories = categories_from_json(j.at("categories"), "categories");
  for (const auto& d : j.at("days")) {
    auto date = parse_date(d.get<std::string>());
    if (!date) throw ValidationError("days: bad date '" + d.get<std::string>() + "'");
    m.days.push_back(*date);
  }
  for (const auto& entry : j.at("tpms"))
    m.tpms.emplace(std::make_pair(entry.at("category").get<std::string>(),
                                  entry.at("zone").get<std::string>()),
                   tpm_from_json(entry));
  for (const auto& cat : m.categories)
    for (const auto& zone : m.zones) (void)m.tpm(cat.label, zone.label);
  return m;
}

std::vector<std::filesystem::path> write_corpus(const SynthManifest& m,
                                                const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::string> tickers;
  std::vector<std::string> ticker_category;
  for (const auto& cat : m.categories)
    for (const auto& t : cat.tickers) {
      tickers.push_back(t);
      ticker_category.push_back(cat.label);
    }

  const std::uint64_t zones = m.zones.size();
  std::vector<std::filesystem::path> paths;
  for (std::size_t d = 0; d < m.days.size(); ++d) {
    const auto& day = m.days[d];
    const auto path = dir / ("orders_" + format_date(day) + ".csv");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write " + path.string());
    out << kCsvHeader << '\n';

    for (std::size_t t = 0; t < tickers.size(); ++t) {
      const std::uint64_t stream = (d * tickers.size() + t) * (zones + 1);
      Rng noise(derive_seed(m.seed, 2 * stream + 1));
      auto off_session = [&](TimeOfDay from) {
        for (std::size_t k = 0; k < m.off_session_events; ++k) {
          const auto ts = TimeOfDay::from_millis(from.millis() + static_cast<std::int32_t>(k) * 1000);
          write_event_row(out, synthetic_event(noise, kind_from_index(noise.below(4)), tickers[t],
                                               day, ts, 1 + k, m.exchange));
        }
      };
      off_session(TimeOfDay::from_hms(4, 0, 0, 2));
      for (std::size_t z = 0; z < zones; ++z) {
        const auto& p = m.tpm(ticker_category[t], m.zones[z].label);
        const std::uint64_t s = derive_seed(m.seed, 2 * (stream + z + 1));
        auto seq = simulate(p, m.events_per_sequence, s);
        render_csv(out, seq, tickers[t], day, m.zones[z], derive_seed(s, 1), m.exchange);
      }
      off_session(TimeOfDay::from_hms(16, 30, 0, 0));
    }
    if (!out) throw DataError("write failed for " + path.string());
    paths.push_back(path);
  }
  return paths;
}

}  // namespace ordertrans
