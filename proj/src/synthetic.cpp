#include "reo/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "reo/error.hpp"
#include "reo/metrics.hpp"

namespace reo {
namespace {

constexpr std::uint64_t kMseStream = 0x05e0u;
constexpr double kSumTolerance = 1e-12;

void check_vector(const std::vector<double>& v, std::size_t k, const char* name) {
  if (v.size() != k) {
    throw config_error("synthetic.config", std::string(name) + " must have " +
                                               std::to_string(k) + " entries");
  }
  for (double x : v) {
    if (!(x >= 0.0) || !std::isfinite(x)) {
      throw config_error("synthetic.config", std::string(name) + " has a negative entry");
    }
  }
}

double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> complement(const std::vector<double>& positive,
                               const std::vector<double>& split) {
  const double rest = 1.0 - sum_of(positive);
  std::vector<double> out(split.size());
  for (std::size_t k = 0; k < split.size(); ++k) out[k] = split[k] * rest;
  return out;
}

std::vector<double> interleave(const std::vector<double>& negative,
                               const std::vector<double>& positive) {
  std::vector<double> cells(2 * positive.size());
  for (std::size_t k = 0; k < positive.size(); ++k) {
    cells[2 * k] = negative[k];
    cells[2 * k + 1] = positive[k];
  }
  return cells;
}

EngagementSignals draw_signals(Rng& rng) {
  std::uniform_int_distribution<int> which(0, 5);
  std::bernoulli_distribution extra(0.25);
  bool s[6];
  for (bool& b : s) b = extra(rng);
  s[which(rng)] = true;
  return EngagementSignals{s[0], s[1], s[2], s[3], s[4], s[5]};
}

}  // namespace

void SimulationConfig::validate() const {
  if (groups == 0) throw config_error("synthetic.config", "group count must be positive");
  check_vector(p, groups, "p");
  check_vector(q, groups, "q");
  check_vector(p_split, groups, "p_split");
  check_vector(q_split, groups, "q_split");
  for (const auto* split : {&p_split, &q_split}) {
    if (std::abs(sum_of(*split) - 1.0) > kSumTolerance) {
      throw config_error("synthetic.config", "complement split weights must sum to 1");
    }
  }
  for (const auto* v : {&p, &q}) {
    if (sum_of(*v) > 1.0 + kSumTolerance) {
      throw config_error("synthetic.config", "positive proportions sum above 1");
    }
  }
  if (!boost_weights.empty()) {
    if (boost_weights.size() != groups) {
      throw config_error("synthetic.config", "one boosting weight per group is required");
    }
    for (double w : boost_weights) {
      if (!(w > 0.0)) throw config_error("synthetic.config", "boosting weights must be positive");
    }
  }
  if (!(p_act > 0.0 && p_act < 1.0)) {
    throw config_error("synthetic.config", "activation probability must lie in (0, 1)");
  }
  if (n < 1) throw config_error("synthetic.config", "traffic size must be at least 1");
}

std::vector<double> SimulationConfig::p_complement() const { return complement(p, p_split); }
std::vector<double> SimulationConfig::q_complement() const { return complement(q, q_split); }

std::vector<double> SimulationConfig::random_cells() const {
  return interleave(p_complement(), p);
}

std::vector<double> SimulationConfig::default_cells() const {
  return interleave(q_complement(), q);
}

std::vector<double> SimulationConfig::true_utilities() const {
  std::vector<double> u(groups);
  for (std::size_t k = 0; k < groups; ++k) {
    if (!(p[k] > 0.0)) {
      throw config_error("synthetic.config",
                         "ground truth undefined: p is zero for group " + std::to_string(k + 1));
    }
    u[k] = q[k] / p[k];
  }
  return u;
}

double SimulationConfig::true_penalty(StdDivisor divisor) const {
  return reo_penalty(true_utilities(), divisor);
}

SimulationConfig SimulationConfig::from_proportions(std::vector<double> p,
                                                    std::vector<double> q,
                                                    std::vector<double> split) {
  SimulationConfig cfg;
  cfg.groups = p.size();
  cfg.p = std::move(p);
  cfg.q = std::move(q);
  cfg.p_split = split;
  cfg.q_split = std::move(split);
  cfg.validate();
  return cfg;
}

SimulationConfig SimulationConfig::mse_setting(int setting) {
  if (setting < 1 || setting > 3) {
    throw config_error("synthetic.config", "MSE setting must be 1, 2 or 3");
  }
  const double scale = std::pow(10.0, -(setting + 1));
  const double p1 = 1.0 * scale;
  const double p2 = 5.0 * scale;
  return from_proportions({p1, p2}, {10.0 * p1, 5.0 * p2}, {0.25, 0.75});
}

SimulationConfig SimulationConfig::daily() {
  auto cfg = from_proportions({0.12, 0.28}, {0.216, 0.42}, {0.3, 0.7});
  cfg.n = 150000;
  cfg.n_rand = 150000;
  return cfg;
}

SimulationConfig SimulationConfig::with_utility_ratio(std::size_t group, std::size_t reference,
                                                      double ratio) const {
  if (group >= groups || reference >= groups || !(ratio > 0.0)) {
    throw config_error("synthetic.config", "invalid utility ratio request");
  }
  SimulationConfig out = *this;
  out.q[group] = ratio * p[group] * q[reference] / p[reference];
  out.validate();
  return out;
}

std::vector<std::int64_t> multinomial(std::int64_t n, std::span<const double> probs, Rng& rng) {
  std::vector<std::int64_t> out(probs.size(), 0);
  double remaining_p = std::accumulate(probs.begin(), probs.end(), 0.0);
  std::int64_t remaining_n = n;
  for (std::size_t i = 0; i + 1 < probs.size() && remaining_n > 0; ++i) {
    if (probs[i] <= 0.0) continue;
    const double share = remaining_p > 0.0 ? std::min(1.0, probs[i] / remaining_p) : 1.0;
    std::binomial_distribution<std::int64_t> draw(remaining_n, share);
    out[i] = draw(rng);
    remaining_n -= out[i];
    remaining_p -= probs[i];
  }
  if (!probs.empty()) out.back() += remaining_n;
  return out;
}

GroupTally sample_counts(const SimulationConfig& cfg, std::int64_t n, Rng& rng,
                         std::optional<std::int64_t> n_rand) {
  cfg.validate();
  if (n < 1) throw config_error("synthetic.config", "traffic size must be at least 1");
  const std::int64_t nr = n_rand.value_or(n);
  const auto rand_counts = multinomial(nr, cfg.random_cells(), rng);
  const auto rec_counts = multinomial(n, cfg.default_cells(), rng);
  GroupTally t(cfg.groups);
  t.n_rand = nr;
  t.n_rec = n;
  for (std::size_t k = 0; k < cfg.groups; ++k) {
    t.pos_rand[k] = rand_counts[2 * k + 1];
    t.pos_rec[k] = rec_counts[2 * k + 1];
  }
  return t;
}

MseStudy mse_study(const SimulationConfig& cfg, std::span<const std::int64_t> sizes,
                   std::size_t reps, Execution exec, StdDivisor divisor) {
  cfg.validate();
  if (reps < 2) throw config_error("synthetic.config", "MSE study needs at least 2 replicates");
  MseStudy study;
  study.truth = cfg.true_penalty(divisor);

  for (std::size_t s = 0; s < sizes.size(); ++s) {
    const std::int64_t n = sizes[s];
    std::vector<std::optional<double>> sq_err(reps);
    for_each_index(exec, reps, [&](std::size_t r) {
      Rng rng = make_rng(cfg.seed, kMseStream + s, r);
      const auto t = sample_counts(cfg, n, rng);
      try {
        const auto rep = point_report(t, divisor);
        const double e = rep.delta_reo - study.truth;
        sq_err[r] = e * e;
      } catch (const Error&) {
        // empty positive group at this size
      }
    });
    MseRow row;
    row.n = n;
    std::vector<double> ok;
    for (const auto& e : sq_err) {
      if (e) {
        ok.push_back(*e);
      } else {
        ++row.failures;
      }
    }
    row.replicates = ok.size();
    if (!ok.empty()) {
      row.mse = std::accumulate(ok.begin(), ok.end(), 0.0) / static_cast<double>(ok.size());
    }
    if (ok.size() > 1) {
      double ss = 0.0;
      for (double e : ok) ss += (e - row.mse) * (e - row.mse);
      row.mse_se = std::sqrt(ss / static_cast<double>(ok.size() - 1)) /
                   std::sqrt(static_cast<double>(ok.size()));
    }
    study.rows.push_back(row);
  }

  std::vector<double> xs, ys;
  for (const auto& row : study.rows) {
    if (row.mse > 0.0) {
      xs.push_back(std::log10(static_cast<double>(row.n)));
      ys.push_back(std::log10(row.mse));
    }
  }
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    study.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    study.intercept = my - study.slope * mx;
  }
  return study;
}

RowSet synthesize_rows(const SimulationConfig& cfg, TrafficSource source, std::int64_t rows,
                       Rng& rng) {
  cfg.validate();
  const auto cells = source == TrafficSource::Random ? cfg.random_cells() : cfg.default_cells();
  const auto counts = multinomial(rows, cells, rng);
  std::vector<std::uint16_t> out;
  out.reserve(static_cast<std::size_t>(rows));
  for (std::size_t c = 0; c < counts.size(); ++c) {
    out.insert(out.end(), static_cast<std::size_t>(counts[c]), static_cast<std::uint16_t>(c));
  }
  std::shuffle(out.begin(), out.end(), rng);
  return RowSet(cfg.groups, std::move(out));
}

std::vector<TrafficRecord> synthesize_records(const SimulationConfig& cfg, TrafficSource source,
                                              std::int64_t rows, Rng& rng,
                                              std::optional<std::chrono::year_month_day> date) {
  const auto set = synthesize_rows(cfg, source, rows, rng);
  std::vector<TrafficRecord> out;
  out.reserve(set.size());
  for (auto c : set.cells()) {
    TrafficRecord r;
    r.source = source;
    r.group = RowSet::cell_group(c);
    r.signals = RowSet::cell_label(c) ? draw_signals(rng) : EngagementSignals{};
    r.label = r.signals->any();
    r.date = date;
    out.push_back(r);
  }
  return out;
}

std::vector<TrafficRecord> mixed_stream(const SimulationConfig& cfg, std::int64_t requests,
                                        std::size_t rows_per_request, Rng& rng) {
  cfg.validate();
  const auto rand_cells = cfg.random_cells();
  const auto rec_cells = cfg.default_cells();
  std::discrete_distribution<std::size_t> rand_draw(rand_cells.begin(), rand_cells.end());
  std::discrete_distribution<std::size_t> rec_draw(rec_cells.begin(), rec_cells.end());
  std::bernoulli_distribution activated(cfg.p_act);
  std::vector<TrafficRecord> out;
  out.reserve(static_cast<std::size_t>(requests) * rows_per_request);
  for (std::int64_t r = 0; r < requests; ++r) {
    const bool random = activated(rng);
    for (std::size_t i = 0; i < rows_per_request; ++i) {
      const auto c = random ? rand_draw(rng) : rec_draw(rng);
      TrafficRecord rec;
      rec.source = random ? TrafficSource::Random : TrafficSource::Default;
      rec.group = c / 2;
      rec.label = (c & 1U) != 0;
      out.push_back(rec);
    }
  }
  return out;
}

std::vector<TrafficRecord> boosted_stream(std::span<const TrafficRecord> base,
                                          std::span<const double> weights, Rng& rng,
                                          const BoostOptions& opts) {
  for (double w : weights) {
    if (!(w > 0.0)) throw config_error("synthetic.config", "boosting weights must be positive");
  }
  for (const auto& r : base) {
    if (r.source == TrafficSource::Default && r.group >= weights.size()) {
      throw config_error("synthetic.config",
                         "no boosting weight for group " + std::to_string(r.group + 1));
    }
  }
  std::vector<TrafficRecord> out;
  if (opts.mode == BoostMode::WithoutReplacement) {
    if (!(opts.rate > 0.0 && opts.rate <= 1.0)) {
      throw config_error("synthetic.config", "boost sampling rate must lie in (0, 1]");
    }
    const double w_max = weights.empty() ? 1.0 : *std::max_element(weights.begin(), weights.end());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (const auto& r : base) {
      if (r.source == TrafficSource::Random) {
        out.push_back(r);
        continue;
      }
      if (u(rng) < opts.rate * weights[r.group] / w_max) out.push_back(r);
    }
    return out;
  }

  std::vector<std::size_t> defaults;
  std::vector<double> row_weights;
  for (std::size_t i = 0; i < base.size(); ++i) {
    if (base[i].source == TrafficSource::Random) {
      out.push_back(base[i]);
    } else {
      defaults.push_back(i);
      row_weights.push_back(weights[base[i].group]);
    }
  }
  if (defaults.empty()) return out;
  const std::int64_t draws = opts.size > 0 ? opts.size : static_cast<std::int64_t>(defaults.size());
  std::discrete_distribution<std::size_t> pick(row_weights.begin(), row_weights.end());
  for (std::int64_t i = 0; i < draws; ++i) out.push_back(base[defaults[pick(rng)]]);
  return out;
}

std::vector<double> weights_from_young_adult(const std::map<int, double>& by_value) {
  std::vector<double> w(2);
  for (int value : {1, 0}) {
    auto it = by_value.find(value);
    if (it == by_value.end()) {
      throw config_error("synthetic.config",
                         "no boosting weight for young_adult=" + std::to_string(value));
    }
    if (!(it->second > 0.0)) {
      throw config_error("synthetic.config", "boosting weights must be positive");
    }
    w[value == 1 ? 0 : 1] = it->second;
  }
  return w;
}

std::vector<double> enumerate_utilities(std::span<const PoolRow> pool, std::size_t groups) {
  std::vector<std::int64_t> hit(groups, 0);
  std::vector<std::int64_t> pos(groups, 0);
  for (const auto& r : pool) {
    if (r.group >= groups) throw data_error("synthetic.schema", "pool row group out of range");
    if (!r.label) continue;
    ++pos[r.group];
    if (r.recommended) ++hit[r.group];
  }
  std::vector<double> u(groups);
  for (std::size_t k = 0; k < groups; ++k) {
    if (pos[k] == 0) {
      throw data_error("synthetic.undefined_utility",
                       "group " + std::to_string(k + 1) + " has no positive pair");
    }
    u[k] = static_cast<double>(hit[k]) / static_cast<double>(pos[k]);
  }
  return u;
}

IdentifiabilityPair identifiability_pair(std::span<const PoolRow> recommended,
                                         std::size_t groups, std::int64_t m0,
                                         StdDivisor divisor) {
  if (groups == 0) throw config_error("synthetic.config", "group count must be positive");
  if (m0 < 1) throw config_error("synthetic.config", "m0 must be at least 1");
  std::vector<std::int64_t> positives(groups, 0);
  for (const auto& r : recommended) {
    if (!r.recommended) {
      throw config_error("synthetic.config", "recommended subset contains an R=0 row");
    }
    if (r.group >= groups) throw data_error("synthetic.schema", "row group out of range");
    if (r.label) ++positives[r.group];
  }
  if (std::all_of(positives.begin(), positives.end(), [](auto c) { return c == 0; })) {
    throw config_error("synthetic.trivial_subset",
                       "recommended subset is trivial: a nontrivial subset has at least "
                       "one pair with a positive preference label");
  }
  for (std::size_t k = 0; k < groups; ++k) {
    if (positives[k] == 0) {
      throw config_error("synthetic.undefined_utility",
                         "group " + std::to_string(k + 1) +
                             " has no positive recommended pair, so its utility is undefined");
    }
  }

  IdentifiabilityPair out;
  out.target_group = 0;
  out.alpha = static_cast<double>(m0) / static_cast<double>(positives[0]);
  out.fair.assign(recommended.begin(), recommended.end());
  out.unfair.assign(recommended.begin(), recommended.end());
  out.fair.insert(out.fair.end(), static_cast<std::size_t>(m0), PoolRow{false, false, 0});
  out.unfair.insert(out.unfair.end(), static_cast<std::size_t>(m0), PoolRow{false, true, 0});

  out.fair_utilities = enumerate_utilities(out.fair, groups);
  out.unfair_utilities = enumerate_utilities(out.unfair, groups);
  out.fair_penalty = reo_penalty(out.fair_utilities, divisor);
  out.unfair_penalty = reo_penalty(out.unfair_utilities, divisor);

  const double k = static_cast<double>(groups);
  const double denom = 1.0 + (1.0 + out.alpha) * (k - 1.0);
  const double root = divisor == StdDivisor::K ? std::sqrt(k - 1.0) : std::sqrt(k);
  out.predicted_unfair_penalty = out.alpha * root / denom;
  return out;
}

}  // namespace reo
