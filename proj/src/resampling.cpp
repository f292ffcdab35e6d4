#include "resampling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "reo/error.hpp"
#include "reo/kernels.hpp"
#include "reo/quantiles.hpp"
#include "reo/rng.hpp"

namespace reo::detail {
namespace {

constexpr std::uint64_t kBootstrapStream = 0xb0075u;

double quantile_sorted(std::span<const double> sorted, double alpha) {
  const double h = static_cast<double>(sorted.size() - 1) * std::clamp(alpha, 0.0, 1.0);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double inverse_normal_cdf(double p) {
  if (p == 0.5) return 0.0;
  return normal_upper_quantile(1.0 - p);
}

}  // namespace

std::optional<std::vector<double>> metric_vector(std::span<const std::int64_t> rec_hist,
                                                 std::span<const std::int64_t> rand_hist,
                                                 StdDivisor divisor) {
  const std::size_t k = rec_hist.size() / 2;
  std::int64_t n_rec = 0;
  std::int64_t n_rand = 0;
  for (auto c : rec_hist) n_rec += c;
  for (auto c : rand_hist) n_rand += c;
  if (n_rec == 0 || n_rand == 0) return std::nullopt;

  std::vector<double> u(k);
  double sum = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    const auto pos_rand = rand_hist[2 * g + 1];
    if (pos_rand == 0) return std::nullopt;
    const double q = static_cast<double>(rec_hist[2 * g + 1]) / static_cast<double>(n_rec);
    const double p = static_cast<double>(pos_rand) / static_cast<double>(n_rand);
    u[g] = q / p;
    sum += u[g];
  }
  if (!(sum > 0.0)) return std::nullopt;

  const double mean = sum / static_cast<double>(k);
  std::vector<double> out(k + 1);
  double ss = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    out[g] = u[g] / mean - 1.0;
    ss += out[g] * out[g];
  }
  out[k] = std::sqrt(ss / divisor_value(divisor, k));
  return out;
}

BootstrapDraws draw_bootstrap(std::span<const RowSet* const> datasets,
                              const Statistic& statistic, const BootstrapOptions& opts) {
  if (opts.replicates < 2) {
    throw config_error("inference.config", "bootstrap size must be at least 2");
  }
  check_confidence(opts.confidence);

  std::vector<Histogram> original;
  for (const RowSet* d : datasets) {
    if (d->empty()) throw data_error("inference.insufficient_data", "empty dataset");
    original.push_back(kernels::count_cells_serial(d->cells(), d->cell_count()));
  }
  auto point = statistic(original);
  if (!point) {
    throw data_error("metrics.degenerate_group",
                     "metrics undefined on the original data (a group has no "
                     "positive random rows)");
  }

  BootstrapDraws draws;
  draws.point = std::move(*point);
  draws.replicates.resize(opts.replicates);
  for_each_index(opts.exec, opts.replicates, [&](std::size_t b) {
    Rng rng = make_rng(opts.seed, kBootstrapStream, b);
    std::vector<Histogram> hists;
    hists.reserve(datasets.size());
    for (const RowSet* d : datasets) {
      hists.push_back(kernels::resample_cells(d->cells(), d->cell_count(), rng));
    }
    auto value = statistic(hists);
    if (value) draws.replicates[b] = std::move(*value);
  });

  for (const auto& r : draws.replicates) {
    if (r.empty()) ++draws.discarded;
  }
  const double fraction =
      static_cast<double>(draws.discarded) / static_cast<double>(opts.replicates);
  if (fraction > opts.max_discard_fraction || opts.replicates - draws.discarded < 2) {
    throw data_error("inference.unstable_bootstrap",
                     std::to_string(draws.discarded) + " of " +
                         std::to_string(opts.replicates) +
                         " bootstrap replicates had an empty positive group");
  }
  return draws;
}

void replicate_moments(const BootstrapDraws& draws, std::vector<double>& mean,
                       std::vector<double>& sd) {
  const std::size_t q = draws.point.size();
  mean.assign(q, 0.0);
  sd.assign(q, 0.0);
  std::size_t kept = 0;
  for (const auto& r : draws.replicates) {
    if (r.empty()) continue;
    ++kept;
    for (std::size_t i = 0; i < q; ++i) mean[i] += r[i];
  }
  for (auto& m : mean) m /= static_cast<double>(kept);
  for (const auto& r : draws.replicates) {
    if (r.empty()) continue;
    for (std::size_t i = 0; i < q; ++i) sd[i] += (r[i] - mean[i]) * (r[i] - mean[i]);
  }
  for (auto& s : sd) s = std::sqrt(s / static_cast<double>(kept - 1));
}

std::vector<double> jackknife_acceleration(std::span<const Histogram> histograms,
                                           const Statistic& statistic,
                                           std::size_t quantities) {
  std::vector<double> num(quantities, 0.0);
  std::vector<double> den(quantities, 0.0);
  std::vector<Histogram> work(histograms.begin(), histograms.end());

  for (std::size_t d = 0; d < histograms.size(); ++d) {
    const Histogram& h = histograms[d];
    // leave-one-out value for each occupied cell, weighted by its count
    std::vector<std::size_t> cells;
    std::vector<std::vector<double>> values;
    std::vector<double> weights;
    for (std::size_t c = 0; c < h.size(); ++c) {
      if (h[c] == 0) continue;
      --work[d][c];
      auto v = statistic(work);
      ++work[d][c];
      if (!v) continue;
      cells.push_back(c);
      values.push_back(std::move(*v));
      weights.push_back(static_cast<double>(h[c]));
    }
    const double n = std::accumulate(weights.begin(), weights.end(), 0.0);
    if (n < 2.0) continue;
    for (std::size_t q = 0; q < quantities; ++q) {
      double jbar = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) jbar += weights[i] * values[i][q];
      jbar /= n;
      double s2 = 0.0;
      double s3 = 0.0;
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double infl = (n - 1.0) * (jbar - values[i][q]);
        s2 += weights[i] * infl * infl;
        s3 += weights[i] * infl * infl * infl;
      }
      num[q] += s3 / (n * n * n);
      den[q] += s2 / (n * n);
    }
  }
  std::vector<double> a(quantities, 0.0);
  for (std::size_t q = 0; q < quantities; ++q) {
    if (den[q] > 0.0) a[q] = num[q] / (6.0 * std::pow(den[q], 1.5));
  }
  return a;
}

Interval bca_interval(const BootstrapDraws& draws, std::size_t q, double acceleration,
                      double confidence) {
  std::vector<double> sorted;
  sorted.reserve(draws.replicates.size());
  std::size_t below = 0;
  std::size_t ties = 0;
  const double theta = draws.point[q];
  for (const auto& r : draws.replicates) {
    if (r.empty()) continue;
    sorted.push_back(r[q]);
    if (r[q] < theta) ++below;
    if (r[q] == theta) ++ties;
  }
  std::sort(sorted.begin(), sorted.end());
  const double b = static_cast<double>(sorted.size());
  const double share = std::clamp((static_cast<double>(below) + 0.5 * ties) / b,
                                  0.5 / b, 1.0 - 0.5 / b);
  const double z0 = inverse_normal_cdf(share);
  const double z = normal_upper_quantile((1.0 - confidence) / 2.0);

  auto adjusted = [&](double zq) {
    const double t = z0 + zq;
    const double denom = 1.0 - acceleration * t;
    if (!(denom > 0.0)) return zq < 0.0 ? 0.0 : 1.0;
    return normal_cdf(z0 + t / denom);
  };
  return Interval{quantile_sorted(sorted, adjusted(-z)), quantile_sorted(sorted, adjusted(z))};
}

}  // namespace reo::detail
