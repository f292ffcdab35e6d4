#include "reo/inference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "reo/error.hpp"
#include "reo/kernels.hpp"
#include "reo/quantiles.hpp"
#include "reo/rng.hpp"
#include "resampling.hpp"

namespace reo {
namespace {

constexpr std::uint64_t kControlRecStream = 0xc0de1u;
constexpr std::uint64_t kControlRandStream = 0xc0de2u;
constexpr std::uint64_t kTreatmentRecStream = 0x7ea71u;
constexpr std::uint64_t kTreatmentRandStream = 0x7ea72u;

bool all_equal(const std::vector<double>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::not_equal_to<>()) == v.end();
}

MetricDifference make_difference(double estimate, double se, double z) {
  MetricDifference d;
  d.estimate = estimate;
  d.se = se;
  d.ci = Interval{estimate - z * se, estimate + z * se};
  d.significant = d.ci.excludes_zero();
  return d;
}

void require_same_groups(const RowSet& a, const RowSet& b, const RowSet& c) {
  if (a.groups() != b.groups() || a.groups() != c.groups() || a.groups() == 0) {
    throw config_error("inference.config", "datasets disagree on the group count");
  }
}

GroupTally tally_from_histograms(const detail::Histogram& rec, const detail::Histogram& rand) {
  GroupTally t(rec.size() / 2);
  for (std::size_t g = 0; g < t.groups; ++g) {
    t.pos_rec[g] = rec[2 * g + 1];
    t.pos_rand[g] = rand[2 * g + 1];
    t.n_rec += rec[2 * g] + rec[2 * g + 1];
    t.n_rand += rand[2 * g] + rand[2 * g + 1];
  }
  return t;
}

double relative_bias(double mean, double point) {
  if (mean == point) return 0.0;
  return (mean - point) / point;
}

Error with_arm(const Error& e, const char* arm) {
  return Error(e.kind(), e.code(), std::string(arm) + " arm: " + e.what());
}

struct FoldValues {
  std::vector<std::vector<double>> per_fold;  // fold -> quantities
};

std::vector<std::uint32_t> shuffled_indices(std::size_t n, std::uint64_t seed,
                                            std::uint64_t stream) {
  std::vector<std::uint32_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0U);
  Rng rng = make_rng(seed, stream);
  std::shuffle(idx.begin(), idx.end(), rng);
  return idx;
}

FoldValues fold_metrics(const RowSet& rec, const RowSet& rand, std::size_t folds,
                        std::uint64_t rec_stream, std::uint64_t rand_stream,
                        const PartitionOptions& opts, const char* arm) {
  const std::size_t rec_size = rec.size() / folds;
  const std::size_t rand_size = rand.size() / folds;
  if (rec_size == 0 || rand_size == 0) {
    throw data_error("inference.fold_degenerate",
                     std::string(arm) + " arm: too few rows for " + std::to_string(folds) +
                         " folds");
  }
  const auto rec_idx = shuffled_indices(rec.size(), opts.seed, rec_stream);
  const auto rand_idx = shuffled_indices(rand.size(), opts.seed, rand_stream);
  const auto rec_cells = rec.cells();
  const auto rand_cells = rand.cells();

  FoldValues out;
  out.per_fold.resize(folds);
  for_each_index(opts.exec, folds, [&](std::size_t j) {
    detail::Histogram hrec(rec.cell_count(), 0);
    detail::Histogram hrand(rand.cell_count(), 0);
    for (std::size_t i = j * rec_size; i < (j + 1) * rec_size; ++i) ++hrec[rec_cells[rec_idx[i]]];
    for (std::size_t i = j * rand_size; i < (j + 1) * rand_size; ++i) {
      ++hrand[rand_cells[rand_idx[i]]];
    }
    auto v = detail::metric_vector(hrec, hrand, opts.divisor);
    if (!v) {
      throw data_error("inference.fold_degenerate",
                       std::string(arm) + " arm: fold " + std::to_string(j + 1) +
                           " has a group without positive random rows");
    }
    out.per_fold[j] = std::move(*v);
  });
  return out;
}

void fold_moments(const FoldValues& f, std::size_t q, double& mean, double& sd) {
  const double m = static_cast<double>(f.per_fold.size());
  mean = 0.0;
  for (const auto& v : f.per_fold) mean += v[q];
  mean /= m;
  double ss = 0.0;
  for (const auto& v : f.per_fold) ss += (v[q] - mean) * (v[q] - mean);
  sd = std::sqrt(ss / (m - 1.0));
}

}  // namespace

std::string to_string(TestMethod m) {
  switch (m) {
    case TestMethod::DeltaMethod: return "delta";
    case TestMethod::Partition: return "partition";
    case TestMethod::Bootstrap: return "bootstrap";
    case TestMethod::BCaBootstrap: return "bca";
  }
  return "unknown";
}

VariancePropagation propagate_variance(const GroupTally& t, const PqEstimate& pq,
                                       const FairnessReport& report) {
  const std::size_t k = report.utilities.size();
  const auto& u = report.utilities;
  const double n_rec = static_cast<double>(t.n_rec);
  const double n_rand = static_cast<double>(t.n_rand);
  const double kk = static_cast<double>(k);

  VariancePropagation vp;
  vp.gamma = SquareMatrix(k);
  for (std::size_t i = 0; i < k; ++i) {
    const double q = pq.q_hat[i];
    const double p = pq.p_hat[i];
    vp.gamma(i, i) = u[i] * u[i] * ((1.0 - q) / q / n_rec + (1.0 - p) / p / n_rand);
  }

  const double sum = std::accumulate(u.begin(), u.end(), 0.0);
  vp.jacobian = SquareMatrix(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t c = 0; c < k; ++c) {
      const double kron = j == c ? sum : 0.0;
      vp.jacobian(j, c) = kk * (kron - u[c]) / (sum * sum);
    }
  }

  // Sigma = G^T Gamma G with Gamma diagonal
  vp.sigma = SquareMatrix(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      double s = 0.0;
      for (std::size_t j = 0; j < k; ++j) {
        s += vp.jacobian(j, a) * vp.gamma(j, j) * vp.jacobian(j, b);
      }
      vp.sigma(a, b) = s;
      vp.sigma(b, a) = s;
    }
  }

  if (!report.reo_at_boundary) {
    const double d = divisor_value(report.divisor, k);
    vp.gradient.resize(k);
    for (std::size_t j = 0; j < k; ++j) {
      vp.gradient[j] = report.delta_u[j] / (d * report.delta_reo);
    }
    double xi = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = 0; b < k; ++b) {
        xi += vp.gradient[a] * vp.sigma(a, b) * vp.gradient[b];
      }
    }
    vp.xi = xi;
  }
  return vp;
}

FairnessReport delta_method_report(const GroupTally& t, double confidence,
                                   StdDivisor divisor, bool keep_diagnostics) {
  check_confidence(confidence);
  const auto pq = estimate_pq(t);
  auto u = estimate_utilities(pq.p_hat, pq.q_hat);
  for (std::size_t k = 0; k < t.groups; ++k) {
    if (pq.q_hat[k] <= 0.0 || pq.q_hat[k] >= 1.0) {
      throw data_error("inference.boundary_variance",
                       "group " + std::to_string(k + 1) + " has Q_hat = " +
                           std::to_string(pq.q_hat[k]) +
                           "; the delta-method variance needs 0 < Q_hat < 1");
    }
  }

  FairnessReport r;
  r.utilities = std::move(u.values);
  r.delta_u = relative_utilities(r.utilities);
  r.delta_reo = penalty_from_relative(r.delta_u, divisor);
  r.n_rand = t.n_rand;
  r.n_rec = t.n_rec;
  r.divisor = divisor;
  r.confidence = confidence;
  r.reo_at_boundary = r.delta_reo == 0.0 || all_equal(r.utilities);
  if (r.reo_at_boundary) r.delta_reo = 0.0;

  auto vp = propagate_variance(t, pq, r);
  const double z = normal_upper_quantile((1.0 - confidence) / 2.0);
  r.se_delta_u.resize(t.groups);
  r.ci_delta_u.resize(t.groups);
  for (std::size_t k = 0; k < t.groups; ++k) {
    const double se = std::sqrt(std::max(vp.sigma(k, k), 0.0));
    r.se_delta_u[k] = se;
    r.ci_delta_u[k] = Interval{r.delta_u[k] - z * se, r.delta_u[k] + z * se};
  }
  if (vp.xi) {
    const double se = std::sqrt(std::max(*vp.xi, 0.0));
    r.se_delta_reo = se;
    r.ci_delta_reo = Interval{r.delta_reo - z * se, r.delta_reo + z * se};
  }
  if (keep_diagnostics) r.diagnostics = std::move(vp);
  return r;
}

ABTestReport ab_delta_test(const GroupTally& control, const GroupTally& treatment,
                           double confidence, StdDivisor divisor) {
  check_confidence(confidence);
  if (control.groups != treatment.groups) {
    throw config_error("inference.config", "arms disagree on the group count");
  }
  FairnessReport rc;
  FairnessReport rt;
  try {
    rc = delta_method_report(control, confidence, divisor);
  } catch (const Error& e) {
    throw with_arm(e, "control");
  }
  try {
    rt = delta_method_report(treatment, confidence, divisor);
  } catch (const Error& e) {
    throw with_arm(e, "treatment");
  }

  ABTestReport out;
  out.method = TestMethod::DeltaMethod;
  out.confidence = confidence;
  out.divisor = divisor;
  out.n_rand = control.n_rand;
  out.shared_random = control.n_rand == treatment.n_rand && control.pos_rand == treatment.pos_rand;
  if (!out.shared_random) {
    out.notes.push_back("arms do not share the same random traffic");
  }
  const double z = normal_upper_quantile((1.0 - confidence) / 2.0);
  for (std::size_t k = 0; k < control.groups; ++k) {
    const double se = std::sqrt(rt.se_delta_u[k] * rt.se_delta_u[k] +
                                rc.se_delta_u[k] * rc.se_delta_u[k]);
    out.d_k.push_back(make_difference(rt.delta_u[k] - rc.delta_u[k], se, z));
  }
  if (rc.se_delta_reo && rt.se_delta_reo) {
    const double se = std::sqrt(*rt.se_delta_reo * *rt.se_delta_reo +
                                *rc.se_delta_reo * *rc.se_delta_reo);
    out.d_reo = make_difference(rt.delta_reo - rc.delta_reo, se, z);
  } else {
    out.notes.push_back("penalty difference unavailable: an arm's penalty is exactly zero");
  }
  return out;
}

double welch_dof(double s_treatment, std::size_t m_treatment, double s_control,
                 std::size_t m_control) {
  const double mt = static_cast<double>(m_treatment);
  const double mc = static_cast<double>(m_control);
  const double a = s_treatment * s_treatment / mt;
  const double b = s_control * s_control / mc;
  const double den = a * a / (mt - 1.0) + b * b / (mc - 1.0);
  if (!(den > 0.0)) return mt + mc - 2.0;
  // rounding can leave an exact integer just below itself
  const double nu = (a + b) * (a + b) / den;
  return std::floor(nu * (1.0 + 1e-12));
}

ABTestReport ab_partition_test(const RowSet& control, const RowSet& treatment,
                               const RowSet& random, const PartitionOptions& opts) {
  check_confidence(opts.confidence);
  if (opts.folds_control < 2 || opts.folds_treatment < 2) {
    throw config_error("inference.config", "partition test needs at least 2 folds per arm");
  }
  require_same_groups(control, treatment, random);
  const std::size_t k = control.groups();

  const auto fc = fold_metrics(control, random, opts.folds_control, kControlRecStream,
                               kControlRandStream, opts, "control");
  const auto ft = fold_metrics(treatment, random, opts.folds_treatment, kTreatmentRecStream,
                               kTreatmentRandStream, opts, "treatment");

  ABTestReport out;
  out.method = TestMethod::Partition;
  out.confidence = opts.confidence;
  out.divisor = opts.divisor;
  out.n_rand = static_cast<std::int64_t>(random.size());
  out.folds_control = opts.folds_control;
  out.folds_treatment = opts.folds_treatment;
  out.notes.push_back("random traffic partitioned independently per arm");

  const double tail = (1.0 - opts.confidence) / 2.0;
  for (std::size_t q = 0; q <= k; ++q) {
    double mu_c = 0.0, s_c = 0.0, mu_t = 0.0, s_t = 0.0;
    fold_moments(fc, q, mu_c, s_c);
    fold_moments(ft, q, mu_t, s_t);
    const double se = std::sqrt(s_t * s_t / static_cast<double>(opts.folds_treatment) +
                                s_c * s_c / static_cast<double>(opts.folds_control));
    const double nu = welch_dof(s_t, opts.folds_treatment, s_c, opts.folds_control);
    auto d = make_difference(mu_t - mu_c, se, t_upper_quantile(tail, nu));
    if (q < k) {
      out.d_k.push_back(d);
    } else {
      out.d_reo = d;
      out.welch_dof_reo = nu;
    }
  }
  return out;
}

ABTestReport ab_bootstrap_test(const RowSet& control, const RowSet& treatment,
                               const RowSet& random, const BootstrapOptions& opts) {
  require_same_groups(control, treatment, random);
  const std::size_t k = control.groups();
  const StdDivisor divisor = opts.divisor;
  detail::Statistic stat =
      [divisor](std::span<const detail::Histogram> h) -> std::optional<std::vector<double>> {
    auto c = detail::metric_vector(h[0], h[2], divisor);
    auto t = detail::metric_vector(h[1], h[2], divisor);
    if (!c || !t) return std::nullopt;
    for (std::size_t i = 0; i < t->size(); ++i) (*t)[i] -= (*c)[i];
    return t;
  };

  const RowSet* sets[] = {&control, &treatment, &random};
  auto draws = detail::draw_bootstrap(sets, stat, opts);
  std::vector<double> mean, sd;
  detail::replicate_moments(draws, mean, sd);

  ABTestReport out;
  out.method = opts.variant == BootstrapVariant::BCa ? TestMethod::BCaBootstrap
                                                     : TestMethod::Bootstrap;
  out.confidence = opts.confidence;
  out.divisor = divisor;
  out.n_rand = static_cast<std::int64_t>(random.size());
  out.replicates = opts.replicates;
  out.discarded = draws.discarded;
  const double z = normal_upper_quantile((1.0 - opts.confidence) / 2.0);

  std::vector<double> accel;
  if (opts.variant == BootstrapVariant::BCa) {
    std::vector<detail::Histogram> original;
    for (const RowSet* s : sets) {
      original.push_back(kernels::count_cells_serial(s->cells(), s->cell_count()));
    }
    accel = detail::jackknife_acceleration(original, stat, k + 1);
    out.notes.push_back("BCa interval: jackknife acceleration, extended method");
  }
  for (std::size_t q = 0; q <= k; ++q) {
    auto d = make_difference(draws.point[q], sd[q], z);
    if (opts.variant == BootstrapVariant::BCa) {
      d.ci = detail::bca_interval(draws, q, accel[q], opts.confidence);
      d.significant = d.ci.excludes_zero();
    }
    if (q < k) {
      out.d_k.push_back(d);
    } else {
      out.d_reo = d;
    }
  }
  return out;
}

BootstrapReport bootstrap_report(const RowSet& recommended, const RowSet& random,
                                 const BootstrapOptions& opts) {
  if (recommended.groups() != random.groups() || random.groups() == 0) {
    throw config_error("inference.config", "datasets disagree on the group count");
  }
  const std::size_t k = random.groups();
  const StdDivisor divisor = opts.divisor;
  detail::Statistic stat =
      [divisor](std::span<const detail::Histogram> h) -> std::optional<std::vector<double>> {
    return detail::metric_vector(h[0], h[1], divisor);
  };
  const RowSet* sets[] = {&recommended, &random};
  auto draws = detail::draw_bootstrap(sets, stat, opts);
  std::vector<double> mean, sd;
  detail::replicate_moments(draws, mean, sd);

  std::vector<detail::Histogram> original = {
      kernels::count_cells_serial(recommended.cells(), recommended.cell_count()),
      kernels::count_cells_serial(random.cells(), random.cell_count())};

  BootstrapReport out;
  out.variant = opts.variant;
  out.replicates = opts.replicates;
  out.discarded = draws.discarded;
  out.report = point_report(tally_from_histograms(original[0], original[1]), divisor);
  auto& r = out.report;
  r.confidence = opts.confidence;

  std::vector<double> accel;
  if (opts.variant == BootstrapVariant::BCa) {
    accel = detail::jackknife_acceleration(original, stat, k + 1);
  }
  const double z = normal_upper_quantile((1.0 - opts.confidence) / 2.0);
  auto interval = [&](std::size_t q) {
    if (opts.variant == BootstrapVariant::BCa) {
      return detail::bca_interval(draws, q, accel[q], opts.confidence);
    }
    return Interval{draws.point[q] - z * sd[q], draws.point[q] + z * sd[q]};
  };
  for (std::size_t g = 0; g < k; ++g) {
    r.se_delta_u.push_back(sd[g]);
    r.ci_delta_u.push_back(interval(g));
    out.relative_bias_delta_u.push_back(relative_bias(mean[g], draws.point[g]));
  }
  r.se_delta_reo = sd[k];
  r.ci_delta_reo = interval(k);
  out.relative_bias_delta_reo = relative_bias(mean[k], draws.point[k]);
  return out;
}

BiasEstimate bootstrap_bias(const RowSet& recommended, const RowSet& random,
                            std::size_t replicates, std::uint64_t seed, StdDivisor divisor,
                            Execution exec) {
  BootstrapOptions opts;
  opts.replicates = replicates;
  opts.seed = seed;
  opts.divisor = divisor;
  opts.exec = exec;
  auto br = bootstrap_report(recommended, random, opts);
  BiasEstimate out;
  out.delta_u = std::move(br.relative_bias_delta_u);
  out.delta_reo = br.relative_bias_delta_reo;
  out.discarded = br.discarded;
  return out;
}

}  // namespace reo
