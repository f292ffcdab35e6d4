#pragma once

// Uncertainty for the REO metrics: delta-method standard errors, and three
// ways to test a treatment-minus-control difference in an A/B experiment
// (delta method, fold partition with Welch's t, row bootstrap).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reo/metrics.hpp"
#include "reo/parallel.hpp"
#include "reo/types.hpp"

namespace reo {

/// Propagates the variance of the group utilities through
/// U -> Delta U -> penalty. `report` must hold point estimates for `t`.
VariancePropagation propagate_variance(const GroupTally& t, const PqEstimate& pq,
                                       const FairnessReport& report);

/// Point estimates plus delta-method standard errors and normal confidence
/// intervals at `confidence` = 1 - delta.
///
/// Throws `inference.boundary_variance` when some Q_hat_k is 0 or 1. When the
/// penalty is exactly 0 its gradient is undefined: the report then carries
/// SE and CI for every Delta U_k, leaves the penalty's SE/CI empty and sets
/// `reo_at_boundary`.
FairnessReport delta_method_report(const GroupTally& t, double confidence = 0.95,
                                   StdDivisor divisor = StdDivisor::K,
                                   bool keep_diagnostics = false);

enum class TestMethod { DeltaMethod, Partition, Bootstrap, BCaBootstrap };

std::string to_string(TestMethod m);

struct MetricDifference {
  double estimate = 0.0;
  double se = 0.0;
  Interval ci;
  bool significant = false;  // ci excludes zero
};

struct ABTestReport {
  TestMethod method = TestMethod::DeltaMethod;
  double confidence = 0.95;
  StdDivisor divisor = StdDivisor::K;
  std::vector<MetricDifference> d_k;
  /// Empty when either arm's penalty sits at zero (delta method only).
  std::optional<MetricDifference> d_reo;

  // diagnostics
  std::int64_t n_rand = 0;
  bool shared_random = true;
  std::size_t folds_control = 0;
  std::size_t folds_treatment = 0;
  std::optional<double> welch_dof_reo;
  std::size_t replicates = 0;
  std::size_t discarded = 0;
  std::vector<std::string> notes;
};

/// Delta-method A/B test. Each arm's tally carries its random-traffic part;
/// the arms are meant to share it, and `shared_random` records whether they
/// do. Arms are treated as independent: SE(D) = sqrt(SE_T^2 + SE_C^2).
ABTestReport ab_delta_test(const GroupTally& control, const GroupTally& treatment,
                           double confidence = 0.95, StdDivisor divisor = StdDivisor::K);

/// Welch-Satterthwaite degrees of freedom, floored.
double welch_dof(double s_treatment, std::size_t m_treatment, double s_control,
                 std::size_t m_control);

struct PartitionOptions {
  std::size_t folds_control = 10;
  std::size_t folds_treatment = 10;
  double confidence = 0.95;
  std::uint64_t seed = 0;
  StdDivisor divisor = StdDivisor::K;
  Execution exec = Execution::Serial;
};

/// Splits each arm's default rows and (independently per arm) the shared
/// random rows into equal disjoint folds after a seeded shuffle, drops the
/// remainder from the tail, computes the metrics on every fold and compares
/// fold means with Welch's t interval.
ABTestReport ab_partition_test(const RowSet& control, const RowSet& treatment,
                               const RowSet& random, const PartitionOptions& opts);

enum class BootstrapVariant { Standard, BCa };

struct BootstrapOptions {
  std::size_t replicates = 100;
  double confidence = 0.95;
  BootstrapVariant variant = BootstrapVariant::Standard;
  std::uint64_t seed = 0;
  StdDivisor divisor = StdDivisor::K;
  Execution exec = Execution::Serial;
  /// Replicates with an empty positive group are discarded; more than this
  /// fraction discarded is an error.
  double max_discard_fraction = 0.10;
};

/// Row-level bootstrap of the three datasets (each resampled independently
/// with replacement). Standard variant: estimate +- z * std(replicates).
/// BCa variant: bias-corrected and accelerated percentile interval with the
/// acceleration taken from the jackknife.
ABTestReport ab_bootstrap_test(const RowSet& control, const RowSet& treatment,
                               const RowSet& random, const BootstrapOptions& opts);

/// Single-arm bootstrap: the report's SE/CI come from the bootstrap, and the
/// relative bias (mean(replicates) - estimate) / estimate is attached.
struct BootstrapReport {
  FairnessReport report;
  std::vector<double> relative_bias_delta_u;
  double relative_bias_delta_reo = 0.0;
  BootstrapVariant variant = BootstrapVariant::Standard;
  std::size_t replicates = 0;
  std::size_t discarded = 0;
};

BootstrapReport bootstrap_report(const RowSet& recommended, const RowSet& random,
                                 const BootstrapOptions& opts);

struct BiasEstimate {
  std::vector<double> delta_u;  // relative bias per group
  double delta_reo = 0.0;
  std::size_t discarded = 0;
};

BiasEstimate bootstrap_bias(const RowSet& recommended, const RowSet& random,
                            std::size_t replicates, std::uint64_t seed,
                            StdDivisor divisor = StdDivisor::K,
                            Execution exec = Execution::Serial);

}  // namespace reo
