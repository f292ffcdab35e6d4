#pragma once

// Shared machinery of the bootstrap-based procedures. Not installed.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "reo/inference.hpp"

namespace reo::detail {

using Histogram = std::vector<std::int64_t>;

/// Statistic over one histogram per dataset; nullopt when undefined.
using Statistic =
    std::function<std::optional<std::vector<double>>(std::span<const Histogram>)>;

/// Delta U_1..K followed by the penalty, from default and random cell
/// histograms. nullopt when a group has no random positives or every
/// utility is zero.
std::optional<std::vector<double>> metric_vector(std::span<const std::int64_t> rec_hist,
                                                 std::span<const std::int64_t> rand_hist,
                                                 StdDivisor divisor);

struct BootstrapDraws {
  std::vector<double> point;
  /// replicate b -> statistic, empty when discarded; ordered by b
  std::vector<std::vector<double>> replicates;
  std::size_t discarded = 0;
};

BootstrapDraws draw_bootstrap(std::span<const RowSet* const> datasets,
                              const Statistic& statistic, const BootstrapOptions& opts);

/// Per-quantity mean and sample standard deviation over kept replicates.
void replicate_moments(const BootstrapDraws& draws, std::vector<double>& mean,
                       std::vector<double>& sd);

/// Jackknife acceleration for each quantity, grouping rows by cell since the
/// statistic only depends on histograms.
std::vector<double> jackknife_acceleration(std::span<const Histogram> histograms,
                                           const Statistic& statistic,
                                           std::size_t quantities);

/// BCa interval for quantity q.
Interval bca_interval(const BootstrapDraws& draws, std::size_t q, double acceleration,
                      double confidence);

}  // namespace reo::detail
