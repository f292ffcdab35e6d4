#pragma once

// Point estimators of the ranking-based equal opportunity (REO) metrics and
// the label-free alternatives (exposure parity, user-side precision).
//
// Group utility U_k = P(R=1 | Y=1, S=s_k) is not observable from recommended
// rows alone. Factoring it with Bayes' rule gives
//
//   U_k = P(Y=1, S=s_k | R=1) / P(Y=1, S=s_k) * P(R=1)
//
// where the numerator is estimated on default traffic (Q_hat) and the
// denominator on uniformly random traffic (P_hat). The common factor P(R=1)
// cancels out of every relative metric below.

#include <cstddef>
#include <span>
#include <vector>

#include "reo/parallel.hpp"
#include "reo/types.hpp"

namespace reo {

/// Single-pass tally. Throws config error when groups == 0 and data error
/// naming the row when a record's group is out of range.
GroupTally tally(std::span<const TrafficRecord> records, std::size_t groups,
                 Execution exec = Execution::Serial);

struct PqEstimate {
  std::vector<double> p_hat;  // positive share in random traffic, per group
  std::vector<double> q_hat;  // positive share in default traffic, per group
  /// Groups with p_hat == 0; estimate_utilities() will reject these.
  std::vector<std::size_t> degenerate_groups;
};

PqEstimate estimate_pq(const GroupTally& t);

/// U_hat_k = Q_hat_k / P_hat_k. Throws a data error naming the first group
/// with P_hat_k == 0.
UtilityVector estimate_utilities(std::span<const double> p_hat,
                                 std::span<const double> q_hat);

/// Delta U_k = U_k / mean(U) - 1.
std::vector<double> relative_utilities(std::span<const double> utilities);

/// sqrt(sum(Delta U_k^2) / d) with d = K or K-1; equals std(U) / mean(U).
double penalty_from_relative(std::span<const double> delta_u,
                             StdDivisor divisor = StdDivisor::K);

/// std(U) / mean(U). Zero iff all utilities are equal; scale invariant.
double reo_penalty(std::span<const double> utilities,
                   StdDivisor divisor = StdDivisor::K);

/// Full point-estimate pipeline on a tally (no uncertainty).
FairnessReport point_report(const GroupTally& t,
                            StdDivisor divisor = StdDivisor::K);

/// Ranking-based statistical parity from exposure counters:
/// U_k = shown_k / total_k, Delta U_k = U_k - mean(U), penalty std/mean.
/// Needs neither labels nor random traffic.
FairnessReport rsp_metrics(const GroupTally& t,
                           StdDivisor divisor = StdDivisor::K);

struct UserPrecision {
  UtilityVector utilities;              // precision@N_show per user group
  std::vector<std::int64_t> requests;   // requests seen per group
};

/// Constrained user-side utility: precision@N_show per user group, computed
/// on default traffic only. Each element of `requests` holds the rows served
/// for one request; `group` is the user-side attribute and must be constant
/// within a request. Groups without requests get utility 0 and a zero count.
UserPrecision user_side_precision(
    std::span<const std::vector<TrafficRecord>> requests, std::size_t n_show,
    std::size_t groups);

}  // namespace reo
