#include "reo/metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "reo/error.hpp"
#include "reo/kernels.hpp"

namespace reo {
namespace {

double mean_of(std::span<const double> v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

void require_groups(std::size_t k) {
  if (k == 0) throw config_error("metrics.config", "group count K must be positive");
}

}  // namespace

GroupTally tally(std::span<const TrafficRecord> records, std::size_t groups,
                 Execution exec) {
  require_groups(groups);
  return exec == Execution::Serial ? kernels::tally_serial(records, groups)
                                   : kernels::tally_parallel(records, groups);
}

PqEstimate estimate_pq(const GroupTally& t) {
  require_groups(t.groups);
  if (t.n_rand <= 0) {
    throw data_error("metrics.insufficient_data", "random traffic is empty");
  }
  if (t.n_rec <= 0) {
    throw data_error("metrics.insufficient_data", "default traffic is empty");
  }
  PqEstimate out;
  out.p_hat.resize(t.groups);
  out.q_hat.resize(t.groups);
  const auto nr = static_cast<double>(t.n_rand);
  const auto nd = static_cast<double>(t.n_rec);
  for (std::size_t k = 0; k < t.groups; ++k) {
    out.p_hat[k] = static_cast<double>(t.pos_rand[k]) / nr;
    out.q_hat[k] = static_cast<double>(t.pos_rec[k]) / nd;
    if (t.pos_rand[k] == 0) out.degenerate_groups.push_back(k);
  }
  return out;
}

UtilityVector estimate_utilities(std::span<const double> p_hat,
                                 std::span<const double> q_hat) {
  if (p_hat.size() != q_hat.size() || p_hat.empty()) {
    throw config_error("metrics.config", "P_hat and Q_hat must have the same positive length");
  }
  UtilityVector u;
  u.provenance = Provenance::Estimated;
  u.values.resize(p_hat.size());
  for (std::size_t k = 0; k < p_hat.size(); ++k) {
    if (!(p_hat[k] > 0.0)) {
      throw data_error("metrics.degenerate_group",
                       "group " + std::to_string(k + 1) +
                           " has no positive rows in random traffic (P_hat = 0); "
                           "collect more random traffic");
    }
    u.values[k] = q_hat[k] / p_hat[k];
  }
  return u;
}

std::vector<double> relative_utilities(std::span<const double> utilities) {
  require_groups(utilities.size());
  const double mean = mean_of(utilities);
  if (!(mean > 0.0) || !std::isfinite(mean)) {
    throw data_error("metrics.degenerate_utilities",
                     "mean utility is zero; relative utilities are undefined");
  }
  std::vector<double> out(utilities.size());
  for (std::size_t k = 0; k < utilities.size(); ++k) out[k] = utilities[k] / mean - 1.0;
  return out;
}

double penalty_from_relative(std::span<const double> delta_u, StdDivisor divisor) {
  const double d = divisor_value(divisor, delta_u.size());
  if (!(d > 0.0)) {
    throw config_error("metrics.config", "std divisor K-1 needs at least two groups");
  }
  double ss = 0.0;
  for (double x : delta_u) ss += x * x;
  return std::sqrt(ss / d);
}

double reo_penalty(std::span<const double> utilities, StdDivisor divisor) {
  const auto du = relative_utilities(utilities);
  return penalty_from_relative(du, divisor);
}

FairnessReport point_report(const GroupTally& t, StdDivisor divisor) {
  const auto pq = estimate_pq(t);
  auto u = estimate_utilities(pq.p_hat, pq.q_hat);
  FairnessReport r;
  r.utilities = std::move(u.values);
  r.delta_u = relative_utilities(r.utilities);
  r.delta_reo = penalty_from_relative(r.delta_u, divisor);
  r.n_rand = t.n_rand;
  r.n_rec = t.n_rec;
  r.divisor = divisor;
  r.reo_at_boundary = r.delta_reo == 0.0;
  return r;
}

FairnessReport rsp_metrics(const GroupTally& t, StdDivisor divisor) {
  require_groups(t.groups);
  if (!t.has_exposure) {
    throw config_error("metrics.unsupported_input",
                       "statistical parity needs exposure counters (recommended flags)");
  }
  FairnessReport r;
  r.utilities.resize(t.groups);
  for (std::size_t k = 0; k < t.groups; ++k) {
    if (t.total[k] <= 0) {
      throw data_error("metrics.insufficient_data",
                       "group " + std::to_string(k + 1) + " has no candidate rows");
    }
    r.utilities[k] = static_cast<double>(t.shown[k]) / static_cast<double>(t.total[k]);
  }
  const double mean = mean_of(r.utilities);
  if (!(mean > 0.0)) {
    throw data_error("metrics.degenerate_utilities", "no group has any exposure");
  }
  // parity uses absolute deviations from the mean rate
  r.delta_u.resize(t.groups);
  for (std::size_t k = 0; k < t.groups; ++k) r.delta_u[k] = r.utilities[k] - mean;
  r.delta_reo = reo_penalty(r.utilities, divisor);
  r.divisor = divisor;
  r.reo_at_boundary = r.delta_reo == 0.0;
  return r;
}

UserPrecision user_side_precision(std::span<const std::vector<TrafficRecord>> requests,
                                  std::size_t n_show, std::size_t groups) {
  require_groups(groups);
  if (n_show == 0) throw config_error("metrics.config", "N_show must be positive");
  std::vector<std::int64_t> hits(groups, 0);
  std::vector<std::int64_t> rows(groups, 0);
  UserPrecision out;
  out.requests.assign(groups, 0);
  for (std::size_t r = 0; r < requests.size(); ++r) {
    std::size_t served = 0;
    std::size_t group = groups;
    std::int64_t positives = 0;
    for (const auto& rec : requests[r]) {
      if (rec.source != TrafficSource::Default) continue;
      if (rec.group >= groups) {
        throw data_error("metrics.schema", "request " + std::to_string(r) +
                                               ": user group outside 1.." +
                                               std::to_string(groups));
      }
      if (group == groups) {
        group = rec.group;
      } else if (rec.group != group) {
        throw data_error("metrics.malformed_session",
                         "request " + std::to_string(r) + " mixes user groups");
      }
      ++served;
      if (rec.label) ++positives;
    }
    if (served != n_show) {
      throw data_error("metrics.malformed_session",
                       "request " + std::to_string(r) + " has " + std::to_string(served) +
                           " default rows, expected N_show = " + std::to_string(n_show));
    }
    hits[group] += positives;
    rows[group] += static_cast<std::int64_t>(served);
    ++out.requests[group];
  }
  out.utilities.provenance = Provenance::Estimated;
  out.utilities.values.assign(groups, 0.0);
  for (std::size_t k = 0; k < groups; ++k) {
    if (rows[k] > 0) {
      out.utilities.values[k] = static_cast<double>(hits[k]) / static_cast<double>(rows[k]);
    }
  }
  return out;
}

}  // namespace reo
