#pragma once

// Synthetic traffic with known ground truth, the Monte Carlo studies built on
// it, and the fair/unfair counterexample construction showing that REO is
// not identifiable from recommended rows alone.

#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "reo/parallel.hpp"
#include "reo/rng.hpp"
#include "reo/types.hpp"

namespace reo {

/// Ground-truth proportions of a two-source traffic model.
///
/// p[k] = P(Y=1, S=s_k) on random traffic, q[k] = P(Y=1, S=s_k | R=1) on
/// default traffic. The negative-label mass 1 - sum(p) is spread over the
/// groups by `p_split` (likewise `q_split`), so each source is a proper
/// distribution over 2K cells.
struct SimulationConfig {
  std::size_t groups = 2;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> p_split;
  std::vector<double> q_split;
  std::int64_t n = 100000;   // default-traffic size
  std::int64_t n_rand = 0;   // random-traffic size, 0 means same as n
  std::size_t replications = 50;
  std::uint64_t seed = 0;
  /// Per-group sampling weight applied to default rows; empty means 1.
  std::vector<double> boost_weights;
  /// Per-request probability that a request is served by random traffic.
  double p_act = 1e-3;

  /// Throws config error when a vector has the wrong length, is negative,
  /// or a source distribution does not sum to 1 within 1e-12.
  void validate() const;

  std::vector<double> p_complement() const;
  std::vector<double> q_complement() const;
  /// Cell probabilities in RowSet cell order (2k: Y=0, 2k+1: Y=1).
  std::vector<double> random_cells() const;
  std::vector<double> default_cells() const;

  /// U_k = q_k / p_k, the true utilities up to the factor P(R=1).
  std::vector<double> true_utilities() const;
  double true_penalty(StdDivisor divisor = StdDivisor::K) const;
  std::int64_t random_size() const { return n_rand > 0 ? n_rand : n; }

  static SimulationConfig from_proportions(std::vector<double> p, std::vector<double> q,
                                           std::vector<double> split);

  /// The three two-group settings of the synthetic MSE experiment:
  /// p = (1, 5) x 10^-(setting+1), q_1 = 10 p_1, q_2 = 5 p_2, complements
  /// split 25% / 75%.
  static SimulationConfig mse_setting(int setting);

  /// Two groups shaped like one day of short-video logs: group 1 (young
  /// adult creators) is advantaged with U_1 / U_2 = 1.2, penalty 1/11, and
  /// 150,000 rows per source.
  static SimulationConfig daily();

  /// Copy with q[group] scaled so that U_group / U_reference == ratio.
  SimulationConfig with_utility_ratio(std::size_t group, std::size_t reference,
                                      double ratio) const;
};

/// One Mult(n, probs) draw via sequential conditional binomials.
std::vector<std::int64_t> multinomial(std::int64_t n, std::span<const double> probs, Rng& rng);

/// Independent multinomial draws for both sources, as a tally.
GroupTally sample_counts(const SimulationConfig& cfg, std::int64_t n, Rng& rng,
                         std::optional<std::int64_t> n_rand = std::nullopt);

struct MseRow {
  std::int64_t n = 0;
  double mse = 0.0;
  double mse_se = 0.0;
  std::size_t failures = 0;
  std::size_t replicates = 0;
};

struct MseStudy {
  double truth = 0.0;
  std::vector<MseRow> rows;
  /// Least-squares fit of log10(mse) against log10(n).
  double slope = 0.0;
  double intercept = 0.0;
};

/// Mean squared error of the penalty estimate against the configured truth,
/// `reps` replicates per size. Replicates with an empty positive group are
/// counted as failures and left out of the MSE.
MseStudy mse_study(const SimulationConfig& cfg, std::span<const std::int64_t> sizes,
                   std::size_t reps, Execution exec = Execution::Serial,
                   StdDivisor divisor = StdDivisor::K);

/// `rows` rows drawn from the source's cell distribution, shuffled.
RowSet synthesize_rows(const SimulationConfig& cfg, TrafficSource source, std::int64_t rows,
                       Rng& rng);

/// Records in the ingest schema: positives get at least one engagement
/// signal set, negatives none.
std::vector<TrafficRecord> synthesize_records(
    const SimulationConfig& cfg, TrafficSource source, std::int64_t rows, Rng& rng,
    std::optional<std::chrono::year_month_day> date = std::nullopt);

/// Request-level simulation: each request is served by random traffic with
/// probability p_act, otherwise by default traffic.
std::vector<TrafficRecord> mixed_stream(const SimulationConfig& cfg, std::int64_t requests,
                                        std::size_t rows_per_request, Rng& rng);

enum class BoostMode { WithoutReplacement, WithReplacement };

struct BoostOptions {
  BoostMode mode = BoostMode::WithoutReplacement;
  /// Without replacement: inclusion probability of the highest-weight group.
  double rate = 1.0;
  /// With replacement: number of default rows to draw, 0 means as many as
  /// the input has.
  std::int64_t size = 0;
};

/// Emulates a boosting strategy by resampling default rows with probability
/// proportional to weights[group]. Random rows pass through untouched.
std::vector<TrafficRecord> boosted_stream(std::span<const TrafficRecord> base,
                                          std::span<const double> weights, Rng& rng,
                                          const BoostOptions& opts = {});

/// Maps young_adult attribute values to group weights (young_adult = 1 is
/// group 1, young_adult = 0 is group 2). Throws config error when a value
/// is missing or a weight is not positive.
std::vector<double> weights_from_young_adult(const std::map<int, double>& by_value);

struct PoolRow {
  bool recommended = false;
  bool label = false;
  std::size_t group = 0;
  bool operator==(const PoolRow&) const = default;
};

/// U_k = P(R=1 | Y=1, S=s_k) counted directly on a fully labelled pool.
/// Groups without any positive row have no defined utility; they throw.
std::vector<double> enumerate_utilities(std::span<const PoolRow> pool, std::size_t groups);

struct IdentifiabilityPair {
  std::vector<PoolRow> fair;
  std::vector<PoolRow> unfair;
  std::size_t target_group = 0;
  double alpha = 0.0;
  std::vector<double> fair_utilities;
  std::vector<double> unfair_utilities;
  double fair_penalty = 0.0;
  double unfair_penalty = 0.0;
  /// alpha sqrt(K-1) / (1 + (1+alpha)(K-1)) for divisor K,
  /// alpha sqrt(K) / (1 + (1+alpha)(K-1)) for divisor K-1.
  double predicted_unfair_penalty = 0.0;
};

/// Completes the recommended subset with m0 unrecommended rows in two ways:
/// all (Y=0, S=target) gives a perfectly fair pool, all (Y=1, S=target)
/// gives an unfair one, with the first group as target. A subset with no
/// positive row is trivial and rejected; every group also needs a positive
/// recommended row, otherwise its utility is undefined.
IdentifiabilityPair identifiability_pair(std::span<const PoolRow> recommended,
                                         std::size_t groups, std::int64_t m0,
                                         StdDivisor divisor = StdDivisor::K);

}  // namespace reo
