#pragma once

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace reo {

enum class TrafficSource : std::uint8_t { Default, Random };

/// The six engagement booleans of the published log schema. A row counts as a
/// positive preference when any of them is set.
struct EngagementSignals {
  bool like_video = false;
  bool share = false;
  bool follow = false;
  bool finish = false;
  bool download = false;
  bool long_view = false;

  bool any() const noexcept {
    return like_video || share || follow || finish || download || long_view;
  }
  bool operator==(const EngagementSignals&) const = default;
};

/// One user-item interaction. `group` is the 0-based index of the sensitive
/// attribute value; reports print it 1-based.
struct TrafficRecord {
  TrafficSource source = TrafficSource::Default;
  bool label = false;
  std::size_t group = 0;
  std::optional<EngagementSignals> signals;
  std::optional<std::chrono::year_month_day> date;
  /// Exposure flag, only meaningful for exposure-rate (statistical parity)
  /// metrics computed over a candidate pool.
  std::optional<bool> recommended;

  static TrafficRecord from_signals(TrafficSource source,
                                    const EngagementSignals& signals,
                                    std::size_t group) {
    TrafficRecord r;
    r.source = source;
    r.signals = signals;
    r.label = signals.any();
    r.group = group;
    return r;
  }

  bool operator==(const TrafficRecord&) const = default;
};

/// Per-group counts of positive-label rows for each traffic source.
struct GroupTally {
  std::size_t groups = 0;
  std::int64_t n_rand = 0;
  std::int64_t n_rec = 0;
  std::vector<std::int64_t> pos_rand;
  std::vector<std::int64_t> pos_rec;
  // exposure counters; populated only when records carry `recommended`
  std::vector<std::int64_t> shown;
  std::vector<std::int64_t> total;
  bool has_exposure = false;

  GroupTally() = default;
  explicit GroupTally(std::size_t k)
      : groups(k), pos_rand(k, 0), pos_rec(k, 0), shown(k, 0), total(k, 0) {}

  /// Adds one record. Throws a data error naming `row` when the record's
  /// group is outside [0, groups).
  void add(const TrafficRecord& record, std::size_t row = 0);

  /// Field-wise sum. Both tallies must have the same group count.
  GroupTally& merge(const GroupTally& other);

  /// Copy of this tally whose random-traffic part is taken from `random`.
  GroupTally with_random_from(const GroupTally& random) const;

  bool operator==(const GroupTally&) const = default;
};

GroupTally merge(GroupTally a, const GroupTally& b);

/// Convention for std(U_1..U_K) inside the penalty.
enum class StdDivisor { K, KMinus1 };

inline double divisor_value(StdDivisor d, std::size_t k) {
  return d == StdDivisor::K ? static_cast<double>(k)
                            : static_cast<double>(k) - 1.0;
}

std::string to_string(StdDivisor d);

enum class Provenance { Estimated, GroundTruth };

struct UtilityVector {
  std::vector<double> values;
  Provenance provenance = Provenance::Estimated;
};

struct Interval {
  double low = 0.0;
  double high = 0.0;
  bool contains(double x) const noexcept { return low <= x && x <= high; }
  bool excludes_zero() const noexcept { return low > 0.0 || high < 0.0; }
  double width() const noexcept { return high - low; }
};

/// Dense square matrix, row-major. Only used for small K x K quantities.
struct SquareMatrix {
  std::size_t n = 0;
  std::vector<double> data;

  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t size) : n(size), data(size * size, 0.0) {}
  double& operator()(std::size_t i, std::size_t j) { return data[i * n + j]; }
  double operator()(std::size_t i, std::size_t j) const {
    return data[i * n + j];
  }
};

/// Intermediate quantities of the delta-method variance propagation:
/// Gamma = Var(U), G = d(Delta U)/dU, H = d(penalty)/d(Delta U),
/// Sigma = G^T Gamma G, Xi = H^T Sigma H.
struct VariancePropagation {
  SquareMatrix gamma;
  SquareMatrix jacobian;
  std::vector<double> gradient;  // empty when the penalty is at zero
  SquareMatrix sigma;
  std::optional<double> xi;
};

struct FairnessReport {
  std::vector<double> utilities;
  std::vector<double> delta_u;
  double delta_reo = 0.0;

  // Uncertainty; empty / nullopt for point-only reports.
  std::vector<double> se_delta_u;
  std::vector<Interval> ci_delta_u;
  std::optional<double> se_delta_reo;
  std::optional<Interval> ci_delta_reo;
  double confidence = 0.0;

  std::int64_t n_rand = 0;
  std::int64_t n_rec = 0;
  StdDivisor divisor = StdDivisor::K;
  /// Set when the penalty is exactly zero, where its gradient is undefined.
  bool reo_at_boundary = false;
  std::optional<VariancePropagation> diagnostics;
};

/// Compact per-row (label, group) cells of one traffic source, the layout the
/// resampling kernels work on. Cell index is 2 * group + label.
class RowSet {
 public:
  RowSet() = default;
  explicit RowSet(std::size_t groups) : groups_(groups) {}
  RowSet(std::size_t groups, std::vector<std::uint16_t> cells);

  /// Rows of `records` with the given source.
  static RowSet from_records(std::span<const TrafficRecord> records,
                             TrafficSource source, std::size_t groups);

  void push_back(bool label, std::size_t group);

  std::size_t groups() const noexcept { return groups_; }
  std::size_t size() const noexcept { return cells_.size(); }
  bool empty() const noexcept { return cells_.empty(); }
  std::span<const std::uint16_t> cells() const noexcept { return cells_; }
  std::size_t cell_count() const noexcept { return 2 * groups_; }

  static std::uint16_t cell(bool label, std::size_t group) {
    return static_cast<std::uint16_t>(2 * group + (label ? 1 : 0));
  }
  static std::size_t cell_group(std::uint16_t c) { return c / 2; }
  static bool cell_label(std::uint16_t c) { return (c & 1U) != 0; }

 private:
  std::size_t groups_ = 0;
  std::vector<std::uint16_t> cells_;
};

}  // namespace reo
