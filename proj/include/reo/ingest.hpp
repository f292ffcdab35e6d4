#pragma once

// CSV logs in the short-video engagement schema.
//
// Header (required, any order):
//   like_video,share,follow,finish,download,long_view,young_adult[,traffic][,date]
// Cells are ASCII 0/1, `traffic` is "default" or "random", `date` is
// YYYY-MM-DD. A row is a positive when any engagement signal is 1.
// young_adult = 1 maps to group index 0, young_adult = 0 to index 1.

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "reo/types.hpp"

namespace reo {

inline constexpr std::size_t kSchemaGroups = 2;

struct ReadOptions {
  /// Traffic source for every row of the file; required when the file has no
  /// `traffic` column. Rows whose `traffic` cell disagrees are rejected.
  std::optional<TrafficSource> source;
  /// Throw on the first malformed row instead of collecting it.
  bool strict = false;
};

struct Reject {
  std::size_t line = 0;  // 1-based, the header is line 1
  std::string reason;
};

struct IngestSummary {
  std::size_t rows = 0;      // data rows seen
  std::size_t accepted = 0;
  std::vector<Reject> rejects;
  bool has_date = false;
  bool has_traffic = false;
};

/// Streams `path` row by row into `sink` without holding the file in memory.
/// Missing file or missing traffic information is a config error; header
/// problems are data errors with code "ingest.schema"; malformed rows are
/// rejected (or thrown as "ingest.parse" in strict mode).
IngestSummary read_logs(const std::string& path, const ReadOptions& opts,
                        const std::function<void(const TrafficRecord&)>& sink);

/// Same, from an already open stream. `name` only appears in messages.
IngestSummary read_logs(std::istream& in, const std::string& name, const ReadOptions& opts,
                        const std::function<void(const TrafficRecord&)>& sink);

/// Convenience wrapper collecting every accepted record.
std::vector<TrafficRecord> read_all(const std::string& path, const ReadOptions& opts,
                                    IngestSummary* summary = nullptr);

/// Writes records in the schema above. Records without raw signals are
/// written with like_video carrying the label.
void write_logs(std::ostream& out, std::span<const TrafficRecord> records,
                bool with_traffic = true, bool with_date = true);

std::string format_date(std::chrono::year_month_day d);
std::optional<std::chrono::year_month_day> parse_date(const std::string& text);

enum class RandomPolicy { Shared, PerDay };

struct DayTallies {
  GroupTally recommended;  // default traffic of the day
  GroupTally random;
};

/// Accumulates records day by day. Under the shared policy every day is
/// paired with all random rows seen, dated or not; under the per-day policy
/// only with random rows of the same date.
class DailyPartition {
 public:
  explicit DailyPartition(RandomPolicy policy = RandomPolicy::Shared,
                          std::size_t groups = kSchemaGroups);

  /// Default rows need a date (config error otherwise); random rows need one
  /// only under the per-day policy.
  void add(const TrafficRecord& record);

  /// Throws "ingest.insufficient_random_traffic" for a day without random
  /// rows under the per-day policy.
  std::map<std::chrono::year_month_day, DayTallies> finish() const;

 private:
  RandomPolicy policy_;
  std::size_t groups_;
  std::map<std::chrono::year_month_day, GroupTally> recommended_;
  std::map<std::chrono::year_month_day, GroupTally> random_by_day_;
  GroupTally random_all_;
  std::size_t rows_ = 0;
};

std::map<std::chrono::year_month_day, DayTallies> partition_daily(
    std::span<const TrafficRecord> records, RandomPolicy policy = RandomPolicy::Shared,
    std::size_t groups = kSchemaGroups);

}  // namespace reo
