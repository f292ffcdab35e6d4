#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "reo/inference.hpp"
#include "reo/types.hpp"

namespace reo {

inline constexpr const char* kVersion = "0.1.0";

using Json = nlohmann::ordered_json;

/// One reported quantity. Missing or non-finite numbers are stored as
/// nullopt, and `null_reason` says why.
struct MetricBlock {
  std::string name;
  std::optional<double> estimate;
  std::optional<double> se;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::string method;
  std::optional<bool> significant;
  std::string null_reason;

  bool operator==(const MetricBlock&) const = default;
};

/// Named table with rows of JSON scalars (numbers, strings, booleans, null).
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;

  bool operator==(const Table&) const = default;
};

struct ReportEnvelope {
  std::string command;
  std::string version = kVersion;
  std::optional<std::uint64_t> seed;
  StdDivisor divisor = StdDivisor::K;
  Json config = Json::object();
  std::vector<MetricBlock> metrics;
  std::vector<Table> tables;
  std::vector<std::string> notes;
  Json diagnostics;  // null unless verbose

  void add_metric(std::string name, std::optional<double> estimate,
                  std::optional<double> se = std::nullopt,
                  std::optional<Interval> ci = std::nullopt, std::string method = {},
                  std::optional<bool> significant = std::nullopt,
                  std::string null_reason = {});

  Json to_json() const;
  std::string dump_json() const;
  /// Metrics table (when any) followed by every named table, separated by a
  /// blank line; null cells are empty.
  std::string dump_csv() const;
  static ReportEnvelope from_json(const Json& j);

  bool operator==(const ReportEnvelope&) const = default;
};

/// A finite double as a JSON number, anything else as null.
Json number_or_null(double x);

/// Metric blocks for a fairness report: group utilities, relative
/// utilities and the penalty.
void add_fairness_metrics(ReportEnvelope& env, const FairnessReport& report,
                          const std::string& method);

void add_ab_metrics(ReportEnvelope& env, const ABTestReport& report);

/// Gamma, G, H, Sigma, Xi as nested arrays.
Json diagnostics_json(const VariancePropagation& v);

}  // namespace reo
