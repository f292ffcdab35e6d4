#include "reo/report.hpp"

#include <cmath>
#include <sstream>

#include "reo/error.hpp"

namespace reo {
namespace {

std::optional<double> finite(std::optional<double> x, std::string& reason, const char* what) {
  if (x && !std::isfinite(*x)) {
    if (reason.empty()) reason = std::string("non-finite ") + what;
    return std::nullopt;
  }
  return x;
}

Json opt_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

std::optional<double> read_opt(const Json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

Json matrix_json(const SquareMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.n; ++j) row.push_back(number_or_null(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string csv_cell(const Json& v) {
  if (v.is_null()) return {};
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
      if (c == '"') out += '"';
      out += c;
    }
    return out + "\"";
  }
  return v.dump();
}

void write_csv_row(std::ostringstream& out, const std::vector<Json>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out << ',';
    out << csv_cell(cells[i]);
  }
  out << '\n';
}

std::string group_name(const char* prefix, std::size_t k) {
  return std::string(prefix) + std::to_string(k + 1);
}

}  // namespace

Json number_or_null(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

void ReportEnvelope::add_metric(std::string name, std::optional<double> estimate,
                                std::optional<double> se, std::optional<Interval> ci,
                                std::string method, std::optional<bool> significant,
                                std::string null_reason) {
  MetricBlock b;
  b.name = std::move(name);
  b.method = std::move(method);
  b.significant = significant;
  b.null_reason = std::move(null_reason);
  b.estimate = finite(estimate, b.null_reason, "estimate");
  b.se = finite(se, b.null_reason, "standard error");
  if (ci) {
    b.ci_low = finite(ci->low, b.null_reason, "interval bound");
    b.ci_high = finite(ci->high, b.null_reason, "interval bound");
  }
  metrics.push_back(std::move(b));
}

Json ReportEnvelope::to_json() const {
  Json j;
  j["command"] = command;
  j["version"] = version;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  j["std_divisor"] = to_string(divisor);
  j["config"] = config;
  Json ms = Json::array();
  for (const auto& m : metrics) {
    Json b;
    b["name"] = m.name;
    b["estimate"] = opt_number(m.estimate);
    b["se"] = opt_number(m.se);
    b["ci_low"] = opt_number(m.ci_low);
    b["ci_high"] = opt_number(m.ci_high);
    b["method"] = m.method;
    if (m.significant) b["significant"] = *m.significant;
    if (!m.null_reason.empty()) b["null_reason"] = m.null_reason;
    ms.push_back(std::move(b));
  }
  j["metrics"] = std::move(ms);
  Json ts = Json::array();
  for (const auto& t : tables) {
    Json rows = Json::array();
    for (const auto& r : t.rows) rows.push_back(Json(r));
    ts.push_back(Json{{"name", t.name}, {"columns", t.columns}, {"rows", std::move(rows)}});
  }
  j["tables"] = std::move(ts);
  j["notes"] = notes;
  if (!diagnostics.is_null()) j["diagnostics"] = diagnostics;
  return j;
}

std::string ReportEnvelope::dump_json() const { return to_json().dump(2) + "\n"; }

std::string ReportEnvelope::dump_csv() const {
  std::ostringstream out;
  bool first = true;
  if (!metrics.empty()) {
    write_csv_row(out, {"metric", "estimate", "se", "ci_low", "ci_high", "method", "significant",
                        "null_reason"});
    for (const auto& m : metrics) {
      write_csv_row(out, {m.name, opt_number(m.estimate), opt_number(m.se), opt_number(m.ci_low),
                          opt_number(m.ci_high), m.method,
                          m.significant ? Json(*m.significant) : Json(nullptr),
                          m.null_reason.empty() ? Json(nullptr) : Json(m.null_reason)});
    }
    first = false;
  }
  for (const auto& t : tables) {
    if (!first) out << '\n';
    first = false;
    std::vector<Json> header(t.columns.begin(), t.columns.end());
    write_csv_row(out, header);
    for (const auto& r : t.rows) write_csv_row(out, r);
  }
  return out.str();
}

ReportEnvelope ReportEnvelope::from_json(const Json& j) {
  try {
    ReportEnvelope env;
    env.command = j.at("command").get<std::string>();
    env.version = j.at("version").get<std::string>();
    if (!j.at("seed").is_null()) env.seed = j.at("seed").get<std::uint64_t>();
    const auto div = j.at("std_divisor").get<std::string>();
    if (div == "K") {
      env.divisor = StdDivisor::K;
    } else if (div == "K-1") {
      env.divisor = StdDivisor::KMinus1;
    } else {
      throw data_error("report.parse", "unknown std_divisor '" + div + "'");
    }
    env.config = j.at("config");
    for (const auto& b : j.at("metrics")) {
      MetricBlock m;
      m.name = b.at("name").get<std::string>();
      m.estimate = read_opt(b, "estimate");
      m.se = read_opt(b, "se");
      m.ci_low = read_opt(b, "ci_low");
      m.ci_high = read_opt(b, "ci_high");
      m.method = b.at("method").get<std::string>();
      if (b.contains("significant")) m.significant = b.at("significant").get<bool>();
      if (b.contains("null_reason")) m.null_reason = b.at("null_reason").get<std::string>();
      env.metrics.push_back(std::move(m));
    }
    for (const auto& t : j.at("tables")) {
      Table table;
      table.name = t.at("name").get<std::string>();
      table.columns = t.at("columns").get<std::vector<std::string>>();
      for (const auto& r : t.at("rows")) {
        table.rows.emplace_back(r.begin(), r.end());
      }
      env.tables.push_back(std::move(table));
    }
    env.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.contains("diagnostics")) env.diagnostics = j.at("diagnostics");
    return env;
  } catch (const Json::exception& e) {
    throw data_error("report.parse", e.what());
  }
}

void add_fairness_metrics(ReportEnvelope& env, const FairnessReport& r,
                          const std::string& method) {
  const bool has_se = !r.se_delta_u.empty();
  for (std::size_t k = 0; k < r.utilities.size(); ++k) {
    env.add_metric(group_name("U_", k), r.utilities[k], std::nullopt, std::nullopt, "point",
                   std::nullopt, "utility is known only up to a common scale");
  }
  for (std::size_t k = 0; k < r.delta_u.size(); ++k) {
    if (has_se) {
      env.add_metric(group_name("delta_U_", k), r.delta_u[k], r.se_delta_u[k], r.ci_delta_u[k],
                     method);
    } else {
      env.add_metric(group_name("delta_U_", k), r.delta_u[k], std::nullopt, std::nullopt,
                     "point", std::nullopt, "point estimate only");
    }
  }
  if (r.se_delta_reo) {
    env.add_metric("delta_REO", r.delta_reo, r.se_delta_reo, r.ci_delta_reo, method);
  } else {
    env.add_metric("delta_REO", r.delta_reo, std::nullopt, std::nullopt, has_se ? method : "point",
                   std::nullopt,
                   r.reo_at_boundary
                       ? "penalty is zero, its gradient is undefined at the boundary"
                       : "point estimate only");
  }
}

void add_ab_metrics(ReportEnvelope& env, const ABTestReport& r) {
  const auto method = to_string(r.method);
  for (std::size_t k = 0; k < r.d_k.size(); ++k) {
    const auto& d = r.d_k[k];
    env.add_metric(group_name("D_", k), d.estimate, d.se, d.ci, method, d.significant);
  }
  if (r.d_reo) {
    env.add_metric("D_REO", r.d_reo->estimate, r.d_reo->se, r.d_reo->ci, method,
                   r.d_reo->significant);
  } else {
    env.add_metric("D_REO", std::nullopt, std::nullopt, std::nullopt, method, std::nullopt,
                   "penalty is zero in an arm, its gradient is undefined at the boundary");
  }
}

Json diagnostics_json(const VariancePropagation& v) {
  Json j;
  j["gamma"] = matrix_json(v.gamma);
  j["jacobian"] = matrix_json(v.jacobian);
  Json h = Json::array();
  for (double x : v.gradient) h.push_back(number_or_null(x));
  j["gradient"] = std::move(h);
  j["sigma"] = matrix_json(v.sigma);
  j["xi"] = v.xi ? number_or_null(*v.xi) : Json(nullptr);
  return j;
}

}  // namespace reo
