#include "reo/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "reo/error.hpp"
#include "reo/inference.hpp"
#include "reo/ingest.hpp"
#include "reo/metrics.hpp"
#include "reo/planner.hpp"
#include "reo/quantiles.hpp"
#include "reo/report.hpp"
#include "reo/synthetic.hpp"

namespace reo::cli {
namespace {

constexpr double kEightyPercentRule = 1.0 / 9.0;
constexpr std::uint64_t kSimulateStream = 0x5171u;
constexpr std::size_t kMaxWarnings = 20;

const char* const kDivisorNote =
    "Penalty uses the population standard deviation (divisor K). For the two-group toy "
    "example with utilities (1/2, 1) this gives 1/3, or 0.471 with divisor K-1; a quoted "
    "value of 2/3 matches neither convention.";

struct Options {
  std::string default_log;
  std::string random_log;
  std::string treatment_log;
  std::string control_log;
  double confidence = 0.95;
  std::string method = "delta";
  std::size_t folds = 10;
  std::size_t bootstrap_size = 100;
  std::uint64_t seed = 0;
  std::string std_divisor = "K";
  std::string out;
  std::string format = "json";
  bool verbose = false;
  bool strict = false;
  bool serial = false;

  double threshold = kEightyPercentRule;
  std::string random_policy = "shared";

  std::string preset;
  std::int64_t rows = 0;
  std::int64_t random_rows = 0;
  std::size_t days = 1;
  std::string start_date = "2024-01-01";
  std::string traffic = "both";
  std::string boost = "none";
  std::size_t spike_day = 0;
  double spike_ratio = 1.6;

  std::vector<std::int64_t> sizes;
  std::size_t reps = 50;

  std::size_t groups = 2;
  double epsilon = 0.1;
  double delta = 0.05;
  std::vector<double> pilot_p;
  std::vector<double> pilot_q;
  std::vector<double> pilot_u;
  bool per_group = false;

  std::int64_t m0 = 100;
  std::int64_t subset_size = 100;

  StdDivisor divisor() const { return std_divisor == "K" ? StdDivisor::K : StdDivisor::KMinus1; }
  Execution exec() const { return serial ? Execution::Serial : Execution::Parallel; }
};

struct Loaded {
  GroupTally tally{kSchemaGroups};
  RowSet rows{kSchemaGroups};
};

void require(const std::string& value, const char* flag, const char* command) {
  if (value.empty()) {
    throw config_error("cli.config", std::string(command) + " needs " + flag);
  }
}

void report_rejects(const std::string& path, const IngestSummary& s, ReportEnvelope* env,
                    std::ostream& err) {
  if (s.rejects.empty()) return;
  for (std::size_t i = 0; i < s.rejects.size() && i < kMaxWarnings; ++i) {
    err << "warning: " << path << ":" << s.rejects[i].line << ": " << s.rejects[i].reason
        << "\n";
  }
  if (s.rejects.size() > kMaxWarnings) {
    err << "warning: " << path << ": " << (s.rejects.size() - kMaxWarnings)
        << " more rejected rows\n";
  }
  if (env) {
    env->notes.push_back(path + ": " + std::to_string(s.rejects.size()) + " of " +
                         std::to_string(s.rows) + " rows rejected, first at line " +
                         std::to_string(s.rejects.front().line) + ": " +
                         s.rejects.front().reason);
  }
}

Loaded load(const std::string& path, TrafficSource source, bool keep_rows, const Options& o,
            ReportEnvelope& env, std::ostream& err) {
  Loaded l;
  ReadOptions ro;
  ro.source = source;
  ro.strict = o.strict;
  std::size_t row = 0;
  const auto summary = read_logs(path, ro, [&](const TrafficRecord& r) {
    l.tally.add(r, row++);
    if (keep_rows) l.rows.push_back(r.label, r.group);
  });
  report_rejects(path, summary, &env, err);
  return l;
}

BootstrapOptions bootstrap_options(const Options& o) {
  BootstrapOptions b;
  b.replicates = o.bootstrap_size;
  b.confidence = o.confidence;
  b.variant = o.method == "bca" ? BootstrapVariant::BCa : BootstrapVariant::Standard;
  b.seed = o.seed;
  b.divisor = o.divisor();
  b.exec = o.exec();
  return b;
}

ReportEnvelope envelope(const std::string& command, const Options& o) {
  ReportEnvelope env;
  env.command = command;
  env.seed = o.seed;
  env.divisor = o.divisor();
  return env;
}

Json opt_json(const std::optional<double>& x) { return x ? number_or_null(*x) : Json(nullptr); }

// ---------------------------------------------------------------- estimate

ReportEnvelope cmd_estimate(const Options& o, std::ostream& err) {
  require(o.default_log, "--default-log", "estimate");
  require(o.random_log, "--random-log", "estimate");
  if (o.method == "partition") {
    throw config_error("cli.config",
                       "estimate supports --method delta, bootstrap or bca; partition is an "
                       "A/B test method");
  }
  auto env = envelope("estimate", o);
  env.config = {{"default_log", o.default_log}, {"random_log", o.random_log},
                {"confidence", o.confidence},   {"method", o.method}};
  const bool resample = o.method != "delta";
  if (resample) env.config["bootstrap_size"] = o.bootstrap_size;

  const auto rec = load(o.default_log, TrafficSource::Default, resample, o, env, err);
  const auto rnd = load(o.random_log, TrafficSource::Random, resample, o, env, err);
  const auto t = merge(rec.tally, rnd.tally);

  if (!resample) {
    const auto r = delta_method_report(t, o.confidence, o.divisor(), o.verbose);
    add_fairness_metrics(env, r, "delta");
    if (o.verbose && r.diagnostics) env.diagnostics = diagnostics_json(*r.diagnostics);
  } else {
    const auto b = bootstrap_report(rec.rows, rnd.rows, bootstrap_options(o));
    add_fairness_metrics(env, b.report, o.method);
    env.add_metric("relative_bias_delta_REO", b.relative_bias_delta_reo, std::nullopt,
                   std::nullopt, o.method, std::nullopt, "bias is a point quantity");
    if (b.discarded > 0) {
      env.notes.push_back(std::to_string(b.discarded) +
                          " bootstrap replicates discarded (empty positive group)");
    }
    if (b.variant == BootstrapVariant::BCa) {
      env.notes.push_back("BCa interval: jackknife acceleration, extended method");
    }
  }
  env.config["n_rec"] = t.n_rec;
  env.config["n_rand"] = t.n_rand;
  env.notes.push_back(kDivisorNote);
  return env;
}

// ----------------------------------------------------------------- monitor

ReportEnvelope cmd_monitor(const Options& o, std::ostream& err) {
  require(o.default_log, "--default-log", "monitor");
  require(o.random_log, "--random-log", "monitor");
  if (o.method != "delta") {
    throw config_error("cli.config", "monitor supports --method delta only");
  }
  auto env = envelope("monitor", o);
  env.config = {{"default_log", o.default_log},
                {"random_log", o.random_log},
                {"confidence", o.confidence},
                {"threshold", o.threshold},
                {"random_policy", o.random_policy}};

  DailyPartition part(o.random_policy == "per-day" ? RandomPolicy::PerDay : RandomPolicy::Shared);
  for (const auto& [path, source] : {std::pair{o.default_log, TrafficSource::Default},
                                     std::pair{o.random_log, TrafficSource::Random}}) {
    ReadOptions ro;
    ro.source = source;
    ro.strict = o.strict;
    const auto s = read_logs(path, ro, [&](const TrafficRecord& r) { part.add(r); });
    report_rejects(path, s, &env, err);
  }

  Table table;
  table.name = "daily";
  table.columns = {"date",   "n_rec",   "n_rand",           "delta_reo",
                   "se",     "ci_low",  "ci_high",          "exceeds_threshold",
                   "significantly_exceeds", "status"};
  for (const auto& [day, tallies] : part.finish()) {
    const auto t = merge(tallies.recommended, tallies.random);
    std::vector<Json> row{format_date(day), t.n_rec, t.n_rand};
    try {
      const auto r = delta_method_report(t, o.confidence, o.divisor());
      const bool exceeds = r.delta_reo > o.threshold;
      const bool significant = r.ci_delta_reo && r.ci_delta_reo->low > o.threshold;
      row.push_back(number_or_null(r.delta_reo));
      row.push_back(opt_json(r.se_delta_reo));
      row.push_back(r.ci_delta_reo ? number_or_null(r.ci_delta_reo->low) : Json(nullptr));
      row.push_back(r.ci_delta_reo ? number_or_null(r.ci_delta_reo->high) : Json(nullptr));
      row.push_back(exceeds);
      row.push_back(significant);
      row.push_back(r.reo_at_boundary ? "boundary" : "ok");
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Config) throw;
      row.insert(row.end(), {nullptr, nullptr, nullptr, nullptr, nullptr, nullptr, e.code()});
      env.notes.push_back(format_date(day) + ": " + e.what());
    }
    table.rows.push_back(std::move(row));
  }
  env.tables.push_back(std::move(table));
  env.notes.push_back(kDivisorNote);
  return env;
}

// ------------------------------------------------------------------ abtest

ReportEnvelope cmd_abtest(const Options& o, std::ostream& err) {
  require(o.control_log, "--control-log", "abtest");
  require(o.treatment_log, "--treatment-log", "abtest");
  require(o.random_log, "--random-log", "abtest");
  auto env = envelope("abtest", o);
  env.config = {{"control_log", o.control_log},
                {"treatment_log", o.treatment_log},
                {"random_log", o.random_log},
                {"confidence", o.confidence},
                {"method", o.method}};
  const bool rows = o.method != "delta";
  const auto ctl = load(o.control_log, TrafficSource::Default, rows, o, env, err);
  const auto trt = load(o.treatment_log, TrafficSource::Default, rows, o, env, err);
  const auto rnd = load(o.random_log, TrafficSource::Random, rows, o, env, err);

  ABTestReport r;
  if (o.method == "delta") {
    r = ab_delta_test(merge(ctl.tally, rnd.tally), merge(trt.tally, rnd.tally), o.confidence,
                      o.divisor());
  } else if (o.method == "partition") {
    PartitionOptions p;
    p.folds_control = p.folds_treatment = o.folds;
    p.confidence = o.confidence;
    p.seed = o.seed;
    p.divisor = o.divisor();
    p.exec = o.exec();
    env.config["folds"] = o.folds;
    r = ab_partition_test(ctl.rows, trt.rows, rnd.rows, p);
  } else {
    env.config["bootstrap_size"] = o.bootstrap_size;
    r = ab_bootstrap_test(ctl.rows, trt.rows, rnd.rows, bootstrap_options(o));
  }
  add_ab_metrics(env, r);
  env.notes.insert(env.notes.end(), r.notes.begin(), r.notes.end());
  env.diagnostics = {{"n_rand", r.n_rand},
                     {"shared_random", r.shared_random},
                     {"folds_control", r.folds_control},
                     {"folds_treatment", r.folds_treatment},
                     {"welch_dof_reo", opt_json(r.welch_dof_reo)},
                     {"replicates", r.replicates},
                     {"discarded", r.discarded}};
  return env;
}

// ---------------------------------------------------------------- simulate

SimulationConfig preset_config(const std::string& preset) {
  if (preset.empty() || preset == "daily") return SimulationConfig::daily();
  if (preset.rfind("setting", 0) == 0 && preset.size() == 8) {
    return SimulationConfig::mse_setting(preset[7] - '0');
  }
  throw config_error("cli.config", "unknown preset '" + preset + "'");
}

std::vector<double> boost_weights(const std::string& boost) {
  static const std::map<std::string, std::map<int, double>> table = {
      {"1.25x-deboost", {{0, 1.25}, {1, 1.0}}},
      {"2x-deboost", {{0, 2.0}, {1, 1.0}}},
      {"2x-boost", {{0, 1.0}, {1, 2.0}}},
  };
  return weights_from_young_adult(table.at(boost));
}

void cmd_simulate(const Options& o, std::ostream& out) {
  auto cfg = preset_config(o.preset);
  const std::int64_t rows = o.rows > 0 ? o.rows : cfg.n;
  const std::int64_t random_rows = o.random_rows > 0 ? o.random_rows : rows;
  const auto start = parse_date(o.start_date);
  if (!start) throw config_error("cli.config", "--start-date must be YYYY-MM-DD");
  if (o.days == 0) throw config_error("cli.config", "--days must be positive");
  if (o.spike_day > o.days) throw config_error("cli.config", "--spike-day beyond --days");

  std::vector<TrafficRecord> all;
  const std::chrono::sys_days first{*start};
  for (std::size_t d = 0; d < o.days; ++d) {
    const std::chrono::year_month_day day{first + std::chrono::days{d}};
    const auto day_cfg = (d + 1 == o.spike_day) ? cfg.with_utility_ratio(0, 1, o.spike_ratio)
                                                : cfg;
    Rng rng = make_rng(o.seed, kSimulateStream, d);
    if (o.traffic != "random") {
      auto rec = synthesize_records(day_cfg, TrafficSource::Default, rows, rng, day);
      if (o.boost != "none") rec = boosted_stream(rec, boost_weights(o.boost), rng);
      all.insert(all.end(), rec.begin(), rec.end());
    }
    if (o.traffic != "default") {
      auto rnd = synthesize_records(day_cfg, TrafficSource::Random, random_rows, rng, day);
      all.insert(all.end(), rnd.begin(), rnd.end());
    }
  }
  if (o.out.empty()) {
    write_logs(out, all);
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw config_error("cli.output", "cannot write " + o.out);
  write_logs(f, all);
}

// --------------------------------------------------------------- mse-study

ReportEnvelope cmd_mse_study(const Options& o) {
  auto cfg = preset_config(o.preset.empty() ? "setting1" : o.preset);
  cfg.seed = o.seed;
  std::vector<std::int64_t> sizes = o.sizes;
  if (sizes.empty()) sizes = {1000, 10000, 100000, 1000000};
  auto env = envelope("mse-study", o);
  env.config = {{"preset", o.preset.empty() ? "setting1" : o.preset},
                {"sizes", sizes},
                {"reps", o.reps}};
  const auto study = mse_study(cfg, sizes, o.reps, o.exec(), o.divisor());
  env.add_metric("true_delta_REO", study.truth, std::nullopt, std::nullopt, "ground truth",
                 std::nullopt, "configured value");
  env.add_metric("loglog_slope", study.slope, std::nullopt, std::nullopt, "least squares",
                 std::nullopt, "fit summary");
  Table t;
  t.name = "mse";
  t.columns = {"n", "mse", "mse_se", "failures"};
  for (const auto& r : study.rows) {
    t.rows.push_back({r.n, number_or_null(r.mse), number_or_null(r.mse_se), r.failures});
  }
  env.tables.push_back(std::move(t));
  return env;
}

// -------------------------------------------------------------------- plan

ReportEnvelope cmd_plan(const Options& o) {
  PlanRequest req;
  req.groups = o.groups;
  req.epsilon = o.epsilon;
  req.delta = o.delta;
  if (!o.pilot_p.empty()) req.p = o.pilot_p;
  if (!o.pilot_q.empty()) req.q = o.pilot_q;
  if (!o.pilot_u.empty()) req.utilities = o.pilot_u;
  const auto plan = plan_sizes(req, o.per_group ? PlanMode::PerGroup : PlanMode::Uniform);

  auto env = envelope("plan", o);
  env.seed.reset();
  env.config = {{"groups", o.groups},
                {"epsilon", o.epsilon},
                {"delta", o.delta},
                {"mode", o.per_group ? "per-group" : "uniform"}};
  Table t;
  t.name = "plan";
  t.columns = {"n", "n_exact", "recommended_size", "random_size", "conservative"};
  t.rows.push_back({plan.n, number_or_null(plan.n_exact), plan.recommended_size,
                    plan.random_size, plan.conservative});
  env.tables.push_back(std::move(t));
  if (o.per_group) {
    Table g;
    g.name = "per_group";
    g.columns = {"group", "recommended_size", "random_size"};
    for (std::size_t k = 0; k < plan.random_by_group.size(); ++k) {
      g.rows.push_back({k + 1, plan.recommended_by_group[k], plan.random_by_group[k]});
    }
    env.tables.push_back(std::move(g));
  }
  if (plan.conservative) {
    env.notes.push_back("no full pilot given: missing values default to U = 1, p = q = 0.5");
  }
  return env;
}

// ---------------------------------------------------- demo-identifiability

ReportEnvelope cmd_demo(const Options& o) {
  if (o.subset_size < 1) throw config_error("cli.config", "--subset-size must be positive");
  std::vector<PoolRow> subset;
  for (std::size_t g = 0; g < o.groups; ++g) {
    subset.insert(subset.end(), static_cast<std::size_t>(o.subset_size), PoolRow{true, true, g});
  }
  const auto pair = identifiability_pair(subset, o.groups, o.m0, o.divisor());

  auto env = envelope("demo-identifiability", o);
  env.seed.reset();
  env.config = {{"groups", o.groups}, {"m0", o.m0}, {"subset_size", o.subset_size}};
  env.add_metric("alpha", pair.alpha, std::nullopt, std::nullopt, "exact", std::nullopt,
                 "deterministic construction");
  env.add_metric("fair_delta_REO", pair.fair_penalty, std::nullopt, std::nullopt, "exact",
                 std::nullopt, "deterministic construction");
  env.add_metric("unfair_delta_REO", pair.unfair_penalty, std::nullopt, std::nullopt, "exact",
                 std::nullopt, "deterministic construction");
  env.add_metric("predicted_unfair_delta_REO", pair.predicted_unfair_penalty, std::nullopt,
                 std::nullopt, "closed form", std::nullopt, "deterministic construction");
  Table t;
  t.name = "utilities";
  t.columns = {"group", "fair", "unfair"};
  for (std::size_t k = 0; k < o.groups; ++k) {
    t.rows.push_back({k + 1, pair.fair_utilities[k], pair.unfair_utilities[k]});
  }
  env.tables.push_back(std::move(t));

  auto recommended = [](const std::vector<PoolRow>& pool) {
    std::vector<PoolRow> r;
    std::copy_if(pool.begin(), pool.end(), std::back_inserter(r),
                 [](const PoolRow& x) { return x.recommended; });
    return r;
  };
  const bool agree = recommended(pair.fair) == recommended(pair.unfair);
  env.notes.push_back(std::string("recommended rows of both datasets identical: ") +
                      (agree ? "yes" : "no"));
  env.notes.push_back(kDivisorNote);
  return env;
}

// ----------------------------------------------------------------- driver

void emit(const ReportEnvelope& env, const Options& o, std::ostream& out) {
  const std::string text = o.format == "csv" ? env.dump_csv() : env.dump_json();
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw config_error("cli.output", "cannot write " + o.out);
  f << text;
}

void apply_thread_env() {
  const char* env = std::getenv("REO_THREADS");
  if (!env || !*env) return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) {
    throw config_error("cli.config", std::string("REO_THREADS must be a positive integer, got '") +
                                         env + "'");
  }
  set_threads(static_cast<int>(n));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"REO fairness estimation from default and random traffic logs", "reo"};
  app.require_subcommand(1);

  app.add_option("--default-log", o.default_log, "Default-traffic log (CSV)");
  app.add_option("--random-log", o.random_log, "Random-traffic log (CSV)");
  app.add_option("--treatment-log", o.treatment_log, "Treatment arm default-traffic log");
  app.add_option("--control-log", o.control_log, "Control arm default-traffic log");
  app.add_option("--confidence", o.confidence, "Confidence level 1 - delta")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--method", o.method, "Interval method")
      ->check(CLI::IsMember({"delta", "partition", "bootstrap", "bca"}));
  app.add_option("--folds", o.folds, "Folds per arm for the partition test")
      ->check(CLI::PositiveNumber);
  app.add_option("--bootstrap-size", o.bootstrap_size, "Bootstrap replicates")
      ->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "Seed of every random stream");
  app.add_option("--std-divisor", o.std_divisor, "Standard deviation divisor")
      ->check(CLI::IsMember({"K", "K-1"}));
  app.add_option("--out", o.out, "Write the report to this file instead of stdout");
  app.add_option("--format", o.format, "Report format")->check(CLI::IsMember({"json", "csv"}));
  app.add_flag("--verbose", o.verbose, "Include variance propagation diagnostics");
  app.add_flag("--strict", o.strict, "Fail on the first malformed row");
  app.add_flag("--serial", o.serial, "Run the serial reference loops");

  app.add_option("--threshold", o.threshold, "Monitor alert threshold");
  app.add_option("--random-policy", o.random_policy, "Random traffic pairing for monitor")
      ->check(CLI::IsMember({"shared", "per-day"}));
  app.add_option("--preset", o.preset, "Synthetic preset")
      ->check(CLI::IsMember({"daily", "setting1", "setting2", "setting3"}));
  app.add_option("--rows", o.rows, "Default rows per simulated day");
  app.add_option("--random-rows", o.random_rows, "Random rows per simulated day");
  app.add_option("--days", o.days, "Simulated days");
  app.add_option("--start-date", o.start_date, "First simulated day");
  app.add_option("--traffic", o.traffic, "Traffic to simulate")
      ->check(CLI::IsMember({"both", "default", "random"}));
  app.add_option("--boost", o.boost, "Boosting strategy applied to default rows")
      ->check(CLI::IsMember({"none", "1.25x-deboost", "2x-deboost", "2x-boost"}));
  app.add_option("--spike-day", o.spike_day, "1-based day with a shifted utility ratio");
  app.add_option("--spike-ratio", o.spike_ratio, "Group 1 / group 2 utility ratio on that day");
  app.add_option("--sizes", o.sizes, "Traffic sizes of the MSE study")->delimiter(',');
  app.add_option("--reps", o.reps, "Replicates per size")->check(CLI::PositiveNumber);
  app.add_option("--groups", o.groups, "Number of groups")->check(CLI::PositiveNumber);
  app.add_option("--epsilon", o.epsilon, "Target accuracy");
  app.add_option("--delta", o.delta, "Target failure probability");
  app.add_option("--pilot-p", o.pilot_p, "Pilot p_k")->delimiter(',');
  app.add_option("--pilot-q", o.pilot_q, "Pilot q_k")->delimiter(',');
  app.add_option("--pilot-u", o.pilot_u, "Pilot U_k")->delimiter(',');
  app.add_flag("--per-group", o.per_group, "Per-group sizing");
  app.add_option("--m0", o.m0, "Unrecommended rows added by the construction");
  app.add_option("--subset-size", o.subset_size, "Recommended positives per group");

  std::map<std::string, CLI::App*> sub;
  for (const char* name : {"estimate", "monitor", "abtest", "simulate", "mse-study", "plan",
                           "demo-identifiability"}) {
    sub[name] = app.add_subcommand(name)->fallthrough();
  }
  sub["estimate"]->description("Penalty and relative utilities with confidence intervals");
  sub["monitor"]->description("Daily penalty with the 80%-rule threshold flag");
  sub["abtest"]->description("Treatment minus control differences");
  sub["simulate"]->description("Write synthetic logs in the ingest schema");
  sub["mse-study"]->description("Mean squared error against traffic size");
  sub["plan"]->description("Traffic sizes for a target accuracy");
  sub["demo-identifiability"]->description("Fair and unfair datasets that agree on R=1 rows");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 2;
  }

  try {
    apply_thread_env();
    check_confidence(o.confidence);
    ReportEnvelope env;
    if (sub["estimate"]->parsed()) {
      env = cmd_estimate(o, err);
    } else if (sub["monitor"]->parsed()) {
      env = cmd_monitor(o, err);
    } else if (sub["abtest"]->parsed()) {
      env = cmd_abtest(o, err);
    } else if (sub["simulate"]->parsed()) {
      cmd_simulate(o, out);
      return 0;
    } else if (sub["mse-study"]->parsed()) {
      env = cmd_mse_study(o);
    } else if (sub["plan"]->parsed()) {
      env = cmd_plan(o);
    } else {
      env = cmd_demo(o);
    }
    emit(env, o, out);
    return 0;
  } catch (const Error& e) {
    err << "error [" << e.code() << "]: " << e.what() << "\n";
    return e.kind() == ErrorKind::Data ? 1 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace reo::cli
