// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit status
// when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "reo/error.hpp"
#include "reo/inference.hpp"
#include "reo/metrics.hpp"
#include "reo/planner.hpp"
#include "reo/report.hpp"
#include "reo/synthetic.hpp"
#include "support.hpp"

namespace {

using namespace reo;
namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

const Json* find_metric(const Json& j, const std::string& name) {
  for (const auto& m : j["metrics"]) {
    if (m["name"] == name) return &m;
  }
  return nullptr;
}

std::string data_dir() {
  static const std::string dir = testing::scratch_dir(REO_TEST_DATA_DIR, "run").string();
  return dir;
}

// Toy table: exact values from the records and through the CLI.
Outcome toy_table() {
  const auto ta = tally(testing::toy_dataset('A'), 2);
  const auto a = point_report(ta);
  const auto b = point_report(tally(testing::toy_dataset('B'), 2));
  // Estimated utilities carry the common factor 1 / P(R=1) = n_rand / n_rec.
  const double scale = static_cast<double>(ta.n_rec) / static_cast<double>(ta.n_rand);
  const std::vector<double> u_a{a.utilities[0] * scale, a.utilities[1] * scale};
  const bool a_ok = std::abs(u_a[0] - 1.0) < 1e-12 && std::abs(u_a[1] - 1.0) < 1e-12 &&
                    a.delta_reo == 0.0;
  const double ratio = b.utilities[0] / b.utilities[1];
  const bool b_ok = ratio == 0.5 && std::abs(b.delta_reo - 1.0 / 3.0) < 1e-15;

  const auto rows = testing::toy_dataset('B');
  const auto d = fs::path(data_dir());
  const auto rec = testing::write_source_log(d / "toyB_default.csv", rows, TrafficSource::Default);
  const auto rnd = testing::write_source_log(d / "toyB_random.csv", rows, TrafficSource::Random);
  const auto r = testing::run_cli({"estimate", "--default-log", rec, "--random-log", rnd});
  bool cli_ok = r.code == 0;
  bool note = false;
  double cli_reo = NAN;
  if (cli_ok) {
    const auto j = Json::parse(r.out);
    cli_reo = (*find_metric(j, "delta_REO"))["estimate"].get<double>();
    for (const auto& n : j["notes"]) note |= n.get<std::string>().find("2/3") != std::string::npos;
  }
  cli_ok = cli_ok && std::abs(cli_reo - 1.0 / 3.0) < 1e-12 && note;
  return {a_ok && b_ok && cli_ok,
          "A: U=[" + fmt("%.15g", u_a[0]) + "," + fmt("%.15g", u_a[1]) +
              "] penalty=" + fmt("%g", a.delta_reo) + "; B: ratio=" + fmt("%.17g", ratio) +
              " penalty=" + fmt("%.15f", b.delta_reo) + "; CLI penalty=" +
              fmt("%.15f", cli_reo) + (note ? ", erratum note present" : ", erratum note MISSING")};
}

Outcome eighty_percent_rule() {
  const std::vector<double> u{0.8, 1.0};
  const double p = reo_penalty(u);
  return {std::abs(p - 1.0 / 9.0) <= 1e-12, "penalty=" + fmt("%.17g", p)};
}

Outcome mse_scaling() {
  const std::vector<std::int64_t> sizes{1000, 10000, 100000, 1000000};
  const auto s1 = mse_study(SimulationConfig::mse_setting(1), sizes, 50, Execution::Serial);
  const std::vector<std::int64_t> at{100000};
  const auto base = mse_study(SimulationConfig::mse_setting(1), at, 50, Execution::Serial).rows[0];
  bool larger = true;
  std::string detail = "slope=" + fmt("%.4f", s1.slope);
  for (int s : {2, 3}) {
    const auto r = mse_study(SimulationConfig::mse_setting(s), at, 50, Execution::Serial).rows[0];
    const double gap = r.mse - base.mse;
    const double sigma = std::hypot(r.mse_se, base.mse_se);
    larger &= r.failures == 0 && gap > 2 * sigma;
    detail += "; setting " + std::to_string(s) + " MSE " + fmt("%.3g", r.mse) + " vs " +
              fmt("%.3g", base.mse) + " (gap/sigma=" + fmt("%.1f", gap / sigma) + ")";
  }
  return {s1.slope >= -1.15 && s1.slope <= -0.85 && larger, detail};
}

Outcome ci_calibration() {
  const auto cfg = SimulationConfig::mse_setting(1);
  const double truth = cfg.true_penalty();
  std::vector<int> covered(1000, 0);
  for_each_index(Execution::Parallel, covered.size(), [&](std::size_t i) {
    Rng rng = make_rng(20240601, 0xac4, i);
    const auto r = delta_method_report(sample_counts(cfg, 100000, rng));
    covered[i] = r.ci_delta_reo->contains(truth);
  });
  const double rate = std::accumulate(covered.begin(), covered.end(), 0) / 1000.0;
  return {rate >= 0.93 && rate <= 0.97, "coverage=" + fmt("%.3f", rate) + " over 1000 replicates"};
}

struct DailyResult {
  double width_ratio = 0.0;
  double relative_bias = 0.0;
};

const std::vector<DailyResult>& daily_results() {
  static const std::vector<DailyResult> results = [] {
    const auto cfg = SimulationConfig::daily();
    std::vector<DailyResult> out(20);
    for (std::size_t d = 0; d < out.size(); ++d) {
      Rng rng = make_rng(7, 0xda1, d);
      const auto rec_records = synthesize_records(cfg, TrafficSource::Default, 150000, rng);
      const auto rnd_records = synthesize_records(cfg, TrafficSource::Random, 150000, rng);
      const auto rec = RowSet::from_records(rec_records, TrafficSource::Default, 2);
      const auto rnd = RowSet::from_records(rnd_records, TrafficSource::Random, 2);
      const auto delta = delta_method_report(merge(tally(rec_records, 2), tally(rnd_records, 2)));
      BootstrapOptions o;
      o.replicates = 100;
      o.seed = d;
      o.exec = Execution::Parallel;
      const auto boot = bootstrap_report(rec, rnd, o);
      out[d].width_ratio = boot.report.ci_delta_reo->width() / delta.ci_delta_reo->width();
      out[d].relative_bias = boot.relative_bias_delta_reo;
    }
    return out;
  }();
  return results;
}

Outcome method_consistency() {
  const auto& r = daily_results();
  int agree = 0;
  double lo = INFINITY, hi = 0.0;
  for (const auto& d : r) {
    agree += std::abs(d.width_ratio - 1.0) <= 0.2;
    lo = std::min(lo, d.width_ratio);
    hi = std::max(hi, d.width_ratio);
  }
  return {agree >= 18, std::to_string(agree) + "/20 days within 20% (bootstrap/delta width " +
                           fmt("%.3f", lo) + ".." + fmt("%.3f", hi) + ")"};
}

Outcome daily_bootstrap_bias() {
  const auto& r = daily_results();
  int small = 0, positive = 0, negative = 0;
  double worst = 0.0;
  for (const auto& d : r) {
    small += std::abs(d.relative_bias) < 0.03;
    positive += d.relative_bias > 0;
    negative += d.relative_bias < 0;
    worst = std::max(worst, std::abs(d.relative_bias));
  }
  return {small == 20 && positive > 0 && negative > 0,
          "max |bias|=" + fmt("%.4f", worst) + ", " + std::to_string(positive) + " positive / " +
              std::to_string(negative) + " negative"};
}

Outcome boosting_directions() {
  const auto cfg = SimulationConfig::daily();
  const std::size_t reps = 50;
  std::vector<int> deboost_down(reps, 0), boost_up(reps, 0), flipped(reps, 0);
  const auto w125 = weights_from_young_adult({{0, 1.25}, {1, 1.0}});
  const auto w2d = weights_from_young_adult({{0, 2.0}, {1, 1.0}});
  const auto w2b = weights_from_young_adult({{0, 1.0}, {1, 2.0}});
  for_each_index(Execution::Parallel, reps, [&](std::size_t i) {
    Rng rng = make_rng(11, 0xb005, i);
    const auto rnd = tally(synthesize_records(cfg, TrafficSource::Random, cfg.n, rng), 2);
    const auto control_rows = synthesize_records(cfg, TrafficSource::Default, cfg.n, rng);
    const auto control = merge(tally(control_rows, 2), rnd);
    auto arm = [&](const std::vector<double>& w) {
      const auto base = synthesize_records(cfg, TrafficSource::Default, cfg.n, rng);
      return merge(tally(boosted_stream(base, w, rng), 2), rnd);
    };
    const auto c = point_report(control);
    deboost_down[i] = point_report(arm(w125)).delta_reo - c.delta_reo < 0;
    boost_up[i] = point_report(arm(w2b)).delta_reo - c.delta_reo > 0;
    flipped[i] = c.delta_u[0] > 0 && point_report(arm(w2d)).delta_u[0] < 0;
  });
  const int a = std::accumulate(deboost_down.begin(), deboost_down.end(), 0);
  const int b = std::accumulate(boost_up.begin(), boost_up.end(), 0);
  const int f = std::accumulate(flipped.begin(), flipped.end(), 0);
  return {a >= 40 && b >= 40 && f >= 40,
          "1.25x deboost D<0 in " + std::to_string(a) + "/50, 2x boost D>0 in " +
              std::to_string(b) + "/50, 2x deboost flips group 1 in " + std::to_string(f) + "/50"};
}

Outcome identifiability() {
  std::mt19937_64 rng(8);
  int ok = 0;
  double worst = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t k = 2 + static_cast<std::size_t>(rep % 5);
    std::uniform_int_distribution<std::size_t> g(0, k - 1);
    std::uniform_int_distribution<int> size(1, 300);
    std::uniform_int_distribution<std::int64_t> m0(1, 5000);
    std::bernoulli_distribution y(0.5);
    std::vector<PoolRow> subset;
    for (std::size_t i = 0; i < k; ++i) subset.push_back({true, true, i});
    const int extra = size(rng);
    for (int i = 0; i < extra; ++i) subset.push_back({true, y(rng), g(rng)});
    std::shuffle(subset.begin(), subset.end(), rng);
    const auto pair = identifiability_pair(subset, k, m0(rng));
    auto rec = [](const std::vector<PoolRow>& pool) {
      std::vector<PoolRow> r;
      for (const auto& x : pool) {
        if (x.recommended) r.push_back(x);
      }
      return r;
    };
    const double err = std::abs(pair.unfair_penalty - pair.predicted_unfair_penalty);
    worst = std::max(worst, err);
    ok += rec(pair.fair) == subset && rec(pair.unfair) == subset && pair.fair_penalty == 0.0 &&
          err <= 1e-12;
  }
  return {ok == 100, std::to_string(ok) + "/100 pairs exact, max |unfair - predicted|=" +
                         fmt("%.3g", worst)};
}

SimulationConfig planner_config(std::size_t k) {
  std::vector<double> p, q, split(k, 1.0 / static_cast<double>(k));
  for (std::size_t g = 0; g < k; ++g) {
    p.push_back(0.02 + 0.01 * static_cast<double>(g));
    q.push_back(p.back() * (1.0 + 0.25 * static_cast<double>(g % 3)));
  }
  return SimulationConfig::from_proportions(p, q, split);
}

Outcome planner_soundness() {
  bool all = true;
  std::string detail;
  for (std::size_t k : {2u, 3u, 5u}) {
    for (double eps : {0.05, 0.1}) {
      const auto cfg = planner_config(k);
      PlanRequest req;
      req.groups = k;
      req.epsilon = eps;
      req.delta = 0.05;
      req.p = cfg.p;
      req.q = cfg.q;
      const auto plan = plan_sizes(req);
      const double truth = cfg.true_penalty();
      std::vector<int> hit(200, 0);
      for_each_index(Execution::Parallel, hit.size(), [&](std::size_t i) {
        Rng rng = make_rng(9, 0x9a0 + k * 100 + static_cast<std::size_t>(eps * 100), i);
        const auto t = sample_counts(cfg, plan.recommended_size, rng, plan.random_size);
        try {
          hit[i] = std::abs(point_report(t).delta_reo - truth) <= eps;
        } catch (const Error&) {
          hit[i] = 0;
        }
      });
      const int n_ok = std::accumulate(hit.begin(), hit.end(), 0);
      all &= n_ok >= 190;
      detail += "K=" + std::to_string(k) + " eps=" + fmt("%g", eps) + ": " +
                std::to_string(n_ok) + "/200; ";
    }
  }
  detail.resize(detail.size() - 2);
  return {all, detail};
}

Outcome determinism() {
  const auto d = fs::path(data_dir());
  const auto def = (d / "det_default.csv").string();
  const auto rnd = (d / "det_random.csv").string();
  std::vector<std::string> failures;
  auto same = [&](const std::string& what, std::vector<std::string> args) {
    const auto a = testing::run_cli(args);
    const auto b = testing::run_cli(args);
    args.push_back("--serial");
    const auto c = testing::run_cli(args);
    if (a.code != 0 || a.out != b.out || a.out != c.out || a.err != c.err) failures.push_back(what);
  };
  for (const auto& [traffic, path] : {std::pair{"default", def}, std::pair{"random", rnd}}) {
    std::vector<std::string> args{"simulate", "--days", "3", "--rows", "40000", "--traffic",
                                  traffic, "--seed", "5"};
    const auto first = testing::run_cli(args);
    const auto again = testing::run_cli(args);
    if (first.code != 0 || first.out != again.out) failures.push_back("simulate");
    std::ofstream(path, std::ios::binary) << first.out;
  }
  same("estimate delta", {"estimate", "--default-log", def, "--random-log", rnd, "--verbose"});
  same("estimate bootstrap", {"estimate", "--default-log", def, "--random-log", rnd, "--method",
                              "bootstrap", "--seed", "3"});
  same("estimate bca", {"estimate", "--default-log", def, "--random-log", rnd, "--method", "bca",
                        "--bootstrap-size", "50", "--seed", "3"});
  same("monitor", {"monitor", "--default-log", def, "--random-log", rnd, "--format", "csv"});
  same("abtest partition", {"abtest", "--control-log", def, "--treatment-log", def,
                            "--random-log", rnd, "--method", "partition", "--seed", "4"});
  same("abtest bootstrap", {"abtest", "--control-log", def, "--treatment-log", def,
                            "--random-log", rnd, "--method", "bootstrap", "--seed", "4"});
  same("mse-study", {"mse-study", "--sizes", "1000,10000", "--reps", "40", "--seed", "6"});
  same("plan", {"plan", "--groups", "3", "--epsilon", "0.05"});
  same("demo-identifiability", {"demo-identifiability", "--groups", "4"});
  std::string detail = failures.empty() ? "9 commands byte-identical across repeats and serial/parallel"
                                        : "differs:";
  for (const auto& f : failures) detail += " " + f;
  return {failures.empty(), detail};
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<Outcome()> run;
    double budget_s;  // wall-clock limit, 0 for none
  };
  const std::vector<Criterion> criteria{
      {"AC1 toy table", toy_table, 1.0},
      {"AC2 80% rule", eighty_percent_rule, 0.0},
      {"AC3 MSE scaling", mse_scaling, 120.0},
      {"AC4 CI calibration", ci_calibration, 300.0},
      {"AC5 method consistency", method_consistency, 0.0},
      {"AC6 bootstrap bias", daily_bootstrap_bias, 0.0},
      {"AC7 boosting directions", boosting_directions, 0.0},
      {"AC8 identifiability", identifiability, 0.0},
      {"AC9 planner soundness", planner_soundness, 0.0},
      {"AC10 determinism", determinism, 0.0},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.budget_s > 0.0 && secs >= c.budget_s) {
      o.pass = false;
      o.detail += "; over the " + fmt("%g", c.budget_s) + " s budget";
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << c.name << ": " << o.detail << " ["
              << fmt("%.2f", secs) << " s]" << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
