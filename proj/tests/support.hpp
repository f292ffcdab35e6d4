#pragma once

// Fixtures shared by the unit tests and the acceptance runner.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "reo/cli.hpp"
#include "reo/ingest.hpp"
#include "reo/types.hpp"

namespace reo::testing {

/// Appends `count` copies of one record.
inline void add_rows(std::vector<TrafficRecord>& out, TrafficSource source, bool label,
                     std::size_t group, std::int64_t count) {
  TrafficRecord r;
  r.source = source;
  r.label = label;
  r.group = group;
  out.insert(out.end(), static_cast<std::size_t>(count), r);
}

/// Tally built straight from counts, for tests that never touch records.
inline GroupTally make_tally(std::vector<std::int64_t> pos_rand, std::int64_t n_rand,
                             std::vector<std::int64_t> pos_rec, std::int64_t n_rec) {
  GroupTally t(pos_rand.size());
  t.pos_rand = std::move(pos_rand);
  t.pos_rec = std::move(pos_rec);
  t.n_rand = n_rand;
  t.n_rec = n_rec;
  return t;
}

/// The 2x2 toy table with two datasets that agree on recommended rows.
/// The whole population (200,200 pairs) is the random traffic and the
/// recommended pairs are the default traffic.
///   A: R=0 rows are all negatives; 100 + 100 recommended positives.
///   B: like A but 100 of the group-1 R=0 rows are positives.
inline std::vector<TrafficRecord> toy_dataset(char which) {
  std::vector<TrafficRecord> rows;
  const bool b = which == 'B';
  // unrecommended part of the population
  add_rows(rows, TrafficSource::Random, false, 0, b ? 99900 : 100000);
  add_rows(rows, TrafficSource::Random, false, 1, 100000);
  if (b) add_rows(rows, TrafficSource::Random, true, 0, 100);
  // recommended part, present in both traffics
  add_rows(rows, TrafficSource::Random, true, 0, 100);
  add_rows(rows, TrafficSource::Random, true, 1, 100);
  add_rows(rows, TrafficSource::Default, true, 0, 100);
  add_rows(rows, TrafficSource::Default, true, 1, 100);
  return rows;
}

/// Fresh scratch directory under `root`, named after `name`.
inline std::filesystem::path scratch_dir(const std::string& root, const std::string& name) {
  auto dir = std::filesystem::path(root) / name;
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

/// Writes the records of one source as a log without a traffic column.
inline std::string write_source_log(const std::filesystem::path& path,
                                    const std::vector<TrafficRecord>& records,
                                    TrafficSource source, bool with_date = false) {
  std::vector<TrafficRecord> keep;
  for (const auto& r : records) {
    if (r.source == source) keep.push_back(r);
  }
  std::ofstream f(path, std::ios::binary);
  write_logs(f, keep, /*with_traffic=*/false, with_date);
  return path.string();
}

struct CliResult {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliResult run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliResult r;
  r.code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

}  // namespace reo::testing
