#include "reo/ingest.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string_view>

#include "reo/error.hpp"

namespace reo {
namespace {

constexpr std::array<std::string_view, 6> kSignals = {"like_video", "share",    "follow",
                                                      "finish",     "download", "long_view"};
constexpr std::string_view kAttribute = "young_adult";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      return out;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
}

struct Columns {
  std::array<std::size_t, 6> signal{};
  std::size_t attribute = 0;
  std::optional<std::size_t> traffic;
  std::optional<std::size_t> date;
  std::size_t count = 0;
};

Columns parse_header(std::string_view line, const std::string& name) {
  const auto cells = split(line);
  std::map<std::string_view, std::size_t> index;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const auto c = cells[i];
    const bool known = c == kAttribute || c == "traffic" || c == "date" ||
                       std::find(kSignals.begin(), kSignals.end(), c) != kSignals.end();
    if (!known) {
      throw data_error("ingest.schema", name + ": unknown column '" + std::string(c) + "'");
    }
    if (!index.emplace(c, i).second) {
      throw data_error("ingest.schema", name + ": duplicate column '" + std::string(c) + "'");
    }
  }
  Columns cols;
  cols.count = cells.size();
  for (std::size_t s = 0; s < kSignals.size(); ++s) {
    auto it = index.find(kSignals[s]);
    if (it == index.end()) {
      throw data_error("ingest.schema",
                       name + ": missing column '" + std::string(kSignals[s]) + "'");
    }
    cols.signal[s] = it->second;
  }
  auto attr = index.find(kAttribute);
  if (attr == index.end()) {
    throw data_error("ingest.schema", name + ": missing column 'young_adult'");
  }
  cols.attribute = attr->second;
  if (auto it = index.find("traffic"); it != index.end()) cols.traffic = it->second;
  if (auto it = index.find("date"); it != index.end()) cols.date = it->second;
  return cols;
}

std::optional<bool> parse_bit(std::string_view cell) {
  if (cell == "0") return false;
  if (cell == "1") return true;
  return std::nullopt;
}

std::string quoted(std::string_view s) { return "'" + std::string(s) + "'"; }

/// Parses one data row; returns the failure reason instead of throwing.
std::optional<std::string> parse_row(std::string_view line, const Columns& cols,
                                     const ReadOptions& opts, TrafficRecord& rec) {
  const auto cells = split(line);
  if (cells.size() != cols.count) {
    return "expected " + std::to_string(cols.count) + " cells, found " +
           std::to_string(cells.size());
  }
  EngagementSignals sig;
  bool* fields[6] = {&sig.like_video, &sig.share,    &sig.follow,
                     &sig.finish,     &sig.download, &sig.long_view};
  for (std::size_t s = 0; s < kSignals.size(); ++s) {
    const auto bit = parse_bit(cells[cols.signal[s]]);
    if (!bit) {
      return std::string(kSignals[s]) + " is " + quoted(cells[cols.signal[s]]) +
             ", expected 0 or 1";
    }
    *fields[s] = *bit;
  }
  const auto young = parse_bit(cells[cols.attribute]);
  if (!young) return "young_adult is " + quoted(cells[cols.attribute]) + ", expected 0 or 1";

  TrafficSource source{};
  if (cols.traffic) {
    const auto cell = cells[*cols.traffic];
    if (cell == "default") {
      source = TrafficSource::Default;
    } else if (cell == "random") {
      source = TrafficSource::Random;
    } else {
      return "traffic is " + quoted(cell) + ", expected default or random";
    }
    if (opts.source && *opts.source != source) {
      return "traffic is " + quoted(cell) + " but the file was given as " +
             (*opts.source == TrafficSource::Default ? "default" : "random") + " traffic";
    }
  } else {
    source = *opts.source;
  }

  rec = TrafficRecord::from_signals(source, sig, *young ? 0 : 1);
  if (cols.date) {
    const auto cell = cells[*cols.date];
    auto d = parse_date(std::string(cell));
    if (!d) return "date is " + quoted(cell) + ", expected YYYY-MM-DD";
    rec.date = *d;
  }
  return std::nullopt;
}

}  // namespace

std::string format_date(std::chrono::year_month_day d) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
  return buf;
}

std::optional<std::chrono::year_month_day> parse_date(const std::string& text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9}) {
    if (text[i] < '0' || text[i] > '9') return std::nullopt;
  }
  const int y = std::stoi(text.substr(0, 4));
  const unsigned m = static_cast<unsigned>(std::stoi(text.substr(5, 2)));
  const unsigned d = static_cast<unsigned>(std::stoi(text.substr(8, 2)));
  const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                        std::chrono::day{d}};
  if (!ymd.ok()) return std::nullopt;
  return ymd;
}

IngestSummary read_logs(std::istream& in, const std::string& name, const ReadOptions& opts,
                        const std::function<void(const TrafficRecord&)>& sink) {
  IngestSummary summary;
  std::string line;
  if (!std::getline(in, line)) return summary;  // empty file
  const Columns cols = parse_header(line, name);
  summary.has_date = cols.date.has_value();
  summary.has_traffic = cols.traffic.has_value();
  if (!cols.traffic && !opts.source) {
    throw config_error("ingest.missing_traffic",
                       name + ": no traffic column and no traffic source given for the file");
  }

  std::size_t line_no = 1;
  TrafficRecord rec;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    ++summary.rows;
    if (auto reason = parse_row(line, cols, opts, rec)) {
      if (opts.strict) {
        throw data_error("ingest.parse", name + ":" + std::to_string(line_no) + ": " + *reason);
      }
      summary.rejects.push_back(Reject{line_no, std::move(*reason)});
      continue;
    }
    ++summary.accepted;
    sink(rec);
  }
  return summary;
}

IngestSummary read_logs(const std::string& path, const ReadOptions& opts,
                        const std::function<void(const TrafficRecord&)>& sink) {
  std::ifstream in(path);
  if (!in) throw config_error("ingest.missing_file", "cannot open " + path);
  return read_logs(in, path, opts, sink);
}

std::vector<TrafficRecord> read_all(const std::string& path, const ReadOptions& opts,
                                    IngestSummary* summary) {
  std::vector<TrafficRecord> out;
  auto s = read_logs(path, opts, [&](const TrafficRecord& r) { out.push_back(r); });
  if (summary) *summary = std::move(s);
  return out;
}

void write_logs(std::ostream& out, std::span<const TrafficRecord> records, bool with_traffic,
                bool with_date) {
  out << "like_video,share,follow,finish,download,long_view,young_adult";
  if (with_traffic) out << ",traffic";
  if (with_date) out << ",date";
  out << '\n';
  for (const auto& r : records) {
    EngagementSignals s = r.signals.value_or(EngagementSignals{});
    if (!r.signals) s.like_video = r.label;
    out << s.like_video << ',' << s.share << ',' << s.follow << ',' << s.finish << ','
        << s.download << ',' << s.long_view << ',' << (r.group == 0 ? 1 : 0);
    if (with_traffic) out << ',' << (r.source == TrafficSource::Random ? "random" : "default");
    if (with_date) out << ',' << (r.date ? format_date(*r.date) : std::string());
    out << '\n';
  }
}

DailyPartition::DailyPartition(RandomPolicy policy, std::size_t groups)
    : policy_(policy), groups_(groups), random_all_(groups) {
  if (groups == 0) throw config_error("ingest.config", "group count must be positive");
}

void DailyPartition::add(const TrafficRecord& record) {
  ++rows_;
  if (record.source == TrafficSource::Random) {
    random_all_.add(record, rows_ - 1);
    if (policy_ == RandomPolicy::PerDay) {
      if (!record.date) {
        throw config_error("ingest.missing_date",
                           "per-day random policy needs a date on every random row");
      }
      random_by_day_.try_emplace(*record.date, groups_).first->second.add(record, rows_ - 1);
    }
    return;
  }
  if (!record.date) {
    throw config_error("ingest.missing_date", "daily partition needs a date on default rows");
  }
  recommended_.try_emplace(*record.date, groups_).first->second.add(record, rows_ - 1);
}

std::map<std::chrono::year_month_day, DayTallies> DailyPartition::finish() const {
  std::map<std::chrono::year_month_day, DayTallies> out;
  for (const auto& [day, rec] : recommended_) {
    DayTallies t;
    t.recommended = rec;
    if (policy_ == RandomPolicy::Shared) {
      t.random = random_all_;
    } else {
      auto it = random_by_day_.find(day);
      if (it == random_by_day_.end() || it->second.n_rand == 0) {
        throw data_error("ingest.insufficient_random_traffic",
                         "no random traffic on " + format_date(day));
      }
      t.random = it->second;
    }
    out.emplace(day, std::move(t));
  }
  return out;
}

std::map<std::chrono::year_month_day, DayTallies> partition_daily(
    std::span<const TrafficRecord> records, RandomPolicy policy, std::size_t groups) {
  DailyPartition part(policy, groups);
  for (const auto& r : records) part.add(r);
  return part.finish();
}

}  // namespace reo
