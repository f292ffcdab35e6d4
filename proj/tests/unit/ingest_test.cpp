#include <gtest/gtest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include "reo/error.hpp"
#include "reo/ingest.hpp"
#include "reo/metrics.hpp"
#include "reo/synthetic.hpp"

namespace reo {
namespace {

using std::chrono::year_month_day;
using namespace std::chrono_literals;

constexpr const char* kHeader = "like_video,share,follow,finish,download,long_view,young_adult";

IngestSummary read_text(const std::string& text, const ReadOptions& opts,
                        std::vector<TrafficRecord>* out = nullptr) {
  std::istringstream in(text);
  return read_logs(in, "mem.csv", opts, [&](const TrafficRecord& r) {
    if (out) out->push_back(r);
  });
}

std::pair<ErrorKind, std::string> error_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return {e.kind(), e.code()};
  }
  return {ErrorKind::Data, ""};
}

TEST(Dates, FormatAndParse) {
  const year_month_day d{2024y / 3 / 9};
  EXPECT_EQ(format_date(d), "2024-03-09");
  EXPECT_EQ(parse_date("2024-03-09"), d);
  EXPECT_FALSE(parse_date("2024-02-30"));
  EXPECT_FALSE(parse_date("2024-3-9"));
  EXPECT_FALSE(parse_date("yesterday"));
}

TEST(ReadLogs, SignalsGroupAndTraffic) {
  std::vector<TrafficRecord> rows;
  const auto s = read_text(std::string(kHeader) + ",traffic\n"
                                                  "0,0,0,0,0,0,1,random\n"
                                                  "0,0,1,0,0,0,0,default\n",
                           {}, &rows);
  EXPECT_EQ(s.rows, 2u);
  EXPECT_EQ(s.accepted, 2u);
  EXPECT_TRUE(s.has_traffic);
  EXPECT_FALSE(s.has_date);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].group, 0u);
  EXPECT_FALSE(rows[0].label);
  EXPECT_EQ(rows[0].source, TrafficSource::Random);
  EXPECT_EQ(rows[1].group, 1u);
  EXPECT_TRUE(rows[1].label);
  EXPECT_TRUE(rows[1].signals->follow);
}

TEST(ReadLogs, HeaderOrderDoesNotMatter) {
  std::vector<TrafficRecord> rows;
  read_text("date,young_adult,long_view,download,finish,follow,share,like_video\n"
            "2024-01-02,1,0,0,0,0,1,0\n",
            ReadOptions{TrafficSource::Default, false}, &rows);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_TRUE(rows[0].signals->share);
  EXPECT_EQ(rows[0].group, 0u);
  EXPECT_EQ(rows[0].date, (year_month_day{2024y / 1 / 2}));
}

TEST(ReadLogs, HeaderErrorsAreSchemaErrors) {
  const ReadOptions o{TrafficSource::Default, false};
  for (const std::string header :
       {std::string(kHeader) + ",colour", std::string(kHeader) + ",share",
        std::string("like_video,share,follow,finish,download,young_adult")}) {
    const auto [kind, code] = error_of([&] { read_text(header + "\n", o); });
    EXPECT_EQ(code, "ingest.schema") << header;
    EXPECT_EQ(kind, ErrorKind::Data);
  }
}

TEST(ReadLogs, TrafficMustBeKnown) {
  const auto [kind, code] = error_of([] { read_text(std::string(kHeader) + "\n1,0,0,0,0,0,1\n", {}); });
  EXPECT_EQ(code, "ingest.missing_traffic");
  EXPECT_EQ(kind, ErrorKind::Config);
}

TEST(ReadLogs, MissingFileIsConfigError) {
  const auto [kind, code] = error_of([] {
    read_logs("/nonexistent/x.csv", {}, [](const TrafficRecord&) {});
  });
  EXPECT_EQ(code, "ingest.missing_file");
  EXPECT_EQ(kind, ErrorKind::Config);
}

TEST(ReadLogs, MalformedRowsAreRejectedWithLineNumbers) {
  const std::string text = std::string(kHeader) + ",traffic,date\n" +
                           "0,0,0,0,0,0,1,random,2024-01-01\n"  // line 2, fine
                           "0,0,0,0,0,1,random,2024-01-01\n"    // 3: short
                           "0,2,0,0,0,0,1,random,2024-01-01\n"  // 4: bad bit
                           "0,0,0,0,0,0,1,organic,2024-01-01\n" // 5: bad traffic
                           "\n"                                 // 6: blank
                           "0,0,0,0,0,0,1,random,2024-13-01\n"  // 7: bad date
                           "1,0,0,0,0,0,0,default,2024-01-01\r\n";  // 8: fine
  std::vector<TrafficRecord> rows;
  const auto s = read_text(text, {}, &rows);
  EXPECT_EQ(s.accepted, 2u);
  EXPECT_EQ(s.rows, 6u);
  ASSERT_EQ(s.rejects.size(), 4u);
  EXPECT_EQ(s.rejects[0].line, 3u);
  EXPECT_EQ(s.rejects[1].line, 4u);
  EXPECT_NE(s.rejects[1].reason.find("share"), std::string::npos);
  EXPECT_EQ(s.rejects[2].line, 5u);
  EXPECT_EQ(s.rejects[3].line, 7u);
  EXPECT_TRUE(rows[1].label);

  try {
    read_text(text, ReadOptions{std::nullopt, true});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), "ingest.parse");
    EXPECT_EQ(e.kind(), ErrorKind::Data);
    EXPECT_NE(std::string(e.what()).find("mem.csv:3:"), std::string::npos);
  }
}

TEST(ReadLogs, TrafficConflictingWithFileSourceIsRejected) {
  const auto s = read_text(std::string(kHeader) + ",traffic\n0,0,0,0,0,0,1,random\n",
                           ReadOptions{TrafficSource::Default, false});
  EXPECT_EQ(s.accepted, 0u);
  ASSERT_EQ(s.rejects.size(), 1u);
}

TEST(ReadLogs, EmptyInput) {
  const auto s = read_text("", {});
  EXPECT_EQ(s.rows, 0u);
  EXPECT_EQ(s.accepted, 0u);
}

TEST(WriteLogs, RoundTrip) {
  const auto cfg = SimulationConfig::daily();
  Rng rng(2);
  auto recs = synthesize_records(cfg, TrafficSource::Default, 500, rng, year_month_day{2024y / 5 / 1});
  auto rnd = synthesize_records(cfg, TrafficSource::Random, 500, rng, year_month_day{2024y / 5 / 2});
  recs.insert(recs.end(), rnd.begin(), rnd.end());
  std::ostringstream out;
  write_logs(out, recs);
  std::vector<TrafficRecord> back;
  const auto s = read_text(out.str(), {}, &back);
  EXPECT_TRUE(s.has_date);
  EXPECT_EQ(back, recs);
}

TEST(WriteLogs, LabelOnlyRecordsCarryLabelInLikeColumn) {
  TrafficRecord r;
  r.label = true;
  r.group = 1;
  std::vector<TrafficRecord> recs{r};
  std::ostringstream out;
  write_logs(out, recs, true, false);
  std::vector<TrafficRecord> back;
  read_text(out.str(), {}, &back);
  ASSERT_EQ(back.size(), 1u);
  EXPECT_TRUE(back[0].label);
  EXPECT_TRUE(back[0].signals->like_video);
  EXPECT_EQ(back[0].group, 1u);
}

TEST(ReadLogs, StreamsLargeFiles) {
  const auto path = std::filesystem::temp_directory_path() / "reo_ingest_large.csv";
  const auto cfg = SimulationConfig::daily();
  Rng rng(3);
  GroupTally expected(2);
  {
    std::ofstream f(path, std::ios::binary);
    bool header = true;
    for (int chunk = 0; chunk < 8; ++chunk) {
      auto recs = synthesize_records(cfg, chunk % 2 ? TrafficSource::Random : TrafficSource::Default,
                                     300000, rng);
      expected.merge(tally(recs, 2));
      std::ostringstream part;
      write_logs(part, recs, true, false);
      std::string text = part.str();
      if (!header) text.erase(0, text.find('\n') + 1);
      header = false;
      f << text;
    }
  }
  GroupTally got(2);
  std::size_t i = 0;
  const auto s = read_logs(path.string(), {}, [&](const TrafficRecord& r) { got.add(r, i++); });
  EXPECT_EQ(s.accepted, 2400000u);
  EXPECT_TRUE(s.rejects.empty());
  EXPECT_EQ(got, expected);
  std::filesystem::remove(path);
}

std::vector<TrafficRecord> dated(TrafficSource src, bool label, std::size_t group,
                                 std::optional<year_month_day> d, int count) {
  TrafficRecord r;
  r.source = src;
  r.label = label;
  r.group = group;
  r.date = d;
  return std::vector<TrafficRecord>(static_cast<std::size_t>(count), r);
}

TEST(DailyPartition, SharedPolicyPairsEveryDayWithAllRandomRows) {
  const year_month_day d1{2024y / 1 / 1}, d2{2024y / 1 / 2};
  std::vector<TrafficRecord> recs;
  for (auto part : {dated(TrafficSource::Default, true, 0, d1, 3),
                    dated(TrafficSource::Default, true, 1, d2, 4),
                    dated(TrafficSource::Random, true, 0, d1, 5),
                    dated(TrafficSource::Random, true, 1, std::nullopt, 6)}) {
    recs.insert(recs.end(), part.begin(), part.end());
  }
  const auto days = partition_daily(recs);
  ASSERT_EQ(days.size(), 2u);
  EXPECT_EQ(days.at(d1).recommended.pos_rec, (std::vector<std::int64_t>{3, 0}));
  EXPECT_EQ(days.at(d2).recommended.pos_rec, (std::vector<std::int64_t>{0, 4}));
  EXPECT_EQ(days.at(d1).random.pos_rand, (std::vector<std::int64_t>{5, 6}));
  EXPECT_EQ(days.at(d2).random.n_rand, 11);
}

TEST(DailyPartition, PerDayPolicy) {
  const year_month_day d1{2024y / 1 / 1}, d2{2024y / 1 / 2};
  DailyPartition p(RandomPolicy::PerDay);
  for (const auto& r : dated(TrafficSource::Default, true, 0, d1, 2)) p.add(r);
  for (const auto& r : dated(TrafficSource::Random, true, 0, d1, 3)) p.add(r);
  auto days = p.finish();
  EXPECT_EQ(days.at(d1).random.n_rand, 3);

  for (const auto& r : dated(TrafficSource::Default, true, 0, d2, 2)) p.add(r);
  const auto [kind, code] = error_of([&] { p.finish(); });
  EXPECT_EQ(code, "ingest.insufficient_random_traffic");
  EXPECT_EQ(kind, ErrorKind::Data);

  const auto undated = dated(TrafficSource::Random, true, 0, std::nullopt, 1);
  EXPECT_EQ(error_of([&] { p.add(undated[0]); }).second, "ingest.missing_date");
}

TEST(DailyPartition, DefaultRowsNeedDates) {
  DailyPartition p;
  const auto undated = dated(TrafficSource::Default, true, 0, std::nullopt, 1);
  const auto [kind, code] = error_of([&] { p.add(undated[0]); });
  EXPECT_EQ(code, "ingest.missing_date");
  EXPECT_EQ(kind, ErrorKind::Config);
}

}  // namespace
}  // namespace reo
