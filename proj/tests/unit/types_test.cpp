#include <gtest/gtest.h>

#include <random>

#include "reo/error.hpp"
#include "reo/types.hpp"
#include "support.hpp"

namespace reo {
namespace {

GroupTally random_tally(std::mt19937_64& rng, std::size_t k) {
  std::uniform_int_distribution<std::int64_t> d(0, 1000);
  GroupTally t(k);
  for (std::size_t g = 0; g < k; ++g) {
    t.pos_rand[g] = d(rng);
    t.pos_rec[g] = d(rng);
    t.shown[g] = d(rng);
    t.total[g] = d(rng);
  }
  t.n_rand = d(rng) + 5000;
  t.n_rec = d(rng) + 5000;
  return t;
}

TEST(Signals, LabelIsOrOfSignals) {
  EngagementSignals s;
  EXPECT_FALSE(s.any());
  s.download = true;
  EXPECT_TRUE(s.any());
  const auto r = TrafficRecord::from_signals(TrafficSource::Random, s, 1);
  EXPECT_TRUE(r.label);
  EXPECT_EQ(r.group, 1u);
}

TEST(GroupTally, AddCountsBySource) {
  GroupTally t(2);
  std::vector<TrafficRecord> rows;
  testing::add_rows(rows, TrafficSource::Random, true, 0, 3);
  testing::add_rows(rows, TrafficSource::Random, false, 1, 2);
  testing::add_rows(rows, TrafficSource::Default, true, 1, 4);
  testing::add_rows(rows, TrafficSource::Default, false, 0, 1);
  for (std::size_t i = 0; i < rows.size(); ++i) t.add(rows[i], i);
  EXPECT_EQ(t.n_rand, 5);
  EXPECT_EQ(t.n_rec, 5);
  EXPECT_EQ(t.pos_rand, (std::vector<std::int64_t>{3, 0}));
  EXPECT_EQ(t.pos_rec, (std::vector<std::int64_t>{0, 4}));
  EXPECT_FALSE(t.has_exposure);
}

TEST(GroupTally, OutOfRangeGroupNamesRow) {
  GroupTally t(2);
  TrafficRecord r;
  r.group = 2;
  try {
    t.add(r, 17);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Data);
    EXPECT_NE(std::string(e.what()).find("row 17"), std::string::npos);
  }
}

TEST(GroupTally, MergeIsCommutativeAndAssociative) {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const auto a = random_tally(rng, 3);
    const auto b = random_tally(rng, 3);
    const auto c = random_tally(rng, 3);
    EXPECT_EQ(merge(a, b), merge(b, a));
    EXPECT_EQ(merge(merge(a, b), c), merge(a, merge(b, c)));
  }
}

TEST(GroupTally, MergeRejectsGroupMismatch) {
  GroupTally a(2), b(3);
  EXPECT_THROW(a.merge(b), Error);
}

TEST(GroupTally, WithRandomFromReplacesRandomPart) {
  auto t = testing::make_tally({1, 2}, 10, {3, 4}, 20);
  const auto r = testing::make_tally({5, 6}, 50, {0, 0}, 0);
  const auto x = t.with_random_from(r);
  EXPECT_EQ(x.n_rand, 50);
  EXPECT_EQ(x.pos_rand, (std::vector<std::int64_t>{5, 6}));
  EXPECT_EQ(x.pos_rec, t.pos_rec);
}

TEST(StdDivisor, Names) {
  EXPECT_EQ(to_string(StdDivisor::K), "K");
  EXPECT_EQ(to_string(StdDivisor::KMinus1), "K-1");
  EXPECT_EQ(divisor_value(StdDivisor::KMinus1, 3), 2.0);
}

TEST(RowSet, FromRecordsKeepsSourceAndOrder) {
  std::vector<TrafficRecord> rows;
  testing::add_rows(rows, TrafficSource::Default, true, 1, 1);
  testing::add_rows(rows, TrafficSource::Random, false, 0, 2);
  testing::add_rows(rows, TrafficSource::Default, false, 0, 1);
  const auto s = RowSet::from_records(rows, TrafficSource::Default, 2);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s.cells()[0], RowSet::cell(true, 1));
  EXPECT_EQ(s.cells()[1], RowSet::cell(false, 0));
  EXPECT_EQ(RowSet::cell_group(3), 1u);
  EXPECT_TRUE(RowSet::cell_label(3));
}

TEST(RowSet, RejectsCellOutsideGroups) {
  EXPECT_THROW(RowSet(1, std::vector<std::uint16_t>{0, 1, 2}), Error);
  RowSet s(2);
  EXPECT_THROW(s.push_back(true, 2), Error);
}

TEST(Interval, Helpers) {
  Interval i{-0.1, 0.3};
  EXPECT_FALSE(i.excludes_zero());
  EXPECT_TRUE(i.contains(0.3));
  EXPECT_DOUBLE_EQ(i.width(), 0.4);
  EXPECT_TRUE((Interval{0.01, 0.2}).excludes_zero());
}

}  // namespace
}  // namespace reo
