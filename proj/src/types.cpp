#include "reo/types.hpp"

#include <string>

#include "reo/error.hpp"

namespace reo {

void GroupTally::add(const TrafficRecord& record, std::size_t row) {
  if (record.group >= groups) {
    throw data_error("metrics.schema",
                     "row " + std::to_string(row) + ": attribute group " +
                         std::to_string(record.group + 1) + " outside 1.." +
                         std::to_string(groups));
  }
  const auto k = record.group;
  if (record.source == TrafficSource::Random) {
    ++n_rand;
    if (record.label) ++pos_rand[k];
  } else {
    ++n_rec;
    if (record.label) ++pos_rec[k];
  }
  if (record.recommended.has_value()) {
    has_exposure = true;
    ++total[k];
    if (*record.recommended) ++shown[k];
  }
}

GroupTally& GroupTally::merge(const GroupTally& other) {
  if (other.groups != groups) {
    throw config_error("metrics.merge",
                       "cannot merge tallies with " + std::to_string(groups) +
                           " and " + std::to_string(other.groups) + " groups");
  }
  n_rand += other.n_rand;
  n_rec += other.n_rec;
  for (std::size_t k = 0; k < groups; ++k) {
    pos_rand[k] += other.pos_rand[k];
    pos_rec[k] += other.pos_rec[k];
    shown[k] += other.shown[k];
    total[k] += other.total[k];
  }
  has_exposure = has_exposure || other.has_exposure;
  return *this;
}

GroupTally GroupTally::with_random_from(const GroupTally& random) const {
  if (random.groups != groups) {
    throw config_error("metrics.merge", "random tally has a different group count");
  }
  GroupTally out = *this;
  out.n_rand = random.n_rand;
  out.pos_rand = random.pos_rand;
  return out;
}

GroupTally merge(GroupTally a, const GroupTally& b) {
  a.merge(b);
  return a;
}

std::string to_string(StdDivisor d) { return d == StdDivisor::K ? "K" : "K-1"; }

RowSet::RowSet(std::size_t groups, std::vector<std::uint16_t> cells)
    : groups_(groups), cells_(std::move(cells)) {
  for (std::size_t i = 0; i < cells_.size(); ++i) {
    if (cell_group(cells_[i]) >= groups_) {
      throw data_error("metrics.schema", "row " + std::to_string(i) +
                                             ": cell outside group range");
    }
  }
}

RowSet RowSet::from_records(std::span<const TrafficRecord> records,
                            TrafficSource source, std::size_t groups) {
  RowSet out(groups);
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.source != source) continue;
    if (r.group >= groups) {
      throw data_error("metrics.schema",
                       "row " + std::to_string(i) + ": attribute group " +
                           std::to_string(r.group + 1) + " outside 1.." +
                           std::to_string(groups));
    }
    out.cells_.push_back(cell(r.label, r.group));
  }
  return out;
}

void RowSet::push_back(bool label, std::size_t group) {
  if (group >= groups_) {
    throw data_error("metrics.schema", "group " + std::to_string(group + 1) +
                                           " outside 1.." + std::to_string(groups_));
  }
  cells_.push_back(cell(label, group));
}

}  // namespace reo
