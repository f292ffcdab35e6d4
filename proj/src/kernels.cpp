#include "reo/kernels.hpp"

#include <algorithm>
#include <random>

#include "reo/error.hpp"

namespace reo::kernels {
namespace {

constexpr std::size_t kChunkRows = std::size_t{1} << 16;

std::size_t chunk_count(std::size_t rows) {
  return (rows + kChunkRows - 1) / kChunkRows;
}

}  // namespace

std::vector<std::int64_t> count_cells_serial(std::span<const std::uint16_t> cells,
                                             std::size_t cell_count) {
  std::vector<std::int64_t> hist(cell_count, 0);
  for (auto c : cells) ++hist[c];
  return hist;
}

std::vector<std::int64_t> count_cells_parallel(std::span<const std::uint16_t> cells,
                                               std::size_t cell_count) {
  const std::size_t chunks = chunk_count(cells.size());
  std::vector<std::vector<std::int64_t>> partial(chunks);
  for_each_index(Execution::Parallel, chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunkRows;
    const std::size_t end = std::min(cells.size(), begin + kChunkRows);
    partial[c] = count_cells_serial(cells.subspan(begin, end - begin), cell_count);
  });
  std::vector<std::int64_t> hist(cell_count, 0);
  for (const auto& p : partial) {
    for (std::size_t i = 0; i < cell_count; ++i) hist[i] += p[i];
  }
  return hist;
}

GroupTally tally_serial(std::span<const TrafficRecord> records, std::size_t groups) {
  GroupTally t(groups);
  for (std::size_t i = 0; i < records.size(); ++i) t.add(records[i], i);
  return t;
}

GroupTally tally_parallel(std::span<const TrafficRecord> records, std::size_t groups) {
  const std::size_t chunks = chunk_count(records.size());
  std::vector<GroupTally> partial(chunks);
  for_each_index(Execution::Parallel, chunks, [&](std::size_t c) {
    const std::size_t begin = c * kChunkRows;
    const std::size_t end = std::min(records.size(), begin + kChunkRows);
    GroupTally t(groups);
    for (std::size_t i = begin; i < end; ++i) t.add(records[i], i);
    partial[c] = std::move(t);
  });
  GroupTally out(groups);
  for (const auto& p : partial) out.merge(p);
  return out;
}

std::vector<std::int64_t> resample_cells(std::span<const std::uint16_t> cells,
                                         std::size_t cell_count, Rng& rng) {
  std::vector<std::int64_t> hist(cell_count, 0);
  if (cells.empty()) return hist;
  std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
  for (std::size_t i = 0; i < cells.size(); ++i) ++hist[cells[pick(rng)]];
  return hist;
}

std::vector<std::int64_t> positives_from_cells(std::span<const std::int64_t> histogram) {
  std::vector<std::int64_t> pos(histogram.size() / 2, 0);
  for (std::size_t k = 0; k < pos.size(); ++k) pos[k] = histogram[2 * k + 1];
  return pos;
}

}  // namespace reo::kernels
