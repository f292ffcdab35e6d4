#pragma once

// Data-parallel inner loops. Each kernel has a serial reference form used by
// the tests and the benchmark to check the OpenMP form against.

#include <cstdint>
#include <span>
#include <vector>

#include "reo/parallel.hpp"
#include "reo/rng.hpp"
#include "reo/types.hpp"

namespace reo::kernels {

/// Histogram of cell indices in [0, cell_count).
std::vector<std::int64_t> count_cells_serial(std::span<const std::uint16_t> cells,
                                             std::size_t cell_count);
std::vector<std::int64_t> count_cells_parallel(std::span<const std::uint16_t> cells,
                                               std::size_t cell_count);

inline std::vector<std::int64_t> count_cells(Execution exec,
                                             std::span<const std::uint16_t> cells,
                                             std::size_t cell_count) {
  return exec == Execution::Serial ? count_cells_serial(cells, cell_count)
                                   : count_cells_parallel(cells, cell_count);
}

/// Tally of a record span. Out-of-range groups raise a data error naming the
/// lowest offending row in both forms.
GroupTally tally_serial(std::span<const TrafficRecord> records, std::size_t groups);
GroupTally tally_parallel(std::span<const TrafficRecord> records, std::size_t groups);

/// Draws size() rows uniformly with replacement and returns the histogram of
/// their cells. Sequential by nature; parallelism lives one level up, across
/// bootstrap replicates.
std::vector<std::int64_t> resample_cells(std::span<const std::uint16_t> cells,
                                         std::size_t cell_count, Rng& rng);

/// Positive counts per group from a cell histogram (odd cells).
std::vector<std::int64_t> positives_from_cells(std::span<const std::int64_t> histogram);

}  // namespace reo::kernels
