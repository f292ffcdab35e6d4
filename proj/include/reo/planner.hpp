#pragma once

// Traffic sizes needed for a target accuracy: with probability at least
// 1 - delta every estimated relative utility, and hence the penalty, lies
// within epsilon of its true value.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

namespace reo {

struct PlanRequest {
  std::size_t groups = 2;
  double epsilon = 0.1;
  double delta = 0.05;
  /// Pilot estimates, length `groups` when present. Missing utilities are
  /// derived as q / p when both pilots are given; anything still missing
  /// falls back to U = 1, p = q = 0.5 and the plan is flagged conservative.
  std::optional<std::vector<double>> p;
  std::optional<std::vector<double>> q;
  std::optional<std::vector<double>> utilities;
};

enum class PlanMode {
  /// n = 4 K^2 / (|U|_1^2 eps^2) ln(K / delta), scaled into traffic sizes
  /// by max_k U_k^2 (1 - x_k) / x_k.
  Uniform,
  /// Per-group accuracy of p_k and q_k: 3 / (x_k eps^2) ln(2 / delta).
  PerGroup,
};

struct Plan {
  PlanMode mode = PlanMode::Uniform;
  /// Unrounded n of the uniform mode (0 in per-group mode).
  double n_exact = 0.0;
  std::int64_t n = 0;
  std::int64_t recommended_size = 0;
  std::int64_t random_size = 0;
  /// Per-group sizes in per-group mode.
  std::vector<std::int64_t> recommended_by_group;
  std::vector<std::int64_t> random_by_group;
  bool conservative = false;
};

/// Throws config error "planner.config" for eps <= 0, delta outside (0, 1),
/// K = 0 or a pilot of the wrong length, and "planner.invalid_pilot" for
/// p_k or q_k outside (0, 1) or unusable utilities.
Plan plan_sizes(const PlanRequest& request, PlanMode mode = PlanMode::Uniform);

}  // namespace reo
