#include "reo/planner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "reo/error.hpp"

namespace reo {
namespace {

void check_length(const std::optional<std::vector<double>>& v, std::size_t k, const char* name) {
  if (v && v->size() != k) {
    throw config_error("planner.config", std::string("pilot ") + name + " must have " +
                                             std::to_string(k) + " entries");
  }
}

void check_open_unit(const std::vector<double>& v, const char* name) {
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] > 0.0 && v[k] < 1.0)) {
      throw config_error("planner.invalid_pilot", std::string("pilot ") + name + " for group " +
                                                      std::to_string(k + 1) +
                                                      " must lie in (0, 1)");
    }
  }
}

std::int64_t ceil_size(double x) { return static_cast<std::int64_t>(std::ceil(x)); }

}  // namespace

Plan plan_sizes(const PlanRequest& req, PlanMode mode) {
  const std::size_t k = req.groups;
  if (k == 0) throw config_error("planner.config", "group count must be positive");
  if (!(req.epsilon > 0.0) || !std::isfinite(req.epsilon)) {
    throw config_error("planner.config", "epsilon must be positive");
  }
  if (!(req.delta > 0.0 && req.delta < 1.0)) {
    throw config_error("planner.config", "delta must lie in (0, 1)");
  }
  check_length(req.p, k, "p");
  check_length(req.q, k, "q");
  check_length(req.utilities, k, "utilities");
  if (req.p) check_open_unit(*req.p, "p");
  if (req.q) check_open_unit(*req.q, "q");

  Plan plan;
  plan.mode = mode;
  plan.conservative = !req.p || !req.q;
  const std::vector<double> p = req.p.value_or(std::vector<double>(k, 0.5));
  const std::vector<double> q = req.q.value_or(std::vector<double>(k, 0.5));
  const double eps2 = req.epsilon * req.epsilon;

  if (mode == PlanMode::PerGroup) {
    const double log_term = std::log(2.0 / req.delta);
    for (std::size_t g = 0; g < k; ++g) {
      plan.random_by_group.push_back(ceil_size(3.0 / (p[g] * eps2) * log_term));
      plan.recommended_by_group.push_back(ceil_size(3.0 / (q[g] * eps2) * log_term));
    }
    plan.random_size =
        *std::max_element(plan.random_by_group.begin(), plan.random_by_group.end());
    plan.recommended_size =
        *std::max_element(plan.recommended_by_group.begin(), plan.recommended_by_group.end());
    return plan;
  }

  std::vector<double> u;
  if (req.utilities) {
    u = *req.utilities;
  } else if (req.p && req.q) {
    for (std::size_t g = 0; g < k; ++g) u.push_back(q[g] / p[g]);
  } else {
    u.assign(k, 1.0);
    plan.conservative = true;
  }
  double l1 = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    if (!(u[g] >= 0.0) || !std::isfinite(u[g])) {
      throw config_error("planner.invalid_pilot",
                         "pilot utility for group " + std::to_string(g + 1) +
                             " must be finite and nonnegative");
    }
    l1 += u[g];
  }
  if (!(l1 > 0.0)) {
    throw config_error("planner.invalid_pilot", "pilot utilities are all zero");
  }

  const double kk = static_cast<double>(k);
  plan.n_exact = 4.0 * kk * kk / (l1 * l1 * eps2) * std::log(kk / req.delta);
  plan.n = ceil_size(plan.n_exact);
  double rec_factor = 0.0;
  double rand_factor = 0.0;
  for (std::size_t g = 0; g < k; ++g) {
    rec_factor = std::max(rec_factor, u[g] * u[g] * (1.0 - q[g]) / q[g]);
    rand_factor = std::max(rand_factor, u[g] * u[g] * (1.0 - p[g]) / p[g]);
  }
  plan.recommended_size = ceil_size(static_cast<double>(plan.n) * rec_factor);
  plan.random_size = ceil_size(static_cast<double>(plan.n) * rand_factor);
  return plan;
}

}  // namespace reo
