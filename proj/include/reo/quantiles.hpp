#pragma once

namespace reo {

double normal_cdf(double x);

/// z with P(Z > z) = tail for Z ~ N(0, 1); tail in (0, 1).
double normal_upper_quantile(double tail);

/// t with P(T > t) = tail for T ~ Student-t with `dof` degrees of freedom.
double t_upper_quantile(double tail, double dof);

/// Validates a confidence level 1 - delta in (0, 1); throws config error.
void check_confidence(double confidence);

}  // namespace reo
