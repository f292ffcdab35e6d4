#include "reo/quantiles.hpp"

#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <string>

#include "reo/error.hpp"

namespace reo {

double normal_cdf(double x) {
  return boost::math::cdf(boost::math::normal_distribution<double>(), x);
}

double normal_upper_quantile(double tail) {
  if (!(tail > 0.0 && tail < 1.0)) {
    throw config_error("inference.config", "quantile tail must lie in (0, 1)");
  }
  return boost::math::quantile(
      boost::math::complement(boost::math::normal_distribution<double>(), tail));
}

double t_upper_quantile(double tail, double dof) {
  if (!(tail > 0.0 && tail < 1.0)) {
    throw config_error("inference.config", "quantile tail must lie in (0, 1)");
  }
  if (!(dof > 0.0)) {
    throw config_error("inference.config", "degrees of freedom must be positive");
  }
  return boost::math::quantile(
      boost::math::complement(boost::math::students_t_distribution<double>(dof), tail));
}

void check_confidence(double confidence) {
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw config_error("inference.config",
                       "confidence level must lie in (0, 1), got " + std::to_string(confidence));
  }
}

}  // namespace reo
