#pragma once

namespace softcover {

/// Standard normal CDF.
double normal_cdf(double x);
/// Inverse standard normal CDF on (0, 1); throws ValidationError outside.
double normal_quantile(double p);

}  // namespace softcover
