#pragma once

namespace sglab {

// Standard normal density, CDF, and quantile.  The quantile uses a rational
// initial approximation polished by one Halley step on the CDF, giving
// close to full double accuracy across (0, 1).
double normal_pdf(double x);
double normal_cdf(double x);
double normal_quantile(double p); // ConfigError outside (0, 1)

} // namespace sglab
