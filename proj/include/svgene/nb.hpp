#pragma once

#include <cmath>

namespace svgene {

// log NB(y | mu, phi) in the mean/size parameterization: expectation mu,
// variance mu + mu^2/phi. Stable in the log domain for counts up to 1e6+.
inline double nb_logpmf(double y, double mu, double phi) {
  return std::lgamma(y + phi) - std::lgamma(phi) - std::lgamma(y + 1.0) +
         phi * std::log(phi / (mu + phi)) + y * std::log(mu / (mu + phi));
}

// P(r = 1 | -) for a zero entry: the Be-Bern factor reduces to the ratio
// a_pi/b_pi, leaving 1 / (1 + (b/a) (phi/(mu+phi))^phi)
inline double dropout_prob(double mu, double phi, double a_pi, double b_pi) {
  const double nb0 = std::exp(phi * std::log(phi / (mu + phi)));
  return 1.0 / (1.0 + (b_pi / a_pi) * nb0);
}

// hard-thresholded coefficient: gamma * I(|gamma| > threshold)
inline double threshold_coef(double gamma, double lambda, double rho) {
  return std::abs(gamma) > lambda * rho ? gamma : 0.0;
}

// smoothed inclusion indicator I(|g| > t) ~ 1/2 + atan((g^2 - t^2)/eps)/pi
inline double smooth_indicator(double g, double threshold, double eps) {
  return 0.5 + std::atan((g * g - threshold * threshold) / eps) / 3.14159265358979323846;
}

// d/dg of g * smooth_indicator(g): I_eps(g) + g dI_eps/dg
inline double smooth_threshold_deriv(double g, double threshold, double eps) {
  const double u = (g * g - threshold * threshold) / eps;
  const double dI = (2.0 * g / eps) / (3.14159265358979323846 * (1.0 + u * u));
  return smooth_indicator(g, threshold, eps) + g * dI;
}

}  // namespace svgene
