#include "svgene/rng.hpp"

#include <cmath>
#include <limits>

#include "svgene/errors.hpp"

namespace svgene::rng {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kInvSqrt2 = 0.70710678118654752440;
}  // namespace

double Stream::normal() {
  // Box-Muller; fixed consumption of two uniforms per draw
  const double u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

double Stream::gamma(double shape, double scale) {
  if (shape < 1.0) {
    const double u = uniform();
    return gamma(shape + 1.0, scale) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v * scale;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v * scale;
  }
}

double Stream::trunc_normal(double mean, double sd, double lo, double hi) {
  double a = (lo - mean) / sd;
  double b = (hi - mean) / sd;
  bool flipped = false;
  if (b < -a) {  // reflect so the nearer-to-zero bound is on the left
    const double t = a;
    a = -b;
    b = -t;
    flipped = true;
  }
  double z;
  if (a < 0.45) {
    // interval covers the bulk: plain rejection from N(0,1)
    do {
      z = normal();
    } while (z < a || z > b);
  } else {
    // one-sided tail: Robert's shifted-exponential rejection
    const double rate = 0.5 * (a + std::sqrt(a * a + 4.0));
    for (;;) {
      z = a - std::log(uniform()) / rate;
      if (z > b) continue;
      const double diff = z - rate;
      if (std::log(uniform()) <= -0.5 * diff * diff) break;
    }
  }
  if (flipped) z = -z;
  return mean + sd * z;
}

long Stream::poisson(double mean) {
  if (!(mean >= 0.0)) throw invariant_violation("poisson mean must be nonnegative");
  if (mean == 0.0) return 0;
  if (mean < 30.0) {
    // Knuth multiplication in the log domain
    const double threshold = -mean;
    double acc = 0.0;
    long k = 0;
    for (;;) {
      acc += std::log(uniform());
      if (acc < threshold) return k;
      ++k;
    }
  }
  // Hormann's PTRD transformed rejection for large means
  const double smu = std::sqrt(mean);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  for (;;) {
    double u;
    double v = uniform();
    if (v <= 0.86 * v_r) {
      u = v / v_r - 0.43;
      return static_cast<long>(std::floor((2.0 * a / (0.5 - std::abs(u)) + b) * u + mean + 0.445));
    }
    if (v >= v_r) {
      u = uniform() - 0.5;
    } else {
      u = v / v_r - 0.93;
      u = (u < 0 ? -0.5 : 0.5) - u;
      v = uniform() * v_r;
    }
    const double us = 0.5 - std::abs(u);
    if (us < 0.013 && v > us) continue;
    const double k = std::floor((2.0 * a / us + b) * u + mean + 0.445);
    v = v * inv_alpha / (a / (us * us) + b);
    if (k >= 10.0) {
      if (std::log(v * smu) <= (k + 0.5) * std::log(mean / k) - mean -
                                   std::log(std::sqrt(2.0 * kPi)) + k -
                                   (1.0 / 12.0 - 1.0 / (360.0 * k * k)) / k) {
        return static_cast<long>(k);
      }
    } else if (k >= 0.0) {
      if (std::log(v) <= k * std::log(mean) - mean - std::lgamma(k + 1.0)) {
        return static_cast<long>(k);
      }
    }
  }
}

std::vector<double> Stream::dirichlet(const std::vector<double>& concentration) {
  std::vector<double> out(concentration.size());
  double total = 0.0;
  for (std::size_t k = 0; k < concentration.size(); ++k) {
    out[k] = gamma(concentration[k], 1.0);
    total += out[k];
  }
  for (auto& v : out) v /= total;
  return out;
}

double normal_interval_prob(double lo, double hi) {
  if (hi <= lo) return 0.0;
  // Phi(b) - Phi(a) via erfc on the side where both arguments share a sign
  if (lo >= 0.0) return 0.5 * (std::erfc(lo * kInvSqrt2) - std::erfc(hi * kInvSqrt2));
  if (hi <= 0.0) return 0.5 * (std::erfc(-hi * kInvSqrt2) - std::erfc(-lo * kInvSqrt2));
  return 1.0 - 0.5 * (std::erfc(-lo * kInvSqrt2) + std::erfc(hi * kInvSqrt2));
}

double log_trunc_normal_pdf(double x, double mean, double sd, double lo, double hi) {
  if (x < lo || x > hi) return -std::numeric_limits<double>::infinity();
  const double z = (x - mean) / sd;
  const double mass = normal_interval_prob((lo - mean) / sd, (hi - mean) / sd);
  return -0.5 * z * z - std::log(sd) - 0.5 * std::log(2.0 * kPi) - std::log(mass);
}

}  // namespace svgene::rng
