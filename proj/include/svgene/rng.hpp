#pragma once

#include <cstdint>
#include <vector>

namespace svgene::rng {

// splitmix64; used both as a mixer for stream keys and to seed stream state.
inline std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
  std::uint64_t s = a;
  s = splitmix64(s) ^ (b + 0x9e3779b97f4a7c15ULL);
  return splitmix64(s);
}

// xoshiro256** seeded from a 64-bit key. Every parallel work unit (gene,
// block, chain) owns one stream derived from (seed, sweep, step, unit), so
// results do not depend on the number of threads executing the partition.
class Stream {
 public:
  explicit Stream(std::uint64_t key) {
    std::uint64_t sm = key;
    for (auto& w : s_) w = splitmix64(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // all-zero state is invalid
  }

  Stream(std::uint64_t seed, std::uint64_t sweep, std::uint64_t step, std::uint64_t unit)
      : Stream(mix(mix(seed, sweep), mix(step, unit))) {}

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // uniform on (0,1); never returns exactly 0 so log(u) is safe
  double uniform() {
    const double u = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    return u > 0.0 ? u : 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal();
  double normal(double mean, double sd) { return mean + sd * normal(); }

  // Gamma(shape, scale); Marsaglia-Tsang, with the boost U^{1/a} for shape < 1.
  double gamma(double shape, double scale);

  // N(mean, sd^2) truncated to [lo, hi] (either bound may be infinite)
  double trunc_normal(double mean, double sd, double lo, double hi);

  // Poisson with arbitrary mean (Knuth below 30, transformed rejection above)
  long poisson(double mean);

  // NB with mean mu and variance mu + mu^2/phi (gamma-Poisson mixture)
  long neg_binomial(double mu, double phi) { return poisson(gamma(phi, mu / phi)); }

  std::vector<double> dirichlet(const std::vector<double>& concentration);

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

// P(lo < Z < hi) for standard normal, computed on one erfc branch to avoid
// cancellation in the tails
double normal_interval_prob(double lo, double hi);

// log density of N(mean, sd^2) truncated to [lo, hi], evaluated at x
double log_trunc_normal_pdf(double x, double mean, double sd, double lo, double hi);

}  // namespace svgene::rng
