#include "svgene/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace svgene {

namespace {
constexpr double kTwoPi = 6.28318530717958647692;
}

std::string KernelSpec::name() const {
  switch (family) {
    case KernelFamily::Linear:
      return "linear";
    case KernelFamily::Exponential:
      return scale_quantile == ScaleQuantile::Q40 ? "exp_q40" : "exp_q60";
    case KernelFamily::Periodic:
      return scale_quantile == ScaleQuantile::Q40 ? "cos_q40" : "cos_q60";
  }
  return "?";
}

void KernelSpec::validate() const {
  if (family == KernelFamily::Linear) {
    if (scale_quantile != ScaleQuantile::None)
      throw invariant_violation("linear kernel takes no scale quantile");
    return;
  }
  if (scale_quantile == ScaleQuantile::None)
    throw invariant_violation("exponential/periodic kernel needs Q40 or Q60");
  if (!(scales[0] > 0.0 && scales[1] > 0.0))
    throw invariant_violation("kernel scales must be positive");
}

StdCoordinates standardize(const Coordinates& coords) {
  coords.validate();
  const int n = coords.n();
  Matrix out(n, 2);
  for (int d = 0; d < 2; ++d) {
    const double mean = coords.coords.col(d).mean();
    const double ss = (coords.coords.col(d).array() - mean).square().sum();
    const double sd = std::sqrt(ss / (n - 1));
    if (!(sd > 0.0))
      throw degenerate_column("coordinate column " + std::to_string(d) + " is constant");
    out.col(d) = (coords.coords.col(d).array() - mean) / sd;
  }
  return StdCoordinates{std::move(out)};
}

double quantile_type7(std::vector<double> values, double prob) {
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  if (n == 1) return values[0];
  const double h = (static_cast<double>(n) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, n - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ResolvedScales resolve_scales(const StdCoordinates& std_coords) {
  ResolvedScales out{};
  for (int d = 0; d < 2; ++d) {
    std::vector<double> absval(std_coords.n());
    for (int i = 0; i < std_coords.n(); ++i) absval[i] = std::abs(std_coords.coords(i, d));
    out.q40[d] = quantile_type7(absval, 0.40);
    out.q60[d] = quantile_type7(absval, 0.60);
  }
  return out;
}

double eval_kernel(const KernelSpec& spec, double x, int dim) {
  switch (spec.family) {
    case KernelFamily::Linear:
      return x;
    case KernelFamily::Exponential: {
      const double l = spec.scales[dim];
      // linear argument, exactly as specified (not |x| or x^2)
      return std::exp(-x / (2.0 * l * l));
    }
    case KernelFamily::Periodic: {
      const double l = spec.scales[dim];
      return std::cos(kTwoPi * x / l);
    }
  }
  return 0.0;
}

DesignMatrix build_design(const StdCoordinates& std_coords, const KernelSpec& spec) {
  spec.validate();
  const int n = std_coords.n();
  Matrix v(n, 2);
  for (int d = 0; d < 2; ++d)
    for (int i = 0; i < n; ++i) v(i, d) = eval_kernel(spec, std_coords.coords(i, d), d);
  if (!v.allFinite()) throw invariant_violation("non-finite design entry");
  return DesignMatrix{std::move(v)};
}

std::array<KernelSpec, 5> make_kernel_family(const ResolvedScales& scales) {
  std::array<KernelSpec, 5> out;
  out[0] = KernelSpec{KernelFamily::Linear, ScaleQuantile::None, {1.0, 1.0}};
  out[1] = KernelSpec{KernelFamily::Exponential, ScaleQuantile::Q40, scales.q40};
  out[2] = KernelSpec{KernelFamily::Exponential, ScaleQuantile::Q60, scales.q60};
  out[3] = KernelSpec{KernelFamily::Periodic, ScaleQuantile::Q40, scales.q40};
  out[4] = KernelSpec{KernelFamily::Periodic, ScaleQuantile::Q60, scales.q60};
  return out;
}

}  // namespace svgene
