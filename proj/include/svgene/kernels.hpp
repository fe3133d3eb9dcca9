#pragma once

#include <array>
#include <string>

#include "svgene/types.hpp"

namespace svgene {

enum class KernelFamily { Linear, Exponential, Periodic };
enum class ScaleQuantile { None, Q40, Q60 };

// One spatialization function with its per-dimension scale parameters.
// Exponential and Periodic use the 40% or 60% quantile of |x_d| as l_d;
// Linear has no scale.
struct KernelSpec {
  KernelFamily family = KernelFamily::Linear;
  ScaleQuantile scale_quantile = ScaleQuantile::None;
  std::array<double, 2> scales{1.0, 1.0};

  std::string name() const;
  void validate() const;
};

// coordinates after per-column z-scoring (sample sd, divisor n-1)
struct StdCoordinates {
  Matrix coords;
  int n() const { return static_cast<int>(coords.rows()); }
};

// n x 2, column d holds K(x_id)
struct DesignMatrix {
  Matrix values;
};

StdCoordinates standardize(const Coordinates& coords);

// per dimension: (40% quantile, 60% quantile) of |x_d|, type-7 interpolation
struct ResolvedScales {
  std::array<double, 2> q40;
  std::array<double, 2> q60;
};
ResolvedScales resolve_scales(const StdCoordinates& std_coords);

// type-7 (linear interpolation) empirical quantile of an unsorted sample
double quantile_type7(std::vector<double> values, double prob);

double eval_kernel(const KernelSpec& spec, double x, int dim);

DesignMatrix build_design(const StdCoordinates& std_coords, const KernelSpec& spec);

// the five model kernels: linear, exp(q40), exp(q60), cos(q40), cos(q60)
std::array<KernelSpec, 5> make_kernel_family(const ResolvedScales& scales);

}  // namespace svgene
