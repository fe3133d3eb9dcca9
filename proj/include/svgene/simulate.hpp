#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svgene/rng.hpp"
#include "svgene/types.hpp"

namespace svgene::sim {

enum class NetworkKind { Star, ScaleFree };
enum class Pattern { Linear, Exponential, Periodic };

// One simulation scenario. Defaults reproduce the basic design: 32x32
// lattice, 5000 genes in 100 sub-networks of 50, 6 cell types, first 10
// sub-networks informative.
struct ScenarioConfig {
  int grid_rows = 32;
  int grid_cols = 32;
  int p = 5000;
  int K = 6;
  int subnet_count = 100;
  int subnet_size = 50;
  int sv_subnets = 10;
  NetworkKind network_kind = NetworkKind::Star;
  Pattern pattern = Pattern::Linear;
  double dropout = 0.1;
  double phi = 10.0;
  double mu0_mean = 2.0, mu0_sd = 0.5;
  double alpha_mean = 0.0, alpha_sd = 3.5;
  std::vector<std::vector<double>> region_concentrations = {
      {1, 1, 1, 1, 1, 1}, {3, 5, 7, 9, 11, 13}, {18, 16, 14, 12, 10, 8}};
  std::uint64_t seed = 1;

  void validate() const;
};

struct Spots {
  Coordinates coords;
  std::vector<int> region;  // 1-based labels
};

// unit-spaced lattice; default partition: horizontal bands of near-equal
// size, one per concentration vector, labeled top to bottom
Spots make_spots(int rows, int cols, int n_regions);

// validates that a user-supplied labeling covers every spot with a known
// region
void check_region_cover(const std::vector<int>& labels, int n_spots, int n_regions);

CellCompositions sample_compositions(const std::vector<int>& labels,
                                     const std::vector<std::vector<double>>& concentrations,
                                     std::uint64_t seed);

GeneNetwork make_network(NetworkKind kind, int subnet_count, int subnet_size, std::uint64_t seed);

// per-subnet hub index (star: node 0; scale-free: max degree, lowest index
// on ties)
std::vector<int> find_hubs(const GeneNetwork& net, int subnet_count, int subnet_size);

Vector assign_effects(const GeneNetwork& net, Pattern pattern, NetworkKind kind, int subnet_count,
                      int subnet_size, int sv_subnets, std::uint64_t seed);

struct GroundTruth {
  std::vector<int> sv_genes;  // ascending
  Vector beta_true;           // 2p
};

struct Generated {
  CountMatrix counts;
  Coordinates coords;
  CellCompositions comps;
  GeneNetwork network;
  GroundTruth truth;
};

// the generator's fixed pattern functions: x, exp(-x/2), cos(2 pi x) on
// standardized coordinates
double pattern_value(Pattern pattern, double x);

CountMatrix generate_counts(const Coordinates& coords, const CellCompositions& comps,
                            const Vector& beta_true, Pattern pattern, double phi, double dropout,
                            double mu0_mean, double mu0_sd, double alpha_mean, double alpha_sd,
                            std::uint64_t seed);

Generated generate_scenario(const ScenarioConfig& cfg);

// misspecification model M1: cell-type-specific ZINB means on a 30x20 grid
Generated generate_m1(std::uint64_t seed);

struct Metrics {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

Metrics classification_metrics(const std::vector<int>& selected, const std::vector<int>& truth);

}  // namespace svgene::sim
