#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "svgene/errors.hpp"

namespace svgene {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Raw UMI counts, n spots by p genes. Stored sparse-keyed per gene (spot,
// value pairs for nonzeros) plus the explicit zero-spot list per gene; real
// spot data is mostly zeros.
class CountMatrix {
 public:
  CountMatrix(int n, int p, const std::vector<std::vector<std::pair<int, long>>>& nonzeros_per_gene);

  // convenience constructor from a dense integer matrix (tests, simulation)
  static CountMatrix from_dense(const Eigen::MatrixXi& dense);

  int n() const { return n_; }
  int p() const { return p_; }

  const std::vector<std::pair<int, long>>& nonzeros(int gene) const { return nonzeros_[gene]; }
  const std::vector<int>& zero_spots(int gene) const { return zeros_[gene]; }
  std::int64_t zero_count() const { return zero_count_; }

  long at(int spot, int gene) const;
  Matrix to_dense() const;

 private:
  int n_ = 0, p_ = 0;
  std::vector<std::vector<std::pair<int, long>>> nonzeros_;  // per gene, sorted by spot
  std::vector<std::vector<int>> zeros_;                      // per gene, ascending spots
  std::int64_t zero_count_ = 0;
};

// Spot-center positions, n x 2.
struct Coordinates {
  Matrix coords;

  void validate() const;
  int n() const { return static_cast<int>(coords.rows()); }
};

// Per-spot cell-type proportions on the simplex, n x K.
struct CellCompositions {
  Matrix w;

  void validate() const;
  int n() const { return static_cast<int>(w.rows()); }
  int K() const { return static_cast<int>(w.cols()); }
};

// Undirected gene-gene adjacency held as a deduplicated edge set, with
// degrees and the connected-component partition computed at construction.
class GeneNetwork {
 public:
  GeneNetwork(int p, std::vector<std::pair<int, int>> edges);

  // checks symmetry / zero diagonal of an explicit 0-1 matrix
  static GeneNetwork from_adjacency(const Eigen::MatrixXi& a);

  int p() const { return p_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  const std::vector<int>& degrees() const { return degrees_; }

  // disjoint cover of {0..p-1}; components sorted by smallest member,
  // members ascending; singletons are their own components
  const std::vector<std::vector<int>>& components() const { return components_; }
  int component_of(int gene) const { return component_of_[gene]; }

  const std::vector<int>& neighbors(int gene) const { return adjacency_[gene]; }

 private:
  int p_ = 0;
  std::vector<std::pair<int, int>> edges_;  // j < l, sorted, unique
  std::vector<int> degrees_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<std::vector<int>> components_;
  std::vector<int> component_of_;
};

// Prior and procedural constants. lambda_u defaults to NaN = resolve from the
// data as the 90% quantile of |beta~|.
struct HyperParams {
  double a_pi = 1.0, b_pi = 1.0;
  double a_phi = 10.0, b_phi = 0.1;
  double a_gamma = 3.5, b_gamma = 0.5;
  double sigma0_sq = 9.0;
  double sigma_alpha_sq = 9.0;
  double lambda_l = 0.0;
  double lambda_u = std::numeric_limits<double>::quiet_NaN();
  double ridge_epsilon = 1e-3;
  double smooth_epsilon = 1e-4;
  double bfdr_level = 0.05;
  double consensus_fraction = 0.8;

  void validate() const;
};

// Random-walk / pCN sampling variances plus the tuning target.
struct ProposalScales {
  double tau_mu0_sq = 0.1;
  double tau_alpha_sq = 0.01;
  double tau_phi_sq = 1.0;
  double tau_gamma_sq = 0.01;
  double tau_lambda_sq = std::numeric_limits<double>::quiet_NaN();  // NaN: (0.1 (lambda_u-lambda_l))^2
  double target_accept = 0.30;

  void validate() const;
};

// Full per-chain MCMC state for one kernel model. gamma/rho/tilde-related
// vectors are stacked (dimension-1 block then dimension-2 block, length 2p).
struct ModelState {
  Vector gamma;          // 2p
  Vector rho;            // 2p, positive weights
  double lambda = 0.0;   // threshold, in [lambda_l, lambda_u]
  double sigma_gamma_sq = 1.0;
  Vector mu0;            // p
  Vector alpha;          // K
  double phi = 10.0;
  Vector size_factors;   // n, c_i, default all ones

  // dropout indicators, maintained only on the zero entries of Y; per gene,
  // aligned with CountMatrix::zero_spots(gene)
  std::vector<std::vector<std::uint8_t>> r;

  int p() const { return static_cast<int>(mu0.size()); }
};

// Cross-validated bundle shared read-only by every chain.
class ValidatedDataset {
 public:
  ValidatedDataset(CountMatrix counts, Coordinates coords, CellCompositions comps, GeneNetwork net,
                   Vector size_factors = Vector());

  const CountMatrix& counts() const { return counts_; }
  const Coordinates& coords() const { return coords_; }
  const CellCompositions& comps() const { return comps_; }
  const GeneNetwork& network() const { return net_; }
  const Vector& size_factors() const { return size_factors_; }

  int n() const { return counts_.n(); }
  int p() const { return counts_.p(); }
  int K() const { return comps_.K(); }

  // cached {(i,j): Y_ij = 0}, grouped per gene
  const std::vector<int>& zero_spots(int gene) const { return counts_.zero_spots(gene); }
  std::int64_t zero_count() const { return counts_.zero_count(); }

 private:
  CountMatrix counts_;
  Coordinates coords_;
  CellCompositions comps_;
  GeneNetwork net_;
  Vector size_factors_;
};

ValidatedDataset validate_dataset(CountMatrix counts, Coordinates coords, CellCompositions comps,
                                  GeneNetwork net, Vector size_factors = Vector());

}  // namespace svgene
