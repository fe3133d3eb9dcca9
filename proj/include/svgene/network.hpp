#pragma once

#include <Eigen/Cholesky>
#include <vector>

#include "svgene/kernels.hpp"
#include "svgene/types.hpp"

namespace svgene {

// Normalized Laplacian restricted to one connected component. For isolated
// genes the diagonal is 1 (identity block), so their prior is iid
// N(0, sigma^2/(1+eps)).
struct LaplacianBlock {
  std::vector<int> genes;  // member gene indices, ascending
  Matrix ltilde;           // |genes| x |genes|, I - D^{-1/2} A D^{-1/2}
};

std::vector<LaplacianBlock> normalized_laplacian(const GeneNetwork& net);

// least-squares slopes of log1p(Y_j) on (1, K(x1), K(x2), w_1..w_{K-1});
// stacked (dimension 1 then dimension 2), length 2p
Vector rough_beta(const ValidatedDataset& data, const DesignMatrix& design);

// One factorized block of the signed, ridged Laplacian: the component block
// for one coordinate copy d, with entries sgn(bt_j) sgn(bt_l) Ltilde_jl + eps I.
struct SignedBlock {
  int component = 0;
  int dim = 0;             // 0 or 1 (which coordinate copy)
  std::vector<int> genes;  // gene indices within {0..p-1}
  Matrix m;                // L + eps I restricted to this block
  Eigen::LLT<Matrix> llt;
};

// Block-diagonal (L + eps I) over 2p coordinates together with the rough
// estimate that fixed the signs. Immutable once built; shared by all chains.
class SignedLaplacian {
 public:
  SignedLaplacian(const GeneNetwork& net, const Vector& tilde_beta, double epsilon);

  const std::vector<SignedBlock>& blocks() const { return blocks_; }
  int n_components() const { return static_cast<int>(blocks_.size() / 2); }
  const SignedBlock& block(int component, int dim) const {
    return blocks_[static_cast<std::size_t>(dim) * n_components() + component];
  }
  const Vector& tilde_beta() const { return tilde_beta_; }
  const Vector& sign() const { return sign_; }  // length 2p, sgn(0) := +1
  double epsilon() const { return epsilon_; }
  int p() const { return p_; }

  // stacked index of (gene, dim) in a length-2p vector
  int coord(int gene, int dim) const { return gene + dim * p_; }

  // gamma' (L + eps I) gamma over all 2p coordinates, computed block-wise
  double quad_form(const Vector& gamma) const;

  // solve (L + eps I) x = rhs restricted to one block
  Vector solve(const SignedBlock& b, const Vector& rhs) const;

  // draw from N(0, scale^2 (L + eps I)^{-1}) restricted to one block, given
  // iid standard normals z
  Vector sample_zero_mean(const SignedBlock& b, const Vector& z, double scale) const;

  // dense 2p x 2p assembly (tests and small-problem checks)
  Matrix dense() const;

 private:
  int p_ = 0;
  double epsilon_ = 1e-3;
  Vector tilde_beta_;
  Vector sign_;
  std::vector<SignedBlock> blocks_;
};

}  // namespace svgene
