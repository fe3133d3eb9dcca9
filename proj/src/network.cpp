#include "svgene/network.hpp"

#include <Eigen/QR>
#include <cmath>

namespace svgene {

std::vector<LaplacianBlock> normalized_laplacian(const GeneNetwork& net) {
  const auto& degrees = net.degrees();
  std::vector<LaplacianBlock> blocks;
  blocks.reserve(net.components().size());
  for (const auto& comp : net.components()) {
    const int m = static_cast<int>(comp.size());
    Matrix l = Matrix::Identity(m, m);
    for (int a = 0; a < m; ++a) {
      const int j = comp[a];
      for (int b = a + 1; b < m; ++b) {
        const int lgene = comp[b];
        bool edge = false;
        for (int nb : net.neighbors(j)) {
          if (nb == lgene) {
            edge = true;
            break;
          }
        }
        if (edge) {
          const double v = -1.0 / std::sqrt(static_cast<double>(degrees[j]) * degrees[lgene]);
          l(a, b) = v;
          l(b, a) = v;
        }
      }
    }
    blocks.push_back(LaplacianBlock{comp, std::move(l)});
  }
  return blocks;
}

Vector rough_beta(const ValidatedDataset& data, const DesignMatrix& design) {
  const int n = data.n();
  const int p = data.p();
  const int K = data.K();
  const int q = 3 + (K - 1);  // intercept, two kernel columns, K-1 compositions

  Matrix x(n, q);
  x.col(0).setOnes();
  x.col(1) = design.values.col(0);
  x.col(2) = design.values.col(1);
  for (int k = 0; k + 1 < K; ++k) x.col(3 + k) = data.comps().w.col(k);

  Eigen::ColPivHouseholderQR<Matrix> qr(x);
  Vector beta = Vector::Zero(2 * p);
  if (qr.rank() < q) {
    // SingularDesign: the shared regression matrix is rank-deficient, so
    // every per-gene fit is; fall back to zero slopes
    return beta;
  }

  Vector y(n);
  for (int j = 0; j < p; ++j) {
    y.setZero();
    for (const auto& [i, v] : data.counts().nonzeros(j))
      y(i) = std::log1p(static_cast<double>(v));
    const Vector coef = qr.solve(y);
    beta(j) = coef(1);
    beta(j + p) = coef(2);
  }
  return beta;
}

SignedLaplacian::SignedLaplacian(const GeneNetwork& net, const Vector& tilde_beta, double epsilon)
    : p_(net.p()), epsilon_(epsilon), tilde_beta_(tilde_beta) {
  if (tilde_beta_.size() != 2 * p_) throw dimension_mismatch("tilde_beta must have length 2p");
  if (!tilde_beta_.allFinite()) throw invariant_violation("tilde_beta must be finite");
  if (!(epsilon_ > 0.0)) throw invariant_violation("ridge epsilon must be positive");

  sign_.resize(2 * p_);
  for (int t = 0; t < 2 * p_; ++t) sign_(t) = tilde_beta_(t) < 0.0 ? -1.0 : 1.0;

  const auto ltilde = normalized_laplacian(net);
  blocks_.reserve(2 * ltilde.size());
  for (int d = 0; d < 2; ++d) {
    for (const auto& lb : ltilde) {
      SignedBlock b;
      b.component = static_cast<int>(&lb - ltilde.data());
      b.dim = d;
      b.genes = lb.genes;
      const int m = static_cast<int>(lb.genes.size());
      b.m = lb.ltilde;
      for (int a = 0; a < m; ++a) {
        const double sa = sign_(coord(lb.genes[a], d));
        for (int c = a + 1; c < m; ++c) {
          const double s = sa * sign_(coord(lb.genes[c], d));
          b.m(a, c) *= s;
          b.m(c, a) *= s;
        }
        b.m(a, a) += epsilon_;
      }
      b.llt.compute(b.m);
      if (b.llt.info() != Eigen::Success)
        throw not_positive_definite("signed Laplacian block failed Cholesky");
      blocks_.push_back(std::move(b));
    }
  }
}

double SignedLaplacian::quad_form(const Vector& gamma) const {
  double total = 0.0;
  Vector sub;
  for (const auto& b : blocks_) {
    const int m = static_cast<int>(b.genes.size());
    sub.resize(m);
    for (int a = 0; a < m; ++a) sub(a) = gamma(coord(b.genes[a], b.dim));
    // gamma_b' (G G') gamma_b = |G' gamma_b|^2
    total += (b.llt.matrixL().transpose() * sub).squaredNorm();
  }
  return total;
}

Vector SignedLaplacian::solve(const SignedBlock& b, const Vector& rhs) const {
  return b.llt.solve(rhs);
}

Vector SignedLaplacian::sample_zero_mean(const SignedBlock& b, const Vector& z, double scale) const {
  // with L + eps I = G G', x = G^{-T} z has covariance (L + eps I)^{-1}
  Vector x = b.llt.matrixL().transpose().solve(z);
  return scale * x;
}

Matrix SignedLaplacian::dense() const {
  Matrix out = Matrix::Zero(2 * p_, 2 * p_);
  for (const auto& b : blocks_) {
    const int m = static_cast<int>(b.genes.size());
    for (int a = 0; a < m; ++a)
      for (int c = 0; c < m; ++c)
        out(coord(b.genes[a], b.dim), coord(b.genes[c], b.dim)) = b.m(a, c);
  }
  return out;
}

}  // namespace svgene
