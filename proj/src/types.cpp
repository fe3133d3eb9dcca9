#include "svgene/types.hpp"

#include <algorithm>
#include <numeric>

namespace svgene {

CountMatrix::CountMatrix(int n, int p,
                         const std::vector<std::vector<std::pair<int, long>>>& nonzeros_per_gene)
    : n_(n), p_(p), nonzeros_(nonzeros_per_gene) {
  if (n_ < 2 || p_ < 1) throw invariant_violation("counts need n >= 2 and p >= 1");
  if (static_cast<int>(nonzeros_.size()) != p_)
    throw dimension_mismatch("nonzero list count != p");
  zeros_.resize(p_);
  for (int j = 0; j < p_; ++j) {
    auto& nz = nonzeros_[j];
    std::sort(nz.begin(), nz.end());
    int prev = -1;
    for (const auto& [i, y] : nz) {
      if (i < 0 || i >= n_) throw invariant_violation("spot index out of range in counts");
      if (i == prev) throw invariant_violation("duplicate (spot, gene) count entry");
      if (y < 0) throw invariant_violation("negative count at spot " + std::to_string(i) +
                                           ", gene " + std::to_string(j));
      prev = i;
    }
    // explicit zeros in the input are dropped from the nonzero list
    nz.erase(std::remove_if(nz.begin(), nz.end(), [](const auto& e) { return e.second == 0; }),
             nz.end());
    auto& zs = zeros_[j];
    zs.reserve(n_ - nz.size());
    std::size_t k = 0;
    for (int i = 0; i < n_; ++i) {
      if (k < nz.size() && nz[k].first == i) {
        ++k;
      } else {
        zs.push_back(i);
      }
    }
    zero_count_ += static_cast<std::int64_t>(zs.size());
  }
}

CountMatrix CountMatrix::from_dense(const Eigen::MatrixXi& dense) {
  const int n = static_cast<int>(dense.rows());
  const int p = static_cast<int>(dense.cols());
  std::vector<std::vector<std::pair<int, long>>> nz(p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i)
      if (dense(i, j) != 0) nz[j].emplace_back(i, dense(i, j));
  return CountMatrix(n, p, nz);
}

long CountMatrix::at(int spot, int gene) const {
  const auto& nz = nonzeros_[gene];
  auto it = std::lower_bound(nz.begin(), nz.end(), std::make_pair(spot, 0L),
                             [](const auto& a, const auto& b) { return a.first < b.first; });
  return (it != nz.end() && it->first == spot) ? it->second : 0;
}

Matrix CountMatrix::to_dense() const {
  Matrix y = Matrix::Zero(n_, p_);
  for (int j = 0; j < p_; ++j)
    for (const auto& [i, v] : nonzeros_[j]) y(i, j) = static_cast<double>(v);
  return y;
}

void Coordinates::validate() const {
  if (coords.cols() != 2) throw invariant_violation("coordinates must have exactly 2 columns");
  if (!coords.allFinite()) throw invariant_violation("non-finite coordinate entry");
  for (int d = 0; d < 2; ++d) {
    const double lo = coords.col(d).minCoeff();
    const double hi = coords.col(d).maxCoeff();
    if (lo == hi)
      throw invariant_violation("coordinate column " + std::to_string(d) + " has no spread");
  }
}

void CellCompositions::validate() const {
  for (int i = 0; i < w.rows(); ++i) {
    double sum = 0.0;
    for (int k = 0; k < w.cols(); ++k) {
      const double v = w(i, k);
      if (!(v >= 0.0 && v <= 1.0))
        throw invariant_violation("composition entry outside [0,1] at row " + std::to_string(i));
      sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-8)
      throw invariant_violation("composition row " + std::to_string(i) + " sums to " +
                                std::to_string(sum));
  }
}

namespace {
struct UnionFind {
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
  std::vector<int> parent;
};
}  // namespace

GeneNetwork::GeneNetwork(int p, std::vector<std::pair<int, int>> edges) : p_(p) {
  if (p_ < 1) throw invariant_violation("network needs at least one gene");
  for (auto& [j, l] : edges) {
    if (j == l) throw invariant_violation("self-loop at gene " + std::to_string(j));
    if (j < 0 || l < 0 || j >= p_ || l >= p_)
      throw invariant_violation("edge endpoint out of range");
    if (j > l) std::swap(j, l);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  degrees_.assign(p_, 0);
  adjacency_.resize(p_);
  UnionFind uf(p_);
  for (const auto& [j, l] : edges_) {
    ++degrees_[j];
    ++degrees_[l];
    adjacency_[j].push_back(l);
    adjacency_[l].push_back(j);
    uf.unite(j, l);
  }

  component_of_.assign(p_, -1);
  std::vector<int> root_to_comp(p_, -1);
  for (int j = 0; j < p_; ++j) {
    const int r = uf.find(j);
    if (root_to_comp[r] < 0) {
      root_to_comp[r] = static_cast<int>(components_.size());
      components_.emplace_back();
    }
    component_of_[j] = root_to_comp[r];
    components_[root_to_comp[r]].push_back(j);
  }
  // scan order already yields components sorted by smallest member
}

GeneNetwork GeneNetwork::from_adjacency(const Eigen::MatrixXi& a) {
  if (a.rows() != a.cols()) throw dimension_mismatch("adjacency must be square");
  const int p = static_cast<int>(a.rows());
  std::vector<std::pair<int, int>> edges;
  for (int j = 0; j < p; ++j) {
    if (a(j, j) != 0) throw invariant_violation("nonzero diagonal at gene " + std::to_string(j));
    for (int l = j + 1; l < p; ++l) {
      if (a(j, l) != a(l, j))
        throw invariant_violation("asymmetric adjacency at (" + std::to_string(j) + "," +
                                  std::to_string(l) + ")");
      if (a(j, l) != 0 && a(j, l) != 1)
        throw invariant_violation("adjacency entries must be 0/1");
      if (a(j, l) == 1) edges.emplace_back(j, l);
    }
  }
  return GeneNetwork(p, std::move(edges));
}

void HyperParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw invariant_violation(std::string(name) + " must be > 0");
  };
  positive(a_pi, "a_pi");
  positive(b_pi, "b_pi");
  positive(a_phi, "a_phi");
  positive(b_phi, "b_phi");
  positive(a_gamma, "a_gamma");
  positive(b_gamma, "b_gamma");
  positive(sigma0_sq, "sigma0_sq");
  positive(sigma_alpha_sq, "sigma_alpha_sq");
  positive(ridge_epsilon, "ridge_epsilon");
  positive(smooth_epsilon, "smooth_epsilon");
  if (!(lambda_l >= 0.0)) throw invariant_violation("lambda_l must be >= 0");
  if (!std::isnan(lambda_u) && !(lambda_l < lambda_u))
    throw invariant_violation("need lambda_l < lambda_u");
  if (!(bfdr_level > 0.0 && bfdr_level < 1.0))
    throw invariant_violation("bfdr_level must lie in (0,1)");
  if (!(consensus_fraction > 0.0 && consensus_fraction <= 1.0))
    throw invariant_violation("consensus_fraction must lie in (0,1]");
}

void ProposalScales::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw invariant_violation(std::string(name) + " must be > 0");
  };
  positive(tau_mu0_sq, "tau_mu0_sq");
  positive(tau_alpha_sq, "tau_alpha_sq");
  positive(tau_phi_sq, "tau_phi_sq");
  if (!std::isnan(tau_lambda_sq)) positive(tau_lambda_sq, "tau_lambda_sq");
  if (!(tau_gamma_sq > 0.0 && tau_gamma_sq < 1.0))
    throw invariant_violation("tau_gamma_sq must lie in (0,1)");
  if (!(target_accept > 0.0 && target_accept < 1.0))
    throw invariant_violation("target_accept must lie in (0,1)");
}

ValidatedDataset::ValidatedDataset(CountMatrix counts, Coordinates coords, CellCompositions comps,
                                   GeneNetwork net, Vector size_factors)
    : counts_(std::move(counts)),
      coords_(std::move(coords)),
      comps_(std::move(comps)),
      net_(std::move(net)),
      size_factors_(std::move(size_factors)) {
  coords_.validate();
  comps_.validate();
  if (coords_.n() != counts_.n())
    throw dimension_mismatch("coordinates rows (" + std::to_string(coords_.n()) +
                             ") != spot count (" + std::to_string(counts_.n()) + ")");
  if (comps_.n() != counts_.n())
    throw dimension_mismatch("composition rows (" + std::to_string(comps_.n()) +
                             ") != spot count (" + std::to_string(counts_.n()) + ")");
  if (net_.p() != counts_.p())
    throw dimension_mismatch("network node count (" + std::to_string(net_.p()) +
                             ") != gene count (" + std::to_string(counts_.p()) + ")");
  if (size_factors_.size() == 0) {
    size_factors_ = Vector::Ones(counts_.n());
  } else if (size_factors_.size() != counts_.n()) {
    throw dimension_mismatch("size factor length != spot count");
  }
  if ((size_factors_.array() <= 0.0).any())
    throw invariant_violation("size factors must be positive");
}

ValidatedDataset validate_dataset(CountMatrix counts, Coordinates coords, CellCompositions comps,
                                  GeneNetwork net, Vector size_factors) {
  return ValidatedDataset(std::move(counts), std::move(coords), std::move(comps), std::move(net),
                          std::move(size_factors));
}

}  // namespace svgene
