#include "svgene/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "svgene/kernels.hpp"

namespace svgene::sim {

void ScenarioConfig::validate() const {
  if (grid_rows < 1 || grid_cols < 1) throw invariant_violation("grid dims must be >= 1");
  if (subnet_count * subnet_size != p)
    throw invariant_violation("need subnet_count * subnet_size == p");
  if (sv_subnets < 0 || sv_subnets > subnet_count)
    throw invariant_violation("sv_subnets must lie in [0, subnet_count]");
  if (!(dropout >= 0.0 && dropout <= 1.0)) throw invariant_violation("dropout must lie in [0,1]");
  if (!(phi > 0.0)) throw invariant_violation("phi must be > 0");
  for (const auto& conc : region_concentrations) {
    if (static_cast<int>(conc.size()) != K)
      throw invariant_violation("concentration length != K");
    for (double a : conc)
      if (!(a > 0.0)) throw invariant_violation("Dirichlet concentrations must be > 0");
  }
}

Spots make_spots(int rows, int cols, int n_regions) {
  if (rows < 1 || cols < 1) throw invariant_violation("grid dims must be >= 1");
  const int n = rows * cols;
  Matrix coords(n, 2);
  std::vector<int> region(n);
  for (int r = 0; r < rows; ++r) {
    // horizontal bands of near-equal spot counts, top to bottom
    const int band = std::min(n_regions - 1, r * n_regions / rows);
    for (int c = 0; c < cols; ++c) {
      const int i = r * cols + c;
      coords(i, 0) = static_cast<double>(c);
      coords(i, 1) = static_cast<double>(r);
      region[i] = band + 1;
    }
  }
  return Spots{Coordinates{std::move(coords)}, std::move(region)};
}

void check_region_cover(const std::vector<int>& labels, int n_spots, int n_regions) {
  if (static_cast<int>(labels.size()) != n_spots)
    throw region_coverage("label count != spot count");
  for (int l : labels)
    if (l < 1 || l > n_regions)
      throw region_coverage("label " + std::to_string(l) + " outside 1.." +
                            std::to_string(n_regions));
}

CellCompositions sample_compositions(const std::vector<int>& labels,
                                     const std::vector<std::vector<double>>& concentrations,
                                     std::uint64_t seed) {
  const int n = static_cast<int>(labels.size());
  const int n_regions = static_cast<int>(concentrations.size());
  check_region_cover(labels, n, n_regions);
  const int K = static_cast<int>(concentrations.front().size());
  Matrix w(n, K);
  for (int i = 0; i < n; ++i) {
    rng::Stream st(seed, 0xC0117, 1, static_cast<std::uint64_t>(i));
    const auto row = st.dirichlet(concentrations[labels[i] - 1]);
    for (int k = 0; k < K; ++k) w(i, k) = row[k];
  }
  CellCompositions out{std::move(w)};
  out.validate();
  return out;
}

GeneNetwork make_network(NetworkKind kind, int subnet_count, int subnet_size, std::uint64_t seed) {
  if (subnet_size < 2) throw invariant_violation("subnet_size must be >= 2");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<std::size_t>(subnet_count) * (subnet_size - 1));
  for (int s = 0; s < subnet_count; ++s) {
    const int base = s * subnet_size;
    if (kind == NetworkKind::Star) {
      for (int v = 1; v < subnet_size; ++v) edges.emplace_back(base, base + v);
    } else {
      // preferential attachment, one edge per arriving node, 2-node seed
      rng::Stream st(seed, 0xBA, 2, static_cast<std::uint64_t>(s));
      std::vector<int> endpoints;  // node repeated once per unit of degree
      endpoints.reserve(2 * (subnet_size - 1));
      edges.emplace_back(base, base + 1);
      endpoints.push_back(0);
      endpoints.push_back(1);
      for (int v = 2; v < subnet_size; ++v) {
        const auto pick = static_cast<std::size_t>(st.uniform() * endpoints.size());
        const int target = endpoints[std::min(pick, endpoints.size() - 1)];
        edges.emplace_back(base + std::min(v, target), base + std::max(v, target));
        endpoints.push_back(target);
        endpoints.push_back(v);
      }
    }
  }
  return GeneNetwork(subnet_count * subnet_size, std::move(edges));
}

std::vector<int> find_hubs(const GeneNetwork& net, int subnet_count, int subnet_size) {
  std::vector<int> hubs(subnet_count);
  for (int s = 0; s < subnet_count; ++s) {
    const int base = s * subnet_size;
    int best = base;
    for (int v = 1; v < subnet_size; ++v)
      if (net.degrees()[base + v] > net.degrees()[best]) best = base + v;
    hubs[s] = best;
  }
  return hubs;
}

namespace {

struct PatternMagnitudes {
  double target_1, target_2;   // star targets, signed as printed
  double regular_lo, regular_hi;  // scale-free regular genes, base range
};

PatternMagnitudes magnitudes_for(Pattern pattern) {
  switch (pattern) {
    case Pattern::Linear:
      return {0.15, -0.25, 0.1, 0.2};
    case Pattern::Periodic:
      return {0.2, -0.3, 0.2, 0.3};
    case Pattern::Exponential:
      return {0.4, -0.5, 0.4, 0.5};
  }
  return {0, 0, 0, 0};
}

}  // namespace

Vector assign_effects(const GeneNetwork& net, Pattern pattern, NetworkKind kind, int subnet_count,
                      int subnet_size, int sv_subnets, std::uint64_t seed) {
  const int p = net.p();
  Vector beta = Vector::Zero(2 * p);
  const auto mag = magnitudes_for(pattern);
  const auto hubs = find_hubs(net, subnet_count, subnet_size);

  for (int s = 0; s < sv_subnets; ++s) {
    const int base = s * subnet_size;
    rng::Stream st(seed, 0xEFFEC7, 3, static_cast<std::uint64_t>(s));
    if (kind == NetworkKind::Star) {
      for (int v = 0; v < subnet_size; ++v) {
        const int j = base + v;
        if (j == hubs[s]) {
          beta(j) = 1.0;
          beta(j + p) = -1.0;
        } else {
          beta(j) = mag.target_1;
          beta(j + p) = mag.target_2;
        }
      }
    } else {
      // random half of the regular genes carries the doubled signal
      std::vector<int> regulars;
      for (int v = 0; v < subnet_size; ++v)
        if (base + v != hubs[s]) regulars.push_back(base + v);
      std::vector<int> order(regulars.size());
      for (std::size_t a = 0; a < order.size(); ++a) order[a] = static_cast<int>(a);
      for (std::size_t a = order.size(); a > 1; --a) {
        const auto pick = static_cast<std::size_t>(st.uniform() * a);
        std::swap(order[a - 1], order[std::min(pick, a - 1)]);
      }
      std::vector<double> strength(regulars.size(), 1.0);
      for (std::size_t a = 0; a < order.size() / 2; ++a) strength[order[a]] = 2.0;

      for (int d = 0; d < 2; ++d) {
        const double m = st.uniform(1.0, 1.2);
        beta(hubs[s] + d * p) = st.uniform() < 0.5 ? m : -m;
      }
      for (std::size_t a = 0; a < regulars.size(); ++a) {
        for (int d = 0; d < 2; ++d) {
          const double m = strength[a] * st.uniform(mag.regular_lo, mag.regular_hi);
          beta(regulars[a] + d * p) = st.uniform() < 0.5 ? m : -m;
        }
      }
    }
  }
  return beta;
}

double pattern_value(Pattern pattern, double x) {
  switch (pattern) {
    case Pattern::Linear:
      return x;
    case Pattern::Exponential:
      return std::exp(-x / 2.0);
    case Pattern::Periodic:
      return std::cos(2.0 * 3.14159265358979323846 * x);
  }
  return 0.0;
}

CountMatrix generate_counts(const Coordinates& coords, const CellCompositions& comps,
                            const Vector& beta_true, Pattern pattern, double phi, double dropout,
                            double mu0_mean, double mu0_sd, double alpha_mean, double alpha_sd,
                            std::uint64_t seed) {
  const int n = coords.n();
  const int K = comps.K();
  const int p = static_cast<int>(beta_true.size()) / 2;
  const StdCoordinates std_coords = standardize(coords);

  rng::Stream param_stream(seed, 0x9E4, 4, 0);
  Vector mu0(p), alpha(K);
  for (int j = 0; j < p; ++j) mu0(j) = param_stream.normal(mu0_mean, mu0_sd);
  for (int k = 0; k < K; ++k) alpha(k) = param_stream.normal(alpha_mean, alpha_sd);

  Vector aw = comps.w * alpha;
  Matrix kx(n, 2);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < 2; ++d) kx(i, d) = pattern_value(pattern, std_coords.coords(i, d));

  std::vector<std::vector<std::pair<int, long>>> nz(p);
  for (int j = 0; j < p; ++j) {
    rng::Stream st(seed, 0xC0147, 5, static_cast<std::uint64_t>(j));
    for (int i = 0; i < n; ++i) {
      const bool dropped = st.uniform() < dropout;
      const double log_mu = mu0(j) + beta_true(j) * kx(i, 0) + beta_true(j + p) * kx(i, 1) + aw(i);
      const double mu = std::exp(log_mu);
      if (mu > 1e12)
        throw overflow_guard("mu_ij = " + std::to_string(mu) + " at spot " + std::to_string(i) +
                             ", gene " + std::to_string(j) + " (mu0 = " + std::to_string(mu0(j)) +
                             ")");
      if (dropped) continue;
      const long y = st.neg_binomial(mu, phi);
      if (y > 0) nz[j].emplace_back(i, y);
    }
  }
  return CountMatrix(n, p, nz);
}

Generated generate_scenario(const ScenarioConfig& cfg) {
  cfg.validate();
  const int n_regions = static_cast<int>(cfg.region_concentrations.size());
  Spots spots = make_spots(cfg.grid_rows, cfg.grid_cols, n_regions);
  CellCompositions comps =
      sample_compositions(spots.region, cfg.region_concentrations, cfg.seed);
  GeneNetwork net = make_network(cfg.network_kind, cfg.subnet_count, cfg.subnet_size, cfg.seed);
  Vector beta = assign_effects(net, cfg.pattern, cfg.network_kind, cfg.subnet_count,
                               cfg.subnet_size, cfg.sv_subnets, cfg.seed);
  CountMatrix counts =
      generate_counts(spots.coords, comps, beta, cfg.pattern, cfg.phi, cfg.dropout, cfg.mu0_mean,
                      cfg.mu0_sd, cfg.alpha_mean, cfg.alpha_sd, cfg.seed);

  GroundTruth truth;
  truth.beta_true = beta;
  const int p = net.p();
  for (int j = 0; j < p; ++j)
    if (beta(j) != 0.0 || beta(j + p) != 0.0) truth.sv_genes.push_back(j);

  return Generated{std::move(counts), std::move(spots.coords), std::move(comps), std::move(net),
                   std::move(truth)};
}

Generated generate_m1(std::uint64_t seed) {
  constexpr int rows = 30, cols = 20, K = 6, p = 5000;
  constexpr int subnet_count = 100, subnet_size = 50, sv_subnets = 7;
  constexpr double phi = 100.0, dropout = 0.6;
  constexpr double beta1 = 1.8, beta2 = 0.8;

  const std::vector<std::vector<double>> concentrations = {
      {1, 1, 1, 1, 1, 1}, {1, 3, 5, 7, 9, 11}, {16, 14, 12, 10, 8, 6}, {1, 4, 4, 4, 4, 1}};
  Spots spots = make_spots(rows, cols, 4);
  CellCompositions comps = sample_compositions(spots.region, concentrations, seed);
  GeneNetwork net = make_network(NetworkKind::Star, subnet_count, subnet_size, seed);
  const StdCoordinates std_coords = standardize(spots.coords);
  const int n = spots.coords.n();

  // eta_jk baselines: eta_j1 everywhere, overridden for 150 differentially
  // expressed genes per cell type k >= 2
  rng::Stream param_stream(seed, 0x9E4, 4, 1);
  Matrix eta(p, K);
  for (int j = 0; j < p; ++j) eta.row(j).setConstant(param_stream.normal(2.0, 0.2));
  const double de_mean[] = {3.0, 2.0, 4.0, 3.0, 4.0};
  for (int k = 1; k < K; ++k) {
    std::set<int> chosen;
    rng::Stream de_stream(seed, 0xDE, 6, static_cast<std::uint64_t>(k));
    while (static_cast<int>(chosen.size()) < 150)
      chosen.insert(static_cast<int>(de_stream.uniform() * p));
    for (int j : chosen) eta(j, k) = de_stream.normal(de_mean[k - 1], 0.2);
  }

  // sv (gene, cell type) pairs: window k covers genes 50(k-1) .. 50(k+1)-1,
  // so the union over k = 1..6 is exactly the first 350 genes
  Eigen::MatrixXd b1 = Eigen::MatrixXd::Zero(p, K);
  Eigen::MatrixXd b2 = Eigen::MatrixXd::Zero(p, K);
  for (int k = 1; k <= K; ++k) {
    const int lo = subnet_size * (k - 1);
    const int hi = std::min(p, subnet_size * (k + 1));
    for (int j = lo; j < hi; ++j) {
      b1(j, k - 1) = beta1;
      b2(j, k - 1) = beta2;
    }
  }

  Matrix kx(n, 2);
  for (int i = 0; i < n; ++i)
    for (int d = 0; d < 2; ++d) kx(i, d) = pattern_value(Pattern::Linear, std_coords.coords(i, d));

  std::vector<std::vector<std::pair<int, long>>> nz(p);
  for (int j = 0; j < p; ++j) {
    rng::Stream st(seed, 0xC0147, 5, static_cast<std::uint64_t>(j));
    for (int i = 0; i < n; ++i) {
      const bool dropped = st.uniform() < dropout;
      double log_mu = 0.0;
      for (int k = 0; k < K; ++k) {
        const double mu_k = eta(j, k) + b1(j, k) * kx(i, 0) + b2(j, k) * kx(i, 1);
        log_mu += mu_k * comps.w(i, k);
      }
      if (dropped) continue;
      const long y = st.neg_binomial(std::exp(log_mu), phi);
      if (y > 0) nz[j].emplace_back(i, y);
    }
  }

  GroundTruth truth;
  truth.beta_true = Vector::Zero(2 * p);
  for (int j = 0; j < subnet_size * sv_subnets; ++j) {
    truth.sv_genes.push_back(j);
    truth.beta_true(j) = beta1;
    truth.beta_true(j + p) = beta2;
  }

  return Generated{CountMatrix(n, p, nz), std::move(spots.coords), std::move(comps),
                   std::move(net), std::move(truth)};
}

Metrics classification_metrics(const std::vector<int>& selected, const std::vector<int>& truth) {
  std::set<int> truth_set(truth.begin(), truth.end());
  long tp = 0;
  for (int g : selected)
    if (truth_set.count(g)) ++tp;
  const long fp = static_cast<long>(selected.size()) - tp;
  const long fn = static_cast<long>(truth.size()) - tp;

  Metrics m;
  m.recall = (tp + fn) > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
  m.precision = (tp + fp) > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
  m.f1 = (m.precision + m.recall) > 0.0
             ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
             : 0.0;
  return m;
}

}  // namespace svgene::sim
