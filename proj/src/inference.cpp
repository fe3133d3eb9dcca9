#include "svgene/inference.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "svgene/nb.hpp"

namespace svgene {

KernelFit summarize_kernel(const ChainTrace& trace) {
  if (trace.samples.empty()) throw invariant_violation("cannot summarize an empty trace");
  const auto& first = trace.samples.front();
  const int two_p = static_cast<int>(first.gamma.size());
  const int p = two_p / 2;
  const int K = static_cast<int>(first.alpha.size());
  const int M = static_cast<int>(trace.samples.size());

  KernelFit fit;
  fit.pip = Vector::Zero(two_p);
  fit.beta_hat = Vector::Zero(two_p);
  fit.mu0_hat = Vector::Zero(p);
  fit.alpha_hat = Vector::Zero(K);
  Vector gamma_t_sum = Vector::Zero(two_p);

  for (const auto& s : trace.samples) {
    for (int t = 0; t < two_p; ++t) {
      if (s.t[t]) {
        fit.pip(t) += 1.0;
        gamma_t_sum(t) += s.gamma(t);
      }
    }
    fit.mu0_hat += s.mu0;
    fit.alpha_hat += s.alpha;
    fit.phi_hat += s.phi;
  }
  for (int t = 0; t < two_p; ++t)
    fit.beta_hat(t) = fit.pip(t) > 0.0 ? gamma_t_sum(t) / fit.pip(t) : 0.0;
  fit.pip /= M;
  fit.mu0_hat /= M;
  fit.alpha_hat /= M;
  fit.phi_hat /= M;
  fit.r_hat = trace.dropout_mean;
  return fit;
}

namespace {

// log f(Y | M) at the plug-in estimates: per entry,
// (1 - R) NB(y | c mu, phi) + R I(y = 0)
double plugin_log_likelihood(const KernelFit& fit, const ValidatedDataset& data,
                             const DesignMatrix& design) {
  const int n = data.n();
  const int p = data.p();
  const int K = data.K();
  Vector aw = Vector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < K; ++k) aw(i) += fit.alpha_hat(k) * data.comps().w(i, k);

  double total = 0.0;
  for (int j = 0; j < p; ++j) {
    for (int i = 0; i < n; ++i) {
      const double eta = fit.mu0_hat(j) + fit.beta_hat(j) * design.values(i, 0) +
                         fit.beta_hat(j + p) * design.values(i, 1) + aw(i);
      const double mean = data.size_factors()(i) * std::exp(eta);
      const double y = static_cast<double>(data.counts().at(i, j));
      const double lognb = nb_logpmf(y, mean, fit.phi_hat);
      const double r = fit.r_hat(i, j);
      if (r <= 0.0) {
        total += lognb;
      } else if (y == 0.0) {
        total += std::log(r + (1.0 - r) * std::exp(lognb));
      } else {
        // r is zero wherever y > 0 by construction; guard anyway
        total += std::log1p(-r) + lognb;
      }
    }
  }
  return total;
}

}  // namespace

std::array<double, 5> model_weights(std::array<KernelFit, 5>& fits, const ValidatedDataset& data,
                                    const std::array<DesignMatrix, 5>& designs) {
  std::array<double, 5> logp{};
  for (int s = 0; s < 5; ++s) {
    fits[s].log_marginal = plugin_log_likelihood(fits[s], data, designs[s]);
    logp[s] = fits[s].log_marginal + std::log(1.0 / 5.0);
  }
  const double mx = *std::max_element(logp.begin(), logp.end());
  double denom = 0.0;
  for (double& v : logp) {
    v = std::exp(v - mx);
    denom += v;
  }
  std::array<double, 5> w{};
  for (int s = 0; s < 5; ++s) w[s] = logp[s] / denom;
  return w;
}

CombinedPips combine_pips(const std::array<KernelFit, 5>& fits,
                          const std::array<double, 5>& weights) {
  const int two_p = static_cast<int>(fits[0].pip.size());
  const int p = two_p / 2;
  CombinedPips out;
  out.combined = Vector::Zero(two_p);
  for (int s = 0; s < 5; ++s) out.combined += weights[s] * fits[s].pip;
  out.tilde.resize(p);
  for (int j = 0; j < p; ++j) out.tilde(j) = std::max(out.combined(j), out.combined(j + p));
  return out;
}

BfdrSelection bfdr_select(const Vector& tilde_pip, double level) {
  if (!(level > 0.0 && level < 1.0)) throw invariant_violation("BFDR level must lie in (0,1)");
  const int p = static_cast<int>(tilde_pip.size());
  std::vector<int> order(p);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return 1.0 - tilde_pip(a) < 1.0 - tilde_pip(b);
  });

  // longest prefix whose running mean of (1 - PIP) stays within the level
  double running = 0.0;
  int best = 0;
  for (int k = 0; k < p; ++k) {
    running += 1.0 - tilde_pip(order[k]);
    if (running <= level * (k + 1)) best = k + 1;
  }
  BfdrSelection out;
  out.selected.assign(order.begin(), order.begin() + best);
  std::sort(out.selected.begin(), out.selected.end());
  out.cutoff = best < p ? 1.0 - tilde_pip(order[best]) : 1.0;
  return out;
}

std::vector<int> chain_consensus(const std::vector<std::vector<int>>& per_chain_selected,
                                 double fraction) {
  if (per_chain_selected.empty()) throw invariant_violation("consensus needs at least one chain");
  const int chains = static_cast<int>(per_chain_selected.size());
  // nudge below the product so ceil(0.8 * 5) is 4, not 5
  const int needed = static_cast<int>(std::ceil(fraction * chains - 1e-9));
  std::map<int, int> counts;
  for (const auto& sel : per_chain_selected)
    for (int g : sel) ++counts[g];
  std::vector<int> out;
  for (const auto& [gene, cnt] : counts)
    if (cnt >= std::max(1, needed)) out.push_back(gene);
  return out;
}

}  // namespace svgene
