#pragma once

#include <array>
#include <set>
#include <vector>

#include "svgene/kernels.hpp"
#include "svgene/sampler.hpp"
#include "svgene/types.hpp"

namespace svgene {

// Posterior summaries for one kernel model from one chain.
struct KernelFit {
  Vector pip;        // 2p inclusion probabilities
  Vector beta_hat;   // 2p, conditional-on-inclusion means (0/0 := 0)
  Vector mu0_hat;    // p
  Vector alpha_hat;  // K
  double phi_hat = 0.0;
  Matrix r_hat;      // n x p posterior dropout means, zero where Y > 0
  double log_marginal = 0.0;  // plug-in log f(Y | M), filled by model_weights
};

KernelFit summarize_kernel(const ChainTrace& trace);

// plug-in posterior model probabilities over the five kernels; also fills
// each fit's log_marginal
std::array<double, 5> model_weights(std::array<KernelFit, 5>& fits, const ValidatedDataset& data,
                                    const std::array<DesignMatrix, 5>& designs);

struct CombinedPips {
  Vector combined;  // 2p
  Vector tilde;     // p, per-gene max over the two coordinates
};

CombinedPips combine_pips(const std::array<KernelFit, 5>& fits,
                          const std::array<double, 5>& weights);

struct BfdrSelection {
  std::vector<int> selected;  // ascending gene indices
  double cutoff = 1.0;        // realized c on the 1 - PIP scale
};

// largest prefix (genes sorted by 1 - PIP ascending) whose mean of (1 - PIP)
// stays within the level
BfdrSelection bfdr_select(const Vector& tilde_pip, double level);

// genes appearing in at least ceil(fraction * #chains) of the per-chain sets
std::vector<int> chain_consensus(const std::vector<std::vector<int>>& per_chain_selected,
                                 double fraction);

// Final fit-level aggregation across chains: PIPs and weights are averaged
// over chains, the selection is the chain consensus.
struct FitResult {
  std::array<double, 5> model_weights{};
  Vector combined_pip;  // 2p, chain-averaged
  Vector tilde_pip;     // p, chain-averaged
  std::vector<int> selected;
  double bfdr_cut = 1.0;  // prefix-rule cutoff on the chain-averaged tilde PIP
  std::vector<std::vector<int>> per_chain_selected;
};

}  // namespace svgene
