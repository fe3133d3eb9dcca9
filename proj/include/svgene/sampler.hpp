#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "svgene/kernels.hpp"
#include "svgene/nb.hpp"
#include "svgene/network.hpp"
#include "svgene/rng.hpp"
#include "svgene/types.hpp"

namespace svgene {

struct ChainConfig {
  int iterations = 2000;
  int burn_in = 1000;
  int thin = 10;
  std::uint64_t seed = 1;
  int adapt_window = 20;

  void validate() const;
  int retained() const { return (iterations - burn_in) / thin; }
};

// RNG stream tags: every (sweep, step, unit) triple owns an independent
// seed-derived stream, so the parallel work partition never changes results.
enum class StepTag : std::uint64_t {
  Dropout = 1,
  Mu0 = 2,
  Alpha = 3,
  Phi = 4,
  Gamma = 5,
  SigmaGamma = 6,
  Lambda = 7,
};

inline rng::Stream stream_for(std::uint64_t seed, int sweep, StepTag tag, int unit) {
  return rng::Stream(seed, static_cast<std::uint64_t>(sweep), static_cast<std::uint64_t>(tag),
                     static_cast<std::uint64_t>(unit));
}

struct AcceptanceRates {
  double mu0 = 0.0, alpha = 0.0, phi = 0.0, gamma = 0.0, lambda = 0.0;
};

struct ChainSample {
  Vector gamma;                   // 2p
  std::vector<std::uint8_t> t;    // 2p hard-threshold indicators
  Vector rho;                     // 2p adaptive weights
  Vector mu0;                     // p
  Vector alpha;                   // K
  double phi = 0.0;
  double lambda = 0.0;
  double sigma_gamma_sq = 0.0;
  double log_likelihood = 0.0;
};

struct ChainTrace {
  std::vector<ChainSample> samples;
  Matrix dropout_mean;  // n x p posterior mean of r, zero wherever Y > 0
  AcceptanceRates acceptance;
  ProposalScales tuned;  // scales after burn-in adaptation
};

// log mu_ij under the current state (with the hard threshold applied)
double log_mu(const ModelState& st, const DesignMatrix& design, const CellCompositions& comps,
              int i, int j);

// Robbins-Monro update of the proposal log-variances toward the target
// acceptance rate; eta_t = min(0.5, 10/t) with t the adaptation event index.
ProposalScales adapt_proposals(ProposalScales scales, const AcceptanceRates& window_rates,
                               double target, int event_index);

// One MCMC chain for a single kernel model. Steps (a)-(h) run in printed
// order each sweep; per-gene and per-block loops run under OpenMP with
// deterministic per-unit RNG streams.
class Sampler {
 public:
  Sampler(const ValidatedDataset& data, const DesignMatrix& design, const SignedLaplacian& sl,
          HyperParams hp, ProposalScales scales, ChainConfig cfg);

  ChainTrace run();

  // individual steps, exposed for oracle tests; the sweep index selects the
  // RNG streams
  void step_dropouts(int sweep);
  void step_mu0(int sweep);
  void step_alpha(int sweep);
  void step_phi(int sweep);
  void step_gamma(int sweep);
  void step_rho();
  void step_sigma_gamma(int sweep);
  void step_lambda(int sweep);

  // gradient of the smoothed log-likelihood wrt gamma, length 2p
  Vector grad_gamma() const;

  // zero-smoothing-limit gradient driving the pCNLD proposal mean
  Vector drift_grad() const;

  const ModelState& state() const { return state_; }
  ModelState& state() { return state_; }

  // re-derive every cache (and the incremental log-likelihood) from state_;
  // required after external mutation of the state in tests
  void sync_caches();

  double log_likelihood() const { return loglik_; }
  double log_likelihood_scratch() const;

  // effective thresholded coefficients for gene j
  double beta_eff(int j, int dim) const { return dim == 0 ? b1_(j) : b2_(j); }

  const HyperParams& hyper() const { return hp_; }
  const ProposalScales& scales() const { return scales_; }
  ProposalScales& scales() { return scales_; }

  // acceptance counters for the current window (consumed by adaptation)
  struct Counters {
    long mu0 = 0, mu0_total = 0;
    long alpha = 0, alpha_total = 0;
    long phi = 0, phi_total = 0;
    long gamma = 0, gamma_total = 0;
    long lambda = 0, lambda_total = 0;
    void reset() { *this = Counters{}; }
  };
  const Counters& window_counters() const { return window_; }

 private:
  using ArrayXd = Eigen::ArrayXd;
  using ArrayXXd = Eigen::ArrayXXd;

  void init_state();
  void step_rho_weights_only();
  // log-likelihood delta for replacing gene j's (mu0, b1, b2); fills the
  // proposed eta/d columns so an accept can commit without recomputation
  double column_delta(int j, double new_mu0, double new_b1, double new_b2, ArrayXd& eta_new,
                      ArrayXd& d_new) const;
  void commit_column(int j, const ArrayXd& eta_new, const ArrayXd& d_new);
  void end_of_sweep_refresh();

  const ValidatedDataset& data_;
  const DesignMatrix& design_;
  const SignedLaplacian& sl_;
  HyperParams hp_;
  ProposalScales scales_;
  ChainConfig cfg_;

  int n_ = 0, p_ = 0, K_ = 0;

  // static per-dataset quantities
  ArrayXd k1_, k2_, c_;        // n
  ArrayXXd y_;                 // n x p counts as doubles
  ArrayXd ysum_;               // p: sum_i y_ij
  ArrayXd yk1_, yk2_;          // p: sum_i y_ij K(x_id)
  Vector ywk_;                 // K: sum_ij y_ij w_ik
  std::vector<std::pair<long, long>> y_hist_;  // distinct (y, multiplicity) over nonzeros

  // state and caches
  ModelState state_;
  ArrayXd b1_, b2_;            // p, thresholded betas
  ArrayXd aw_;                 // n, sum_k alpha_k w_ik
  ArrayXXd mask_;              // n x p, 1 - r as doubles
  ArrayXXd eta_;               // n x p, mu0 + b1 K1 + b2 K2 (aw excluded)
  ArrayXXd mu_;                // n x p, exp(eta + aw)
  ArrayXXd d_;                 // n x p, log(c mu + phi)
  ArrayXXd scratch_;           // n x p proposal workspace
  double loglik_ = 0.0;
  long long n_active_ = 0;     // count of mask = 1 entries

  Counters window_;
  Counters total_;
  friend struct SamplerProbe;
};

ChainTrace run_chain(const ValidatedDataset& data, const DesignMatrix& design,
                     const SignedLaplacian& sl, const HyperParams& hp,
                     const ProposalScales& scales, const ChainConfig& cfg);

}  // namespace svgene
