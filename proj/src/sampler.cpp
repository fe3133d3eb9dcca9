#include "svgene/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "svgene/nb.hpp"

namespace svgene {

void ChainConfig::validate() const {
  if (iterations < 1) throw invariant_violation("iterations must be >= 1");
  if (burn_in < 0 || burn_in >= iterations)
    throw invariant_violation("need 0 <= burn_in < iterations");
  if (thin < 1) throw invariant_violation("thin must be >= 1");
  if (adapt_window < 1) throw invariant_violation("adapt_window must be >= 1");
}

double log_mu(const ModelState& st, const DesignMatrix& design, const CellCompositions& comps,
              int i, int j) {
  const int p = st.p();
  const double b1 = threshold_coef(st.gamma(j), st.lambda, st.rho(j));
  const double b2 = threshold_coef(st.gamma(j + p), st.lambda, st.rho(j + p));
  double out = st.mu0(j) + b1 * design.values(i, 0) + b2 * design.values(i, 1);
  for (int k = 0; k < comps.K(); ++k) out += st.alpha(k) * comps.w(i, k);
  return out;
}

ProposalScales adapt_proposals(ProposalScales scales, const AcceptanceRates& rates, double target,
                               int event_index) {
  const double eta = std::min(0.5, 10.0 / std::max(1, event_index));
  auto bump = [&](double tau_sq, double rate, double lo, double hi) {
    const double next = std::exp(std::log(tau_sq) + eta * (rate - target));
    return std::clamp(next, lo, hi);
  };
  scales.tau_mu0_sq = bump(scales.tau_mu0_sq, rates.mu0, 1e-10, 1e6);
  scales.tau_alpha_sq = bump(scales.tau_alpha_sq, rates.alpha, 1e-10, 1e6);
  scales.tau_phi_sq = bump(scales.tau_phi_sq, rates.phi, 1e-10, 1e6);
  scales.tau_lambda_sq = bump(scales.tau_lambda_sq, rates.lambda, 1e-10, 1e6);
  // the pCN construction needs tau^2 in (0,1)
  scales.tau_gamma_sq = bump(scales.tau_gamma_sq, rates.gamma, 1e-6, 0.999);
  return scales;
}

Sampler::Sampler(const ValidatedDataset& data, const DesignMatrix& design,
                 const SignedLaplacian& sl, HyperParams hp, ProposalScales scales, ChainConfig cfg)
    : data_(data), design_(design), sl_(sl), hp_(hp), scales_(scales), cfg_(cfg) {
  cfg_.validate();
  hp_.validate();
  if (std::isnan(hp_.lambda_u))
    throw invariant_violation("lambda_u must be resolved before sampling");
  if (std::isnan(scales_.tau_lambda_sq))
    scales_.tau_lambda_sq = std::pow(0.1 * (hp_.lambda_u - hp_.lambda_l), 2);
  scales_.validate();

  n_ = data_.n();
  p_ = data_.p();
  K_ = data_.K();

  k1_ = design_.values.col(0).array();
  k2_ = design_.values.col(1).array();
  c_ = data_.size_factors().array();
  y_ = data_.counts().to_dense().array();

  ysum_ = y_.colwise().sum();
  yk1_.resize(p_);
  yk2_.resize(p_);
  for (int j = 0; j < p_; ++j) {
    yk1_(j) = (y_.col(j) * k1_).sum();
    yk2_(j) = (y_.col(j) * k2_).sum();
  }
  const ArrayXd yrow = y_.rowwise().sum();
  ywk_.resize(K_);
  for (int k = 0; k < K_; ++k) ywk_(k) = (data_.comps().w.col(k).array() * yrow).sum();

  std::map<long, long> hist;
  for (int j = 0; j < p_; ++j)
    for (const auto& [i, v] : data_.counts().nonzeros(j)) ++hist[v];
  y_hist_.assign(hist.begin(), hist.end());

  init_state();
}

void Sampler::init_state() {
  state_.mu0.resize(p_);
  for (int j = 0; j < p_; ++j) state_.mu0(j) = std::log1p(ysum_(j) / n_);
  state_.alpha = Vector::Zero(K_);
  state_.phi = 10.0;
  state_.gamma = sl_.tilde_beta();
  state_.lambda = 0.5 * (hp_.lambda_l + hp_.lambda_u);
  state_.sigma_gamma_sq = 1.0;
  state_.size_factors = data_.size_factors();
  state_.rho = Vector::Ones(2 * p_);
  state_.r.resize(p_);
  for (int j = 0; j < p_; ++j)
    state_.r[j].assign(data_.zero_spots(j).size(), 0);
  step_rho_weights_only();
  sync_caches();
}

// rho_j^(d) = min over the component of |gamma_l^(d)|^{-1/2}; |gamma| floored
// at 1e-12 so rho stays <= 1e6
void Sampler::step_rho_weights_only() {
  const auto& comps = data_.network().components();
  const int S = static_cast<int>(comps.size());
#pragma omp parallel for schedule(static)
  for (int s = 0; s < S; ++s) {
    for (int d = 0; d < 2; ++d) {
      double mx = 1e-12;
      for (int j : comps[s]) mx = std::max(mx, std::abs(state_.gamma(j + d * p_)));
      const double rho = 1.0 / std::sqrt(mx);
      for (int j : comps[s]) state_.rho(j + d * p_) = rho;
    }
  }
}

void Sampler::sync_caches() {
  b1_.resize(p_);
  b2_.resize(p_);
  for (int j = 0; j < p_; ++j) {
    b1_(j) = threshold_coef(state_.gamma(j), state_.lambda, state_.rho(j));
    b2_(j) = threshold_coef(state_.gamma(j + p_), state_.lambda, state_.rho(j + p_));
  }
  aw_ = (data_.comps().w * state_.alpha).array();
  mask_ = ArrayXXd::Ones(n_, p_);
  for (int j = 0; j < p_; ++j) {
    const auto& zs = data_.zero_spots(j);
    for (std::size_t idx = 0; idx < zs.size(); ++idx)
      if (state_.r[j][idx]) mask_(zs[idx], j) = 0.0;
  }
  n_active_ = static_cast<long long>(mask_.sum());

  eta_.resize(n_, p_);
  mu_.resize(n_, p_);
  d_.resize(n_, p_);
  scratch_.resize(n_, p_);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    eta_.col(j) = state_.mu0(j) + b1_(j) * k1_ + b2_(j) * k2_;
    mu_.col(j) = (eta_.col(j) + aw_).exp();
    d_.col(j) = (c_ * mu_.col(j) + state_.phi).log();
  }
  loglik_ = log_likelihood_scratch();
}

double Sampler::log_likelihood_scratch() const {
  // full recomputation over {(i,j): r_ij = 0}; the per-sweep bookkeeping is
  // checked against this in tests
  std::vector<double> partial(p_, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    double acc = 0.0;
    const double phi = state_.phi;
    for (int i = 0; i < n_; ++i) {
      if (mask_(i, j) == 0.0) continue;
      acc += nb_logpmf(y_(i, j), c_(i) * mu_(i, j), phi);
    }
    partial[j] = acc;
  }
  double total = 0.0;
  for (int j = 0; j < p_; ++j) total += partial[j];
  return total;
}

double Sampler::column_delta(int j, double new_mu0, double new_b1, double new_b2,
                             ArrayXd& eta_new, ArrayXd& d_new) const {
  const double phi = state_.phi;
  eta_new = new_mu0 + new_b1 * k1_ + new_b2 * k2_;
  d_new = (c_ * (eta_new + aw_).exp() + phi).log();
  double delta = (mask_.col(j) * (y_.col(j) + phi) * (d_.col(j) - d_new)).sum();
  delta += (new_mu0 - state_.mu0(j)) * ysum_(j) + (new_b1 - b1_(j)) * yk1_(j) +
           (new_b2 - b2_(j)) * yk2_(j);
  return delta;
}

void Sampler::commit_column(int j, const ArrayXd& eta_new, const ArrayXd& d_new) {
  eta_.col(j) = eta_new;
  mu_.col(j) = (eta_new + aw_).exp();
  d_.col(j) = d_new;
}

// ---------------------------------------------------------------------------
// step (a): Gibbs update of the dropout indicators on the zero entries
void Sampler::step_dropouts(int sweep) {
  const double phi = state_.phi;
  const double logphi = std::log(phi);
  const double ratio = hp_.b_pi / hp_.a_pi;
  std::vector<double> partial(p_, 0.0);
  std::vector<long> flips(p_, 0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    const auto& zs = data_.zero_spots(j);
    if (zs.empty()) continue;
    auto st = stream_for(cfg_.seed, sweep, StepTag::Dropout, j);
    double dll = 0.0;
    long df = 0;
    for (std::size_t idx = 0; idx < zs.size(); ++idx) {
      const int i = zs[idx];
      const double log_nb0 = phi * (logphi - d_(i, j));
      const double p1 = 1.0 / (1.0 + ratio * std::exp(log_nb0));
      const std::uint8_t rnew = st.uniform() < p1 ? 1 : 0;
      if (rnew != state_.r[j][idx]) {
        state_.r[j][idx] = rnew;
        mask_(i, j) = rnew ? 0.0 : 1.0;
        dll += rnew ? -log_nb0 : log_nb0;
        df += rnew ? -1 : 1;
      }
    }
    partial[j] = dll;
    flips[j] = df;
  }
  for (int j = 0; j < p_; ++j) {
    loglik_ += partial[j];
    n_active_ += flips[j];
  }
}

// step (b): per-gene random-walk MH on the baselines
void Sampler::step_mu0(int sweep) {
  const double tau = std::sqrt(scales_.tau_mu0_sq);
  std::vector<double> partial(p_, 0.0);
  std::vector<std::uint8_t> accepted(p_, 0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    auto st = stream_for(cfg_.seed, sweep, StepTag::Mu0, j);
    const double prop = state_.mu0(j) + tau * st.normal();
    ArrayXd eta_new, d_new;
    const double like = column_delta(j, prop, b1_(j), b2_(j), eta_new, d_new);
    const double prior =
        (state_.mu0(j) * state_.mu0(j) - prop * prop) / (2.0 * hp_.sigma0_sq);
    if (std::log(st.uniform()) < like + prior) {
      state_.mu0(j) = prop;
      commit_column(j, eta_new, d_new);
      partial[j] = like;
      accepted[j] = 1;
    }
  }
  for (int j = 0; j < p_; ++j) {
    loglik_ += partial[j];
    window_.mu0 += accepted[j];
    total_.mu0 += accepted[j];
  }
  window_.mu0_total += p_;
  total_.mu0_total += p_;
}

// step (c): sequential MH on the cell-type coefficients; the per-gene sums
// run in parallel and are reduced in gene order
void Sampler::step_alpha(int sweep) {
  const double tau = std::sqrt(scales_.tau_alpha_sq);
  auto st = stream_for(cfg_.seed, sweep, StepTag::Alpha, 0);
  const auto& w = data_.comps().w;
  std::vector<double> partial(p_);
  for (int k = 0; k < K_; ++k) {
    const double delta = tau * st.normal();
    const double prop = state_.alpha(k) + delta;
    const ArrayXd f = (delta * w.col(k).array()).exp();
    const ArrayXd cf = c_ * f;
    const double phi = state_.phi;
#pragma omp parallel for schedule(static)
    for (int j = 0; j < p_; ++j) {
      scratch_.col(j) = (cf * mu_.col(j) + phi).log();
      partial[j] = (mask_.col(j) * (y_.col(j) + phi) * (d_.col(j) - scratch_.col(j))).sum();
    }
    double like = 0.0;
    for (int j = 0; j < p_; ++j) like += partial[j];
    like += delta * ywk_(k);
    const double prior =
        (state_.alpha(k) * state_.alpha(k) - prop * prop) / (2.0 * hp_.sigma_alpha_sq);
    if (std::log(st.uniform()) < like + prior) {
      state_.alpha(k) = prop;
      aw_ = (w * state_.alpha).array();
      mu_.colwise() *= f;
      d_.swap(scratch_);
      loglik_ += like;
      ++window_.alpha;
      ++total_.alpha;
    }
    ++window_.alpha_total;
    ++total_.alpha_total;
  }
}

// step (d): MH on the dispersion with a zero-truncated normal proposal
void Sampler::step_phi(int sweep) {
  auto st = stream_for(cfg_.seed, sweep, StepTag::Phi, 0);
  const double tau = std::sqrt(scales_.tau_phi_sq);
  const double phi = state_.phi;
  const double inf = std::numeric_limits<double>::infinity();
  const double prop = st.trunc_normal(phi, tau, 0.0, inf);

  // y-dependent lgamma part over the (always active) nonzero entries,
  // grouped by distinct count value
  double term_y = 0.0;
  const double lg_phi = std::lgamma(phi);
  const double lg_prop = std::lgamma(prop);
  for (const auto& [y, cnt] : y_hist_)
    term_y += static_cast<double>(cnt) *
              (std::lgamma(y + prop) - lg_prop - std::lgamma(y + phi) + lg_phi);

  const double term_const =
      static_cast<double>(n_active_) * (prop * std::log(prop) - phi * std::log(phi));

  std::vector<double> partial(p_);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    scratch_.col(j) = (c_ * mu_.col(j) + prop).log();
    partial[j] = (mask_.col(j) *
                  ((phi + y_.col(j)) * d_.col(j) - (prop + y_.col(j)) * scratch_.col(j)))
                     .sum();
  }
  double term_d = 0.0;
  for (int j = 0; j < p_; ++j) term_d += partial[j];

  const double like = term_y + term_const + term_d;
  const double prior = (hp_.a_phi - 1.0) * (std::log(prop) - std::log(phi)) -
                       hp_.b_phi * (prop - phi);
  const double correction = rng::log_trunc_normal_pdf(phi, prop, tau, 0.0, inf) -
                            rng::log_trunc_normal_pdf(prop, phi, tau, 0.0, inf);
  if (std::log(st.uniform()) < like + prior + correction) {
    state_.phi = prop;
    d_.swap(scratch_);
    loglik_ += like;
    ++window_.phi;
    ++total_.phi;
  }
  ++window_.phi_total;
  ++total_.phi_total;
}

Vector Sampler::grad_gamma() const {
  Vector grad(2 * p_);
  const double phi = state_.phi;
  const double eps = hp_.smooth_epsilon;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    // the exact derivative of the smoothed log-likelihood: the mean is
    // evaluated with the smoothed coefficients, not the hard-thresholded ones
    const double g1 = state_.gamma(j);
    const double g2 = state_.gamma(j + p_);
    const double t1 = state_.lambda * state_.rho(j);
    const double t2 = state_.lambda * state_.rho(j + p_);
    const double bs1 = g1 * smooth_indicator(g1, t1, eps);
    const double bs2 = g2 * smooth_indicator(g2, t2, eps);
    const ArrayXd cmu =
        c_ * (state_.mu0(j) + bs1 * k1_ + bs2 * k2_ + aw_).exp();
    const ArrayXd resid = mask_.col(j) * phi * (y_.col(j) - cmu) / (cmu + phi);
    const double s1 = (resid * k1_).sum();
    const double s2 = (resid * k2_).sum();
    grad(j) = s1 * smooth_threshold_deriv(g1, t1, eps);
    grad(j + p_) = s2 * smooth_threshold_deriv(g2, t2, eps);
  }
  return grad;
}

// Gradient used for the pCNLD proposal drift. Taking the smoothing scale to
// its zero limit replaces the indicator-derivative factor by the plain
// inclusion indicator; the smoothed form diverges like 2 gamma / eps for
// coordinates sitting on the threshold boundary, and (L + eps I)^{-1} then
// amplifies the drift until every proposal is rejected and the block
// freezes. The MH correction is unchanged, so the chain's target is too.
Vector Sampler::drift_grad() const {
  Vector grad(2 * p_);
  const double phi = state_.phi;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    const ArrayXd cmu = c_ * mu_.col(j);
    const ArrayXd resid = mask_.col(j) * phi * (y_.col(j) - cmu) / (cmu + phi);
    const double s1 = (resid * k1_).sum();
    const double s2 = (resid * k2_).sum();
    grad(j) = b1_(j) != 0.0 ? s1 : 0.0;
    grad(j + p_) = b2_(j) != 0.0 ? s2 : 0.0;
  }
  return grad;
}

// step (e): pCN-Langevin proposal per Laplacian block; one joint accept per
// component (both coordinate copies), on the likelihood ratio alone
void Sampler::step_gamma(int sweep) {
  const Vector grad = drift_grad();
  const double tau_sq = scales_.tau_gamma_sq;
  const double contraction = std::sqrt(1.0 - tau_sq);
  const double tau = std::sqrt(tau_sq);
  const double sigma_sq = state_.sigma_gamma_sq;
  const double sigma = std::sqrt(sigma_sq);
  const int S = sl_.n_components();

  std::vector<double> partial(S, 0.0);
  std::vector<std::uint8_t> accepted(S, 0);
#pragma omp parallel for schedule(dynamic)
  for (int s = 0; s < S; ++s) {
    auto st = stream_for(cfg_.seed, sweep, StepTag::Gamma, s);
    const auto& genes = sl_.block(s, 0).genes;
    const int m = static_cast<int>(genes.size());

    // proposal per coordinate copy
    Matrix prop(m, 2);
    for (int d = 0; d < 2; ++d) {
      const auto& blk = sl_.block(s, d);
      Vector cur(m), g(m), z(m);
      for (int a = 0; a < m; ++a) {
        cur(a) = state_.gamma(genes[a] + d * p_);
        g(a) = grad(genes[a] + d * p_);
      }
      for (int a = 0; a < m; ++a) z(a) = st.normal();
      const Vector drift = sigma_sq * sl_.solve(blk, g);
      prop.col(d) =
          contraction * cur + (1.0 - contraction) * drift + sl_.sample_zero_mean(blk, z, tau * sigma);
    }

    // likelihood ratio over the component's genes; genes whose effective
    // coefficients are unchanged contribute exactly zero
    double like = 0.0;
    std::vector<ArrayXd> etas(m), ds(m);
    std::vector<std::uint8_t> changed(m, 0);
    for (int a = 0; a < m; ++a) {
      const int j = genes[a];
      const double nb1 = threshold_coef(prop(a, 0), state_.lambda, state_.rho(j));
      const double nb2 = threshold_coef(prop(a, 1), state_.lambda, state_.rho(j + p_));
      if (nb1 == b1_(j) && nb2 == b2_(j)) continue;
      changed[a] = 1;
      like += column_delta(j, state_.mu0(j), nb1, nb2, etas[a], ds[a]);
    }

    if (std::log(st.uniform()) < like) {
      for (int a = 0; a < m; ++a) {
        const int j = genes[a];
        state_.gamma(j) = prop(a, 0);
        state_.gamma(j + p_) = prop(a, 1);
        if (changed[a]) {
          b1_(j) = threshold_coef(prop(a, 0), state_.lambda, state_.rho(j));
          b2_(j) = threshold_coef(prop(a, 1), state_.lambda, state_.rho(j + p_));
          commit_column(j, etas[a], ds[a]);
        }
      }
      partial[s] = like;
      accepted[s] = 1;
    }
  }
  for (int s = 0; s < S; ++s) {
    loglik_ += partial[s];
    window_.gamma += accepted[s];
    total_.gamma += accepted[s];
  }
  window_.gamma_total += S;
  total_.gamma_total += S;
}

// step (f): refresh the adaptive weights and the thresholds they imply
void Sampler::step_rho() {
  step_rho_weights_only();
  std::vector<double> partial(p_, 0.0);
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    const double nb1 = threshold_coef(state_.gamma(j), state_.lambda, state_.rho(j));
    const double nb2 = threshold_coef(state_.gamma(j + p_), state_.lambda, state_.rho(j + p_));
    if (nb1 == b1_(j) && nb2 == b2_(j)) continue;
    ArrayXd eta_new, d_new;
    partial[j] = column_delta(j, state_.mu0(j), nb1, nb2, eta_new, d_new);
    b1_(j) = nb1;
    b2_(j) = nb2;
    commit_column(j, eta_new, d_new);
  }
  for (int j = 0; j < p_; ++j) loglik_ += partial[j];
}

// step (g): conjugate draw of the prior variance; shape a_gamma + p
void Sampler::step_sigma_gamma(int sweep) {
  auto st = stream_for(cfg_.seed, sweep, StepTag::SigmaGamma, 0);
  const double quad = sl_.quad_form(state_.gamma);
  const double shape = hp_.a_gamma + p_;
  const double rate = hp_.b_gamma + 0.5 * quad;
  state_.sigma_gamma_sq = 1.0 / st.gamma(shape, 1.0 / rate);
}

// step (h): MH on the threshold with an interval-truncated normal proposal
void Sampler::step_lambda(int sweep) {
  auto st = stream_for(cfg_.seed, sweep, StepTag::Lambda, 0);
  const double tau = std::sqrt(scales_.tau_lambda_sq);
  const double cur = state_.lambda;
  const double prop = st.trunc_normal(cur, tau, hp_.lambda_l, hp_.lambda_u);

  std::vector<int> flipped;
  for (int j = 0; j < p_; ++j) {
    const double nb1 = threshold_coef(state_.gamma(j), prop, state_.rho(j));
    const double nb2 = threshold_coef(state_.gamma(j + p_), prop, state_.rho(j + p_));
    if (nb1 != b1_(j) || nb2 != b2_(j)) flipped.push_back(j);
  }

  const int nf = static_cast<int>(flipped.size());
  std::vector<double> partial(nf, 0.0);
  std::vector<ArrayXd> etas(nf), ds(nf);
#pragma omp parallel for schedule(static)
  for (int a = 0; a < nf; ++a) {
    const int j = flipped[a];
    const double nb1 = threshold_coef(state_.gamma(j), prop, state_.rho(j));
    const double nb2 = threshold_coef(state_.gamma(j + p_), prop, state_.rho(j + p_));
    partial[a] = column_delta(j, state_.mu0(j), nb1, nb2, etas[a], ds[a]);
  }
  double like = 0.0;
  for (int a = 0; a < nf; ++a) like += partial[a];

  const double correction =
      rng::log_trunc_normal_pdf(cur, prop, tau, hp_.lambda_l, hp_.lambda_u) -
      rng::log_trunc_normal_pdf(prop, cur, tau, hp_.lambda_l, hp_.lambda_u);
  if (std::log(st.uniform()) < like + correction) {
    state_.lambda = prop;
    for (int a = 0; a < nf; ++a) {
      const int j = flipped[a];
      b1_(j) = threshold_coef(state_.gamma(j), prop, state_.rho(j));
      b2_(j) = threshold_coef(state_.gamma(j + p_), prop, state_.rho(j + p_));
      commit_column(j, etas[a], ds[a]);
    }
    loglik_ += like;
    ++window_.lambda;
    ++total_.lambda;
  }
  ++window_.lambda_total;
  ++total_.lambda_total;
}

void Sampler::end_of_sweep_refresh() {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < p_; ++j) {
    mu_.col(j) = (eta_.col(j) + aw_).exp();
    d_.col(j) = (c_ * mu_.col(j) + state_.phi).log();
  }
}

ChainTrace Sampler::run() {
  ChainTrace trace;
  const int m_samples = cfg_.retained();
  trace.samples.reserve(m_samples);
  Matrix dropout_sum = Matrix::Zero(n_, p_);

  int adapt_events = 0;
  window_.reset();
  total_.reset();

  for (int sweep = 1; sweep <= cfg_.iterations; ++sweep) {
    step_dropouts(sweep);
    step_mu0(sweep);
    step_alpha(sweep);
    step_phi(sweep);
    step_gamma(sweep);
    step_rho();
    step_sigma_gamma(sweep);
    step_lambda(sweep);
    end_of_sweep_refresh();

    if (sweep <= cfg_.burn_in && sweep % cfg_.adapt_window == 0) {
      ++adapt_events;
      AcceptanceRates r;
      r.mu0 = static_cast<double>(window_.mu0) / std::max(1L, window_.mu0_total);
      r.alpha = static_cast<double>(window_.alpha) / std::max(1L, window_.alpha_total);
      r.phi = static_cast<double>(window_.phi) / std::max(1L, window_.phi_total);
      r.gamma = static_cast<double>(window_.gamma) / std::max(1L, window_.gamma_total);
      r.lambda = static_cast<double>(window_.lambda) / std::max(1L, window_.lambda_total);
      scales_ = adapt_proposals(scales_, r, scales_.target_accept, adapt_events);
      window_.reset();
    }

    if (sweep > cfg_.burn_in && (sweep - cfg_.burn_in) % cfg_.thin == 0) {
      ChainSample s;
      s.gamma = state_.gamma;
      s.rho = state_.rho;
      s.t.resize(2 * p_);
      for (int t = 0; t < 2 * p_; ++t)
        s.t[t] = std::abs(state_.gamma(t)) > state_.lambda * state_.rho(t) ? 1 : 0;
      s.mu0 = state_.mu0;
      s.alpha = state_.alpha;
      s.phi = state_.phi;
      s.lambda = state_.lambda;
      s.sigma_gamma_sq = state_.sigma_gamma_sq;
      s.log_likelihood = loglik_;
      trace.samples.push_back(std::move(s));
      for (int j = 0; j < p_; ++j) {
        const auto& zs = data_.zero_spots(j);
        for (std::size_t idx = 0; idx < zs.size(); ++idx)
          if (state_.r[j][idx]) dropout_sum(zs[idx], j) += 1.0;
      }
    }
  }

  trace.dropout_mean = dropout_sum / std::max(1, m_samples);
  trace.acceptance.mu0 = static_cast<double>(total_.mu0) / std::max(1L, total_.mu0_total);
  trace.acceptance.alpha = static_cast<double>(total_.alpha) / std::max(1L, total_.alpha_total);
  trace.acceptance.phi = static_cast<double>(total_.phi) / std::max(1L, total_.phi_total);
  trace.acceptance.gamma = static_cast<double>(total_.gamma) / std::max(1L, total_.gamma_total);
  trace.acceptance.lambda = static_cast<double>(total_.lambda) / std::max(1L, total_.lambda_total);
  trace.tuned = scales_;
  return trace;
}

ChainTrace run_chain(const ValidatedDataset& data, const DesignMatrix& design,
                     const SignedLaplacian& sl, const HyperParams& hp,
                     const ProposalScales& scales, const ChainConfig& cfg) {
  Sampler sampler(data, design, sl, hp, scales, cfg);
  return sampler.run();
}

}  // namespace svgene
