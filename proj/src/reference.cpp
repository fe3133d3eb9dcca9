#include "svgene/reference.hpp"

#include <cmath>

#include "svgene/nb.hpp"

namespace svgene::ref {

namespace {

// dense dropout mask from the per-gene r lists
std::vector<std::vector<bool>> build_mask(const ValidatedDataset& data, const ModelState& st) {
  std::vector<std::vector<bool>> keep(data.p(), std::vector<bool>(data.n(), true));
  for (int j = 0; j < data.p(); ++j) {
    const auto& zs = data.zero_spots(j);
    for (std::size_t idx = 0; idx < zs.size(); ++idx)
      if (!st.r[j].empty() && st.r[j][idx]) keep[j][zs[idx]] = false;
  }
  return keep;
}

}  // namespace

double log_likelihood(const ValidatedDataset& data, const DesignMatrix& design,
                      const ModelState& st) {
  const int n = data.n();
  const int p = data.p();
  const auto keep = build_mask(data, st);
  double total = 0.0;
  for (int j = 0; j < p; ++j) {
    const double b1 = threshold_coef(st.gamma(j), st.lambda, st.rho(j));
    const double b2 = threshold_coef(st.gamma(j + p), st.lambda, st.rho(j + p));
    for (int i = 0; i < n; ++i) {
      if (!keep[j][i]) continue;
      double eta = st.mu0(j) + b1 * design.values(i, 0) + b2 * design.values(i, 1);
      for (int k = 0; k < data.K(); ++k) eta += st.alpha(k) * data.comps().w(i, k);
      const double mean = st.size_factors(i) * std::exp(eta);
      total += nb_logpmf(static_cast<double>(data.counts().at(i, j)), mean, st.phi);
    }
  }
  return total;
}

double log_likelihood_smooth(const ValidatedDataset& data, const DesignMatrix& design,
                             const ModelState& st, double smooth_eps) {
  const int n = data.n();
  const int p = data.p();
  const auto keep = build_mask(data, st);
  double total = 0.0;
  for (int j = 0; j < p; ++j) {
    const double g1 = st.gamma(j);
    const double g2 = st.gamma(j + p);
    const double b1 = g1 * smooth_indicator(g1, st.lambda * st.rho(j), smooth_eps);
    const double b2 = g2 * smooth_indicator(g2, st.lambda * st.rho(j + p), smooth_eps);
    for (int i = 0; i < n; ++i) {
      if (!keep[j][i]) continue;
      double eta = st.mu0(j) + b1 * design.values(i, 0) + b2 * design.values(i, 1);
      for (int k = 0; k < data.K(); ++k) eta += st.alpha(k) * data.comps().w(i, k);
      const double mean = st.size_factors(i) * std::exp(eta);
      total += nb_logpmf(static_cast<double>(data.counts().at(i, j)), mean, st.phi);
    }
  }
  return total;
}

Vector grad_gamma(const ValidatedDataset& data, const DesignMatrix& design, const ModelState& st,
                  double smooth_eps) {
  const int n = data.n();
  const int p = data.p();
  const auto keep = build_mask(data, st);
  Vector grad = Vector::Zero(2 * p);
  for (int j = 0; j < p; ++j) {
    const double g1 = st.gamma(j);
    const double g2 = st.gamma(j + p);
    const double b1 = g1 * smooth_indicator(g1, st.lambda * st.rho(j), smooth_eps);
    const double b2 = g2 * smooth_indicator(g2, st.lambda * st.rho(j + p), smooth_eps);
    double s1 = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      if (!keep[j][i]) continue;
      double eta = st.mu0(j) + b1 * design.values(i, 0) + b2 * design.values(i, 1);
      for (int k = 0; k < data.K(); ++k) eta += st.alpha(k) * data.comps().w(i, k);
      const double c = st.size_factors(i);
      const double mu = std::exp(eta);
      const double y = static_cast<double>(data.counts().at(i, j));
      const double score = st.phi * (y - c * mu) / (c * mu + st.phi);
      s1 += score * design.values(i, 0);
      s2 += score * design.values(i, 1);
    }
    grad(j) = s1 * smooth_threshold_deriv(g1, st.lambda * st.rho(j), smooth_eps);
    grad(j + p) = s2 * smooth_threshold_deriv(g2, st.lambda * st.rho(j + p), smooth_eps);
  }
  return grad;
}

double quad_form(const Matrix& m, const Vector& gamma) {
  return gamma.dot(m * gamma);
}

}  // namespace svgene::ref
