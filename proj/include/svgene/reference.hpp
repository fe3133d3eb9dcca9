#pragma once

#include "svgene/kernels.hpp"
#include "svgene/types.hpp"

namespace svgene::ref {

// Straight-line serial implementations of the sampler's inner kernels, kept
// independent of the cached/parallel production path. Tests compare the two;
// the benchmark times them against each other.

// sum of log NB(Y_ij | c_i mu_ij, phi) over entries with r_ij = 0, with the
// hard-thresholded coefficients
double log_likelihood(const ValidatedDataset& data, const DesignMatrix& design,
                      const ModelState& st);

// same likelihood but with the smoothed inclusion indicator in the mean
// model; the analytic gradient below differentiates exactly this function
double log_likelihood_smooth(const ValidatedDataset& data, const DesignMatrix& design,
                             const ModelState& st, double smooth_eps);

// gradient of log_likelihood_smooth wrt gamma, length 2p
Vector grad_gamma(const ValidatedDataset& data, const DesignMatrix& design, const ModelState& st,
                  double smooth_eps);

// gamma' M gamma against an explicit dense matrix
double quad_form(const Matrix& m, const Vector& gamma);

}  // namespace svgene::ref
