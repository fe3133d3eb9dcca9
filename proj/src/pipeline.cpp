#include "svgene/pipeline.hpp"

#include <chrono>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace svgene {

std::uint64_t job_seed(std::uint64_t master, int kernel, int chain) {
  return rng::mix(rng::mix(master, 0x5eedULL + kernel), static_cast<std::uint64_t>(chain));
}

FitOutput run_fit(const ValidatedDataset& data, const FitOptions& opts) {
  if (opts.chains < 1) throw invariant_violation("need at least one chain");
  opts.chain.validate();

  FitOutput out;
  const StdCoordinates std_coords = standardize(data.coords());
  const ResolvedScales scales = resolve_scales(std_coords);
  out.kernels = make_kernel_family(scales);

  // per-kernel design, rough estimate, resolved threshold bound, Laplacian
  std::vector<SignedLaplacian> laplacians;
  laplacians.reserve(5);
  std::array<HyperParams, 5> hp;
  for (int s = 0; s < 5; ++s) {
    out.designs[s] = build_design(std_coords, out.kernels[s]);
    const Vector tb = rough_beta(data, out.designs[s]);
    laplacians.emplace_back(data.network(), tb, opts.hp.ridge_epsilon);
    hp[s] = opts.hp;
    if (std::isnan(hp[s].lambda_u)) {
      std::vector<double> absb(tb.size());
      for (int t = 0; t < tb.size(); ++t) absb[t] = std::abs(tb(t));
      const double q90 = quantile_type7(std::move(absb), 0.90);
      hp[s].lambda_u = std::max(q90, hp[s].lambda_l + 1e-6);
    }
    out.lambda_u[s] = hp[s].lambda_u;
  }

  const int chains = opts.chains;
  out.fits.resize(chains);
  out.jobs.resize(5 * static_cast<std::size_t>(chains));

#ifdef _OPENMP
  const int prev_threads = omp_get_max_threads();
  if (opts.threads > 0) omp_set_num_threads(opts.threads);
#endif

  const int n_jobs = 5 * chains;
#pragma omp parallel for schedule(dynamic)
  for (int job = 0; job < n_jobs; ++job) {
    const int s = job % 5;
    const int c = job / 5;
    ChainConfig cfg = opts.chain;
    cfg.seed = job_seed(opts.chain.seed, s, c);
    const auto start = std::chrono::steady_clock::now();
    ChainTrace trace = run_chain(data, out.designs[s], laplacians[s], hp[s], opts.scales, cfg);
    out.fits[c][s] = summarize_kernel(trace);
    JobInfo info;
    info.kernel = s;
    info.chain = c;
    info.seed = cfg.seed;
    info.acceptance = trace.acceptance;
    info.wall_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    out.jobs[job] = info;
  }

#ifdef _OPENMP
  if (opts.threads > 0) omp_set_num_threads(prev_threads);
#endif

  const int p = data.p();
  out.chain_weights.resize(chains);
  out.chain_combined.resize(chains);
  out.chain_tilde.resize(chains);
  out.result.combined_pip = Vector::Zero(2 * p);
  out.result.tilde_pip = Vector::Zero(p);
  out.result.model_weights = {};
  for (int c = 0; c < chains; ++c) {
    out.chain_weights[c] = model_weights(out.fits[c], data, out.designs);
    const CombinedPips cp = combine_pips(out.fits[c], out.chain_weights[c]);
    out.chain_combined[c] = cp.combined;
    out.chain_tilde[c] = cp.tilde;
    const BfdrSelection sel = bfdr_select(cp.tilde, opts.hp.bfdr_level);
    out.result.per_chain_selected.push_back(sel.selected);
    for (int s = 0; s < 5; ++s) out.result.model_weights[s] += out.chain_weights[c][s] / chains;
    out.result.combined_pip += cp.combined / chains;
    out.result.tilde_pip += cp.tilde / chains;
  }
  out.result.selected =
      chain_consensus(out.result.per_chain_selected, opts.hp.consensus_fraction);
  out.result.bfdr_cut = bfdr_select(out.result.tilde_pip, opts.hp.bfdr_level).cutoff;
  return out;
}

}  // namespace svgene
