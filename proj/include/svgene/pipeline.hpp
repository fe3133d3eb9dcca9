#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "svgene/inference.hpp"
#include "svgene/kernels.hpp"
#include "svgene/network.hpp"
#include "svgene/sampler.hpp"
#include "svgene/types.hpp"

namespace svgene {

struct FitOptions {
  int chains = 5;
  ChainConfig chain;
  HyperParams hp;
  ProposalScales scales;
  int threads = 0;  // 0 = runtime default
};

struct JobInfo {
  int kernel = 0;
  int chain = 0;
  std::uint64_t seed = 0;
  AcceptanceRates acceptance;
  double wall_ms = 0.0;
};

struct FitOutput {
  std::array<KernelSpec, 5> kernels;
  std::array<DesignMatrix, 5> designs;
  std::array<double, 5> lambda_u{};            // resolved per kernel
  std::vector<std::array<KernelFit, 5>> fits;  // [chain][kernel]
  std::vector<std::array<double, 5>> chain_weights;
  std::vector<Vector> chain_combined;  // [chain], length 2p
  std::vector<Vector> chain_tilde;     // [chain], length p
  FitResult result;
  std::vector<JobInfo> jobs;
};

// deterministic per-(kernel, chain) seed derivation from the master seed
std::uint64_t job_seed(std::uint64_t master, int kernel, int chain);

// the full procedure: five kernel models x `chains` chains, model averaging
// per chain, BFDR selection per chain, consensus across chains
FitOutput run_fit(const ValidatedDataset& data, const FitOptions& opts);

}  // namespace svgene
