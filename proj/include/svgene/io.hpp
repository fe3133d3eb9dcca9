#pragma once

#include <optional>
#include <string>
#include <vector>

#include "svgene/pipeline.hpp"
#include "svgene/simulate.hpp"
#include "svgene/types.hpp"

namespace svgene::io {

// dataset plus the IDs that align its files
struct NamedDataset {
  ValidatedDataset data;
  std::vector<std::string> spot_names;
  std::vector<std::string> gene_names;
  std::vector<std::string> cell_type_names;
  long duplicate_edges = 0;  // deduplicated with a warning in the manifest
};

struct DatasetPaths {
  std::string counts;  // dense TSV, or MatrixMarket .mtx with .rows/.cols sidecars
  std::string coords;
  std::string comps;
  std::string network;
};

NamedDataset load_dataset(const DatasetPaths& paths);

// writers used by `svgene simulate`; counts go out as MatrixMarket
// coordinate integer plus name sidecars
void write_counts_mtx(const std::string& path, const CountMatrix& counts,
                      const std::vector<std::string>& spot_names,
                      const std::vector<std::string>& gene_names);
void write_coords_tsv(const std::string& path, const Coordinates& coords,
                      const std::vector<std::string>& spot_names);
void write_comps_tsv(const std::string& path, const CellCompositions& comps,
                     const std::vector<std::string>& spot_names,
                     const std::vector<std::string>& cell_type_names);
void write_network_tsv(const std::string& path, const GeneNetwork& net,
                       const std::vector<std::string>& gene_names);
void write_truth_tsv(const std::string& path, const sim::GroundTruth& truth, int p,
                     const std::vector<std::string>& gene_names);

std::vector<std::string> default_names(const std::string& prefix, int count);

// flat key=value config with [hyper], [chain], [proposals] sections
struct RunConfig {
  HyperParams hp;
  ChainConfig chain;
  ProposalScales scales;
};
void apply_config_file(const std::string& path, RunConfig& cfg);

// fit output files: pip.tsv, selected.tsv, model_weights.tsv, estimates.tsv,
// trace_summary.tsv, manifest.json
struct FitFileOptions {
  std::string out_dir;
  std::string run_id;  // deterministic hash recorded in every output
  int chains = 0;
  int threads = 0;
  double bfdr_level = 0.05;
  double consensus_fraction = 0.8;
  std::uint64_t seed = 0;
  int iterations = 0, burn_in = 0, thin = 0;
  long duplicate_edges = 0;
  std::vector<std::string> input_files;
};

void write_fit_outputs(const FitOutput& fit, const NamedDataset& ds, const FitFileOptions& opts);

std::string run_id_hash(std::uint64_t seed, const FitOptions& opts);

// selected.tsv / truth.tsv readers for `svgene evaluate`
struct SelectionFile {
  std::vector<std::string> genes;
  std::vector<double> tilde_pip;
};
SelectionFile read_selected_tsv(const std::string& path);

struct TruthFile {
  std::vector<std::string> genes;  // all genes
  std::vector<std::string> sv_genes;
};
TruthFile read_truth_tsv(const std::string& path);

// 6-significant-digit numeric formatting shared by every TSV writer
std::string fmt(double v);

}  // namespace svgene::io
