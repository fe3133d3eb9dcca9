#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "svgene/io.hpp"
#include "svgene/pipeline.hpp"
#include "svgene/simulate.hpp"

namespace fs = std::filesystem;
using namespace svgene;

namespace {

int resolve_threads(int flag_value) {
  if (const char* env = std::getenv("SVGENE_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return flag_value;
}

struct FitArgs {
  std::string counts, coords, comps, network, out = ".", config;
  int chains = 5;
  int iterations = 2000;
  int burn_in = 1000;
  int thin = 10;
  std::uint64_t seed = 1;
  double bfdr = 0.05;
  int threads = 0;
};

int cmd_fit(const FitArgs& args) {
  io::NamedDataset ds = io::load_dataset({args.counts, args.coords, args.comps, args.network});

  io::RunConfig cfg;
  cfg.chain.iterations = args.iterations;
  cfg.chain.burn_in = args.burn_in;
  cfg.chain.thin = args.thin;
  cfg.chain.seed = args.seed;
  cfg.hp.bfdr_level = args.bfdr;
  if (!args.config.empty()) io::apply_config_file(args.config, cfg);

  FitOptions opts;
  opts.chains = args.chains;
  opts.chain = cfg.chain;
  opts.hp = cfg.hp;
  opts.scales = cfg.scales;
  opts.threads = resolve_threads(args.threads);

  fs::create_directories(args.out);
  FitOutput fit = run_fit(ds.data, opts);

  io::FitFileOptions fo;
  fo.out_dir = args.out;
  fo.run_id = io::run_id_hash(cfg.chain.seed, opts);
  fo.chains = opts.chains;
  fo.threads = opts.threads;
  fo.bfdr_level = cfg.hp.bfdr_level;
  fo.consensus_fraction = cfg.hp.consensus_fraction;
  fo.seed = cfg.chain.seed;
  fo.iterations = cfg.chain.iterations;
  fo.burn_in = cfg.chain.burn_in;
  fo.thin = cfg.chain.thin;
  fo.duplicate_edges = ds.duplicate_edges;
  fo.input_files = {args.counts, args.coords, args.comps, args.network};
  io::write_fit_outputs(fit, ds, fo);
  return 0;
}

struct SimArgs {
  std::string scenario;
  std::string out = ".";
  std::string grid;
  int p = 0;
  int subnet_size = 0;
  int sv_subnets = -1;
  double dropout = -1.0;
  double phi = 0.0;
  int K = 0;
  std::uint64_t seed = 1;
};

int cmd_simulate(const SimArgs& args) {
  sim::Generated gen = [&] {
    if (args.scenario == "m1") return sim::generate_m1(args.seed);

    // basic-{star|scalefree}-{linear|exponential|periodic}-{lo|hi}
    sim::ScenarioConfig cfg;
    cfg.seed = args.seed;
    std::string rest = args.scenario;
    auto take = [&rest]() {
      const auto dash = rest.find('-');
      std::string head = rest.substr(0, dash);
      rest = dash == std::string::npos ? std::string() : rest.substr(dash + 1);
      return head;
    };
    if (take() != "basic") throw unknown_scenario("unknown scenario '" + args.scenario + "'");
    const std::string net = take();
    if (net == "star") cfg.network_kind = sim::NetworkKind::Star;
    else if (net == "scalefree") cfg.network_kind = sim::NetworkKind::ScaleFree;
    else throw unknown_scenario("unknown network '" + net + "'");
    const std::string pat = take();
    if (pat == "linear") cfg.pattern = sim::Pattern::Linear;
    else if (pat == "exponential") cfg.pattern = sim::Pattern::Exponential;
    else if (pat == "periodic") cfg.pattern = sim::Pattern::Periodic;
    else throw unknown_scenario("unknown pattern '" + pat + "'");
    const std::string drop = take();
    if (drop == "lo") cfg.dropout = 0.1;
    else if (drop == "hi") cfg.dropout = 0.5;
    else throw unknown_scenario("unknown dropout tag '" + drop + "'");
    if (!rest.empty()) throw unknown_scenario("trailing scenario text '" + rest + "'");

    if (!args.grid.empty()) {
      const auto x = args.grid.find('x');
      if (x == std::string::npos) throw parse_error("--grid expects ROWSxCOLS");
      cfg.grid_rows = std::stoi(args.grid.substr(0, x));
      cfg.grid_cols = std::stoi(args.grid.substr(x + 1));
    }
    if (args.subnet_size > 0) cfg.subnet_size = args.subnet_size;
    if (args.p > 0) {
      cfg.p = args.p;
      if (cfg.p % cfg.subnet_size != 0)
        throw invariant_violation("p must be a multiple of subnet_size");
      cfg.subnet_count = cfg.p / cfg.subnet_size;
      cfg.sv_subnets = std::min(cfg.sv_subnets, cfg.subnet_count);
    }
    if (args.sv_subnets >= 0) cfg.sv_subnets = args.sv_subnets;
    if (args.dropout >= 0.0) cfg.dropout = args.dropout;
    if (args.phi > 0.0) cfg.phi = args.phi;
    if (args.K > 0) {
      cfg.K = args.K;
      for (auto& conc : cfg.region_concentrations) conc.resize(cfg.K, 1.0);
    }
    return sim::generate_scenario(cfg);
  }();

  fs::create_directories(args.out);
  const auto spot_names = io::default_names("s", gen.counts.n());
  const auto gene_names = io::default_names("g", gen.counts.p());
  const auto cell_names = io::default_names("ct", gen.comps.K());
  io::write_counts_mtx(args.out + "/counts.mtx", gen.counts, spot_names, gene_names);
  io::write_coords_tsv(args.out + "/coords.tsv", gen.coords, spot_names);
  io::write_comps_tsv(args.out + "/comps.tsv", gen.comps, spot_names, cell_names);
  io::write_network_tsv(args.out + "/network.tsv", gen.network, gene_names);
  io::write_truth_tsv(args.out + "/truth.tsv", gen.truth, gen.counts.p(), gene_names);
  return 0;
}

struct EvalArgs {
  std::string selected, truth, out;
  std::vector<std::string> replicate_dirs;
};

struct EvalRow {
  sim::Metrics m;
  double realized_bfdr = 0.0;
  long n_selected = 0, n_truth = 0;
};

EvalRow evaluate_one(const std::string& selected_path, const std::string& truth_path) {
  const io::SelectionFile sel = io::read_selected_tsv(selected_path);
  const io::TruthFile truth = io::read_truth_tsv(truth_path);

  std::map<std::string, int> index;
  for (int j = 0; j < static_cast<int>(truth.genes.size()); ++j) index[truth.genes[j]] = j;
  std::vector<int> sel_idx, truth_idx;
  for (const auto& g : sel.genes) {
    const auto it = index.find(g);
    if (it == index.end()) throw unknown_gene("selected gene '" + g + "' absent from the truth");
    sel_idx.push_back(it->second);
  }
  for (const auto& g : truth.sv_genes) truth_idx.push_back(index.at(g));

  EvalRow row;
  row.m = sim::classification_metrics(sel_idx, truth_idx);
  row.n_selected = static_cast<long>(sel_idx.size());
  row.n_truth = static_cast<long>(truth_idx.size());
  double s = 0.0;
  for (double v : sel.tilde_pip) s += 1.0 - v;
  row.realized_bfdr = sel.tilde_pip.empty() ? 0.0 : s / sel.tilde_pip.size();
  return row;
}

int cmd_evaluate(const EvalArgs& args) {
  std::ofstream out(args.out.empty() ? "/dev/stdout" : args.out, std::ios::binary);
  if (!out) throw parse_error(args.out + ": cannot open for writing");

  if (!args.replicate_dirs.empty()) {
    std::vector<EvalRow> rows;
    for (const auto& dir : args.replicate_dirs)
      rows.push_back(evaluate_one(dir + "/selected.tsv", dir + "/truth.tsv"));
    auto agg = [&](auto&& get) {
      double mean = 0.0;
      for (const auto& r : rows) mean += get(r) / rows.size();
      double var = 0.0;
      for (const auto& r : rows) var += (get(r) - mean) * (get(r) - mean);
      const double sd = rows.size() > 1 ? std::sqrt(var / (rows.size() - 1)) : 0.0;
      return std::pair<double, double>(mean, sd);
    };
    out << "metric\tmean\tsd\n";
    const auto rec = agg([](const EvalRow& r) { return r.m.recall; });
    const auto prec = agg([](const EvalRow& r) { return r.m.precision; });
    const auto f1 = agg([](const EvalRow& r) { return r.m.f1; });
    const auto bfdr = agg([](const EvalRow& r) { return r.realized_bfdr; });
    out << "recall\t" << io::fmt(rec.first) << '\t' << io::fmt(rec.second) << '\n';
    out << "precision\t" << io::fmt(prec.first) << '\t' << io::fmt(prec.second) << '\n';
    out << "f1\t" << io::fmt(f1.first) << '\t' << io::fmt(f1.second) << '\n';
    out << "realized_bfdr\t" << io::fmt(bfdr.first) << '\t' << io::fmt(bfdr.second) << '\n';
    return 0;
  }

  const EvalRow row = evaluate_one(args.selected, args.truth);
  out << "recall\tprecision\tf1\trealized_bfdr\tn_selected\tn_truth\n";
  out << io::fmt(row.m.recall) << '\t' << io::fmt(row.m.precision) << '\t' << io::fmt(row.m.f1)
      << '\t' << io::fmt(row.realized_bfdr) << '\t' << row.n_selected << '\t' << row.n_truth
      << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"network-assisted Bayesian identification of spatially variable genes"};
  app.require_subcommand(1);

  FitArgs fit;
  auto* cfit = app.add_subcommand("fit", "run the five-kernel MCMC and select SV genes");
  cfit->add_option("--counts", fit.counts, "count matrix (.tsv dense or .mtx + sidecars)")
      ->required();
  cfit->add_option("--coords", fit.coords, "spot coordinates TSV (spot_id, x, y)")->required();
  cfit->add_option("--comps", fit.comps, "cell-type proportions TSV")->required();
  cfit->add_option("--network", fit.network, "gene-gene edge list TSV")->required();
  cfit->add_option("--out", fit.out, "output directory (pip.tsv, selected.tsv, ...)");
  cfit->add_option("--chains", fit.chains, "independent chains per kernel (default 5)");
  cfit->add_option("--iterations", fit.iterations, "MCMC sweeps per chain (default 2000)");
  cfit->add_option("--burn-in", fit.burn_in, "discarded sweeps (default 1000)");
  cfit->add_option("--thin", fit.thin, "keep every thin-th sweep (default 10)");
  cfit->add_option("--seed", fit.seed, "master RNG seed");
  cfit->add_option("--bfdr", fit.bfdr, "BFDR level (default 0.05)");
  cfit->add_option("--config", fit.config, "key=value file with [hyper]/[chain]/[proposals]");
  cfit->add_option("--threads", fit.threads,
                   "worker threads for the 5 x chains jobs (env SVGENE_THREADS overrides)");

  SimArgs simargs;
  auto* csim = app.add_subcommand("simulate", "generate a synthetic dataset with ground truth");
  csim->add_option("scenario", simargs.scenario,
                   "basic-{star|scalefree}-{linear|exponential|periodic}-{lo|hi} or m1")
      ->required();
  csim->add_option("--out", simargs.out, "output directory");
  csim->add_option("--grid", simargs.grid, "lattice dims ROWSxCOLS (default 32x32)");
  csim->add_option("--p", simargs.p, "gene count (multiple of subnet size)");
  csim->add_option("--subnet-size", simargs.subnet_size, "genes per sub-network (default 50)");
  csim->add_option("--sv-subnets", simargs.sv_subnets, "informative sub-networks (default 10)");
  csim->add_option("--dropout", simargs.dropout, "dropout rate override");
  csim->add_option("--phi", simargs.phi, "dispersion override");
  csim->add_option("--k", simargs.K, "cell types override");
  csim->add_option("--seed", simargs.seed, "RNG seed");

  EvalArgs ev;
  auto* ceval = app.add_subcommand("evaluate", "score a selection against ground truth");
  ceval->add_option("--selected", ev.selected, "selected.tsv from fit");
  ceval->add_option("--truth", ev.truth, "truth.tsv from simulate");
  ceval->add_option("--out", ev.out, "metrics TSV (default stdout)");
  ceval->add_option("--replicate-dirs", ev.replicate_dirs,
                    "directories each holding selected.tsv and truth.tsv; reports mean and SD");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cfit->parsed()) return cmd_fit(fit);
    if (csim->parsed()) return cmd_simulate(simargs);
    if (ceval->parsed()) {
      if (ev.replicate_dirs.empty() && (ev.selected.empty() || ev.truth.empty()))
        throw missing_truth("evaluate needs --selected and --truth, or --replicate-dirs");
      return cmd_evaluate(ev);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: Internal: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
