#include "svgene/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

namespace svgene::io {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (ss >> cur) out.push_back(cur);
  return out;
}

// lines are whitespace-separated; '#' lines and blanks are skipped
class LineReader {
 public:
  explicit LineReader(const std::string& path) : path_(path), in_(path) {
    if (!in_) throw parse_error(path + ": cannot open");
  }

  std::optional<std::vector<std::string>> next() {
    std::string line;
    while (std::getline(in_, line)) {
      ++lineno_;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty() || line[0] == '#' || line[0] == '%') continue;
      return split_fields(line);
    }
    return std::nullopt;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw parse_error(path_ + ":" + std::to_string(lineno_) + ": " + what);
  }

  int lineno() const { return lineno_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  int lineno_ = 0;
};

long parse_count(const LineReader& r, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error(r.path() + ": not an integer count: '" + tok + "'");
  }
}

double parse_real(const LineReader& r, const std::string& tok) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(tok, &pos);
    if (pos != tok.size()) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw parse_error(r.path() + ": not a number: '" + tok + "'");
  }
}

std::vector<std::string> read_name_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open");
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    names.push_back(line);
  }
  return names;
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

struct RawCounts {
  int n = 0, p = 0;
  std::vector<std::string> spot_names;
  std::vector<std::string> gene_names;
  std::vector<std::vector<std::pair<int, long>>> nonzeros;  // per gene
};

RawCounts read_counts_tsv(const std::string& path) {
  LineReader r(path);
  const auto header = r.next();
  if (!header || header->size() < 2) throw parse_error(path + ": missing gene-name header");
  RawCounts raw;
  raw.gene_names.assign(header->begin() + 1, header->end());
  raw.p = static_cast<int>(raw.gene_names.size());
  raw.nonzeros.resize(raw.p);
  while (auto row = r.next()) {
    if (static_cast<int>(row->size()) != raw.p + 1)
      r.fail("expected " + std::to_string(raw.p + 1) + " fields, got " +
             std::to_string(row->size()));
    const int i = static_cast<int>(raw.spot_names.size());
    raw.spot_names.push_back((*row)[0]);
    for (int j = 0; j < raw.p; ++j) {
      const long v = parse_count(r, (*row)[j + 1]);
      if (v != 0) raw.nonzeros[j].emplace_back(i, v);
    }
  }
  raw.n = static_cast<int>(raw.spot_names.size());
  return raw;
}

RawCounts read_counts_mtx(const std::string& path) {
  std::ifstream probe(path);
  if (!probe) throw parse_error(path + ": cannot open");
  std::string magic;
  std::getline(probe, magic);
  if (magic.rfind("%%MatrixMarket", 0) != 0 || magic.find("coordinate") == std::string::npos)
    throw parse_error(path + ": expected a MatrixMarket coordinate header");
  probe.close();

  RawCounts raw;
  raw.spot_names = read_name_file(path + ".rows");
  raw.gene_names = read_name_file(path + ".cols");

  LineReader r(path);
  const auto dims = r.next();
  if (!dims || dims->size() != 3) throw parse_error(path + ": malformed size line");
  raw.n = static_cast<int>(parse_count(r, (*dims)[0]));
  raw.p = static_cast<int>(parse_count(r, (*dims)[1]));
  const long nnz = parse_count(r, (*dims)[2]);
  if (raw.n != static_cast<int>(raw.spot_names.size()))
    throw dimension_mismatch(path + ": row count != .rows sidecar length");
  if (raw.p != static_cast<int>(raw.gene_names.size()))
    throw dimension_mismatch(path + ": column count != .cols sidecar length");

  raw.nonzeros.resize(raw.p);
  long seen = 0;
  while (auto row = r.next()) {
    if (row->size() != 3) r.fail("expected 'row col value'");
    const long i = parse_count(r, (*row)[0]);
    const long j = parse_count(r, (*row)[1]);
    const long v = parse_count(r, (*row)[2]);
    if (i < 1 || i > raw.n || j < 1 || j > raw.p) r.fail("entry out of bounds");
    ++seen;
    if (v != 0) raw.nonzeros[j - 1].emplace_back(static_cast<int>(i - 1), v);
  }
  if (seen != nnz)
    throw parse_error(path + ": header promised " + std::to_string(nnz) + " entries, found " +
                      std::to_string(seen));
  return raw;
}

}  // namespace

std::vector<std::string> default_names(const std::string& prefix, int count) {
  std::vector<std::string> names(count);
  int width = 1;
  for (int v = count; v >= 10; v /= 10) ++width;
  for (int i = 0; i < count; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%s%0*d", prefix.c_str(), width, i + 1);
    names[i] = buf;
  }
  return names;
}

NamedDataset load_dataset(const DatasetPaths& paths) {
  RawCounts raw = ends_with(paths.counts, ".mtx") ? read_counts_mtx(paths.counts)
                                                  : read_counts_tsv(paths.counts);

  std::map<std::string, int> spot_index;
  for (int i = 0; i < raw.n; ++i)
    if (!spot_index.emplace(raw.spot_names[i], i).second)
      throw parse_error(paths.counts + ": duplicate spot id '" + raw.spot_names[i] + "'");
  std::map<std::string, int> gene_index;
  for (int j = 0; j < raw.p; ++j)
    if (!gene_index.emplace(raw.gene_names[j], j).second)
      throw parse_error(paths.counts + ": duplicate gene name '" + raw.gene_names[j] + "'");

  // coordinates, aligned by spot id
  Matrix coords(raw.n, 2);
  {
    LineReader r(paths.coords);
    const auto header = r.next();
    if (!header || header->size() != 3) throw parse_error(paths.coords + ": expected spot_id x y");
    std::vector<bool> seen(raw.n, false);
    while (auto row = r.next()) {
      if (row->size() != 3) r.fail("expected 3 fields");
      const auto it = spot_index.find((*row)[0]);
      if (it == spot_index.end())
        throw unknown_spot(paths.coords + ": spot '" + (*row)[0] + "' not in the count matrix");
      coords(it->second, 0) = parse_real(r, (*row)[1]);
      coords(it->second, 1) = parse_real(r, (*row)[2]);
      seen[it->second] = true;
    }
    for (int i = 0; i < raw.n; ++i)
      if (!seen[i])
        throw unknown_spot(paths.coords + ": no coordinates for spot '" + raw.spot_names[i] + "'");
  }

  // compositions, aligned by spot id
  std::vector<std::string> cell_type_names;
  Matrix w;
  {
    LineReader r(paths.comps);
    const auto header = r.next();
    if (!header || header->size() < 2)
      throw parse_error(paths.comps + ": expected spot_id plus cell-type columns");
    const int K = static_cast<int>(header->size()) - 1;
    cell_type_names.assign(header->begin() + 1, header->end());
    w.resize(raw.n, K);
    std::vector<bool> seen(raw.n, false);
    while (auto row = r.next()) {
      if (static_cast<int>(row->size()) != K + 1) r.fail("field count mismatch");
      const auto it = spot_index.find((*row)[0]);
      if (it == spot_index.end())
        throw unknown_spot(paths.comps + ": spot '" + (*row)[0] + "' not in the count matrix");
      for (int k = 0; k < K; ++k) w(it->second, k) = parse_real(r, (*row)[k + 1]);
      seen[it->second] = true;
    }
    for (int i = 0; i < raw.n; ++i)
      if (!seen[i])
        throw unknown_spot(paths.comps + ": no composition for spot '" + raw.spot_names[i] + "'");
  }

  // network edge list of gene names
  std::vector<std::pair<int, int>> edges;
  long duplicates = 0;
  {
    LineReader r(paths.network);
    std::set<std::pair<int, int>> seen;
    while (auto row = r.next()) {
      if (row->size() != 2) r.fail("expected two gene names");
      const auto a = gene_index.find((*row)[0]);
      const auto b = gene_index.find((*row)[1]);
      if (a == gene_index.end())
        throw unknown_gene(paths.network + ": unknown gene '" + (*row)[0] + "'");
      if (b == gene_index.end())
        throw unknown_gene(paths.network + ": unknown gene '" + (*row)[1] + "'");
      int j = a->second, l = b->second;
      if (j > l) std::swap(j, l);
      if (!seen.emplace(j, l).second) {
        ++duplicates;
        continue;
      }
      edges.emplace_back(j, l);
    }
  }

  NamedDataset out{
      ValidatedDataset(CountMatrix(raw.n, raw.p, raw.nonzeros), Coordinates{std::move(coords)},
                       CellCompositions{std::move(w)}, GeneNetwork(raw.p, std::move(edges))),
      std::move(raw.spot_names), std::move(raw.gene_names), std::move(cell_type_names),
      duplicates};
  return out;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: LF line endings everywhere
  if (!out) throw parse_error(path + ": cannot open for writing");
  return out;
}

}  // namespace

void write_counts_mtx(const std::string& path, const CountMatrix& counts,
                      const std::vector<std::string>& spot_names,
                      const std::vector<std::string>& gene_names) {
  auto out = open_out(path);
  long nnz = 0;
  for (int j = 0; j < counts.p(); ++j) nnz += static_cast<long>(counts.nonzeros(j).size());
  out << "%%MatrixMarket matrix coordinate integer general\n";
  out << "% rows are spots, columns are genes\n";
  out << counts.n() << ' ' << counts.p() << ' ' << nnz << '\n';
  for (int j = 0; j < counts.p(); ++j)
    for (const auto& [i, v] : counts.nonzeros(j)) out << i + 1 << ' ' << j + 1 << ' ' << v << '\n';

  auto rows = open_out(path + ".rows");
  for (const auto& s : spot_names) rows << s << '\n';
  auto cols = open_out(path + ".cols");
  for (const auto& g : gene_names) cols << g << '\n';
}

void write_coords_tsv(const std::string& path, const Coordinates& coords,
                      const std::vector<std::string>& spot_names) {
  auto out = open_out(path);
  out << "spot_id\tx\ty\n";
  for (int i = 0; i < coords.n(); ++i)
    out << spot_names[i] << '\t' << fmt(coords.coords(i, 0)) << '\t' << fmt(coords.coords(i, 1))
        << '\n';
}

void write_comps_tsv(const std::string& path, const CellCompositions& comps,
                     const std::vector<std::string>& spot_names,
                     const std::vector<std::string>& cell_type_names) {
  auto out = open_out(path);
  out << "spot_id";
  for (const auto& ct : cell_type_names) out << '\t' << ct;
  out << '\n';
  for (int i = 0; i < comps.n(); ++i) {
    out << spot_names[i];
    for (int k = 0; k < comps.K(); ++k) out << '\t' << fmt(comps.w(i, k));
    out << '\n';
  }
}

void write_network_tsv(const std::string& path, const GeneNetwork& net,
                       const std::vector<std::string>& gene_names) {
  auto out = open_out(path);
  for (const auto& [j, l] : net.edges()) out << gene_names[j] << '\t' << gene_names[l] << '\n';
}

void write_truth_tsv(const std::string& path, const sim::GroundTruth& truth, int p,
                     const std::vector<std::string>& gene_names) {
  auto out = open_out(path);
  std::vector<bool> is_sv(p, false);
  for (int g : truth.sv_genes) is_sv[g] = true;
  out << "gene\tis_sv\tbeta1\tbeta2\n";
  for (int j = 0; j < p; ++j)
    out << gene_names[j] << '\t' << (is_sv[j] ? 1 : 0) << '\t' << fmt(truth.beta_true(j)) << '\t'
        << fmt(truth.beta_true(j + p)) << '\n';
}

void apply_config_file(const std::string& path, RunConfig& cfg) {
  std::ifstream in(path);
  if (!in) throw parse_error(path + ": cannot open");
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '#' || line[first] == ';') continue;
    if (line[first] == '[') {
      const auto close = line.find(']', first);
      if (close == std::string::npos)
        throw parse_error(path + ":" + std::to_string(lineno) + ": unclosed section");
      section = line.substr(first + 1, close - first - 1);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw parse_error(path + ":" + std::to_string(lineno) + ": expected key = value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    double num = 0.0;
    try {
      num = std::stod(value);
    } catch (const std::exception&) {
      throw parse_error(path + ":" + std::to_string(lineno) + ": bad value '" + value + "'");
    }

    bool known = true;
    if (section == "hyper") {
      if (key == "a_pi") cfg.hp.a_pi = num;
      else if (key == "b_pi") cfg.hp.b_pi = num;
      else if (key == "a_phi") cfg.hp.a_phi = num;
      else if (key == "b_phi") cfg.hp.b_phi = num;
      else if (key == "a_gamma") cfg.hp.a_gamma = num;
      else if (key == "b_gamma") cfg.hp.b_gamma = num;
      else if (key == "sigma0_sq") cfg.hp.sigma0_sq = num;
      else if (key == "sigma_alpha_sq") cfg.hp.sigma_alpha_sq = num;
      else if (key == "lambda_l") cfg.hp.lambda_l = num;
      else if (key == "lambda_u") cfg.hp.lambda_u = num;
      else if (key == "ridge_epsilon") cfg.hp.ridge_epsilon = num;
      else if (key == "smooth_epsilon") cfg.hp.smooth_epsilon = num;
      else if (key == "bfdr_level") cfg.hp.bfdr_level = num;
      else if (key == "consensus_fraction") cfg.hp.consensus_fraction = num;
      else known = false;
    } else if (section == "chain") {
      if (key == "iterations") cfg.chain.iterations = static_cast<int>(num);
      else if (key == "burn_in") cfg.chain.burn_in = static_cast<int>(num);
      else if (key == "thin") cfg.chain.thin = static_cast<int>(num);
      else if (key == "seed") cfg.chain.seed = static_cast<std::uint64_t>(num);
      else if (key == "adapt_window") cfg.chain.adapt_window = static_cast<int>(num);
      else known = false;
    } else if (section == "proposals") {
      if (key == "tau_mu0_sq") cfg.scales.tau_mu0_sq = num;
      else if (key == "tau_alpha_sq") cfg.scales.tau_alpha_sq = num;
      else if (key == "tau_phi_sq") cfg.scales.tau_phi_sq = num;
      else if (key == "tau_gamma_sq") cfg.scales.tau_gamma_sq = num;
      else if (key == "tau_lambda_sq") cfg.scales.tau_lambda_sq = num;
      else if (key == "target_accept") cfg.scales.target_accept = num;
      else known = false;
    } else {
      throw parse_error(path + ":" + std::to_string(lineno) + ": unknown section [" + section +
                        "]");
    }
    if (!known)
      throw parse_error(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "' in [" +
                        section + "]");
  }
}

std::string run_id_hash(std::uint64_t seed, const FitOptions& opts) {
  std::uint64_t h = seed;
  auto fold = [&h](double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    h = rng::mix(h, bits);
  };
  h = rng::mix(h, static_cast<std::uint64_t>(opts.chains));
  h = rng::mix(h, static_cast<std::uint64_t>(opts.chain.iterations));
  h = rng::mix(h, static_cast<std::uint64_t>(opts.chain.burn_in));
  h = rng::mix(h, static_cast<std::uint64_t>(opts.chain.thin));
  fold(opts.hp.bfdr_level);
  fold(opts.hp.consensus_fraction);
  fold(opts.hp.a_phi);
  fold(opts.hp.b_phi);
  fold(opts.hp.a_gamma);
  fold(opts.hp.b_gamma);
  fold(opts.hp.ridge_epsilon);
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_fit_outputs(const FitOutput& fit, const NamedDataset& ds, const FitFileOptions& opts) {
  const int p = ds.data.p();
  const int K = ds.data.K();
  const std::string dir = opts.out_dir.empty() ? "." : opts.out_dir;
  const std::string banner = "# run_id=" + opts.run_id + "\n";
  const int chains = static_cast<int>(fit.fits.size());

  {
    auto out = open_out(dir + "/pip.tsv");
    out << banner << "gene";
    for (const auto& k : fit.kernels) out << '\t' << k.name() << "_d1\t" << k.name() << "_d2";
    out << "\tcombined_d1\tcombined_d2\ttilde\n";
    // per-kernel PIPs averaged over chains, like the combined columns
    for (int j = 0; j < p; ++j) {
      out << ds.gene_names[j];
      for (int s = 0; s < 5; ++s) {
        double p1 = 0.0, p2 = 0.0;
        for (int c = 0; c < chains; ++c) {
          p1 += fit.fits[c][s].pip(j) / chains;
          p2 += fit.fits[c][s].pip(j + p) / chains;
        }
        out << '\t' << fmt(p1) << '\t' << fmt(p2);
      }
      out << '\t' << fmt(fit.result.combined_pip(j)) << '\t'
          << fmt(fit.result.combined_pip(j + p)) << '\t' << fmt(fit.result.tilde_pip(j)) << '\n';
    }
  }

  {
    auto out = open_out(dir + "/selected.tsv");
    out << banner << "gene\ttilde_pip\tchains_selected\n";
    std::vector<int> per_gene_count(p, 0);
    for (const auto& sel : fit.result.per_chain_selected)
      for (int g : sel) ++per_gene_count[g];
    for (int g : fit.result.selected)
      out << ds.gene_names[g] << '\t' << fmt(fit.result.tilde_pip(g)) << '\t'
          << per_gene_count[g] << '\n';
  }

  {
    auto out = open_out(dir + "/model_weights.tsv");
    out << banner << "kernel\tweight\tlog_marginal_mean\n";
    for (int s = 0; s < 5; ++s) {
      double lm = 0.0;
      for (int c = 0; c < chains; ++c) lm += fit.fits[c][s].log_marginal / chains;
      out << fit.kernels[s].name() << '\t' << fmt(fit.result.model_weights[s]) << '\t' << fmt(lm)
          << '\n';
    }
  }

  {
    auto out = open_out(dir + "/estimates.tsv");
    out << banner << "kernel\tparam\tindex\testimate\n";
    for (int s = 0; s < 5; ++s) {
      auto mean_of = [&](auto&& get) {
        double acc = 0.0;
        for (int c = 0; c < chains; ++c) acc += get(fit.fits[c][s]) / chains;
        return acc;
      };
      for (int j = 0; j < p; ++j)
        out << fit.kernels[s].name() << "\tmu0\t" << ds.gene_names[j] << '\t'
            << fmt(mean_of([&](const KernelFit& f) { return f.mu0_hat(j); })) << '\n';
      for (int k = 0; k < K; ++k)
        out << fit.kernels[s].name() << "\talpha\t" << ds.cell_type_names[k] << '\t'
            << fmt(mean_of([&](const KernelFit& f) { return f.alpha_hat(k); })) << '\n';
      out << fit.kernels[s].name() << "\tphi\t-\t"
          << fmt(mean_of([&](const KernelFit& f) { return f.phi_hat; })) << '\n';
      for (int j = 0; j < p; ++j) {
        out << fit.kernels[s].name() << "\tbeta1\t" << ds.gene_names[j] << '\t'
            << fmt(mean_of([&](const KernelFit& f) { return f.beta_hat(j); })) << '\n';
        out << fit.kernels[s].name() << "\tbeta2\t" << ds.gene_names[j] << '\t'
            << fmt(mean_of([&](const KernelFit& f) { return f.beta_hat(j + p); })) << '\n';
      }
    }
  }

  {
    auto out = open_out(dir + "/trace_summary.tsv");
    out << banner
        << "kernel\tchain\taccept_mu0\taccept_alpha\taccept_phi\taccept_gamma\taccept_lambda\twall_"
           "ms\n";
    for (const auto& job : fit.jobs)
      out << fit.kernels[job.kernel].name() << '\t' << job.chain << '\t'
          << fmt(job.acceptance.mu0) << '\t' << fmt(job.acceptance.alpha) << '\t'
          << fmt(job.acceptance.phi) << '\t' << fmt(job.acceptance.gamma) << '\t'
          << fmt(job.acceptance.lambda) << '\t' << fmt(job.wall_ms) << '\n';
  }

  {
    nlohmann::json j;
    j["run_id"] = opts.run_id;
    j["version"] = "svgene 0.1.0";
    j["seed"] = opts.seed;
    j["chains"] = opts.chains;
    j["threads"] = opts.threads;
    j["iterations"] = opts.iterations;
    j["burn_in"] = opts.burn_in;
    j["thin"] = opts.thin;
    j["bfdr_level"] = opts.bfdr_level;
    j["consensus_fraction"] = opts.consensus_fraction;
    j["bfdr_cut"] = fit.result.bfdr_cut;
    j["duplicate_edges_deduplicated"] = opts.duplicate_edges;
    j["inputs"] = opts.input_files;
    for (int s = 0; s < 5; ++s) {
      j["kernels"][s]["name"] = fit.kernels[s].name();
      j["kernels"][s]["lambda_u"] = fit.lambda_u[s];
      j["kernels"][s]["scales"] = {fit.kernels[s].scales[0], fit.kernels[s].scales[1]};
      j["kernels"][s]["weight"] = fit.result.model_weights[s];
    }
    for (const auto& job : fit.jobs) {
      nlohmann::json e;
      e["kernel"] = fit.kernels[job.kernel].name();
      e["chain"] = job.chain;
      e["seed"] = job.seed;
      e["wall_ms"] = job.wall_ms;
      e["accept"] = {{"mu0", job.acceptance.mu0},
                     {"alpha", job.acceptance.alpha},
                     {"phi", job.acceptance.phi},
                     {"gamma", job.acceptance.gamma},
                     {"lambda", job.acceptance.lambda}};
      j["jobs"].push_back(e);
    }
    j["outputs"] = {"pip.tsv", "selected.tsv", "model_weights.tsv", "estimates.tsv",
                    "trace_summary.tsv", "manifest.json"};
    auto out = open_out(dir + "/manifest.json");
    out << j.dump(2) << '\n';
  }
}

SelectionFile read_selected_tsv(const std::string& path) {
  LineReader r(path);
  const auto header = r.next();
  if (!header || header->empty() || (*header)[0] != "gene")
    throw parse_error(path + ": expected a selected.tsv header");
  SelectionFile out;
  while (auto row = r.next()) {
    if (row->size() < 2) r.fail("expected gene and tilde_pip");
    out.genes.push_back((*row)[0]);
    out.tilde_pip.push_back(parse_real(r, (*row)[1]));
  }
  return out;
}

TruthFile read_truth_tsv(const std::string& path) {
  LineReader r(path);
  const auto header = r.next();
  if (!header || header->size() < 2 || (*header)[0] != "gene")
    throw missing_truth(path + ": expected a truth.tsv header");
  TruthFile out;
  while (auto row = r.next()) {
    if (row->size() < 2) r.fail("expected gene and is_sv");
    out.genes.push_back((*row)[0]);
    if ((*row)[1] == "1") out.sv_genes.push_back((*row)[0]);
  }
  return out;
}

}  // namespace svgene::io
