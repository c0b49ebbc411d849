// mxspec: multiplex spectral clustering command-line front end.
//
// Exit codes: 0 success, 1 usage error, 2 data or model error. Every error
// is reported on one line as `error[<module>]: <message>`.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mxspec/cut.hpp"
#include "mxspec/error.hpp"
#include "mxspec/experiments.hpp"
#include "mxspec/generators.hpp"
#include "mxspec/network.hpp"
#include "mxspec/operators.hpp"
#include "mxspec/spectral.hpp"
#include "mxspec/text.hpp"

namespace fs = std::filesystem;
using namespace mxspec;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::optional<std::uint64_t> seed;
  bool verbose = false;

  // generate
  std::string type;
  std::size_t n = 100;
  std::size_t k = 2;
  double p = 0.1;
  std::optional<double> intra;
  std::optional<double> inter;

  // cluster / cut
  fs::path input;
  fs::path output;
  std::string model;
  std::optional<double> supra_weight;
  std::optional<fs::path> coupling;
  int clusters = 2;
  fs::path partition;
  bool decompose = false;

  // experiment
  std::string experiment;
  std::size_t instances = 20;
  unsigned jobs = 0;
  bool full = false;
  std::optional<std::string> p_grid, q_grid, k_grid, w_grid, pq_points;
  std::optional<fs::path> aggregate;
  std::string er_model = "both";
  bool pairwise = false;
  double recovery_threshold = 1.0;

  // heatmap
  fs::path results;
  std::string x, y, metric;
  std::vector<std::string> filters;
};

std::uint64_t resolve_seed(const RunConfig& cfg) {
  if (cfg.seed) return *cfg.seed;
  if (const char* env = std::getenv("MXSPEC_SEED")) {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env, &used, 0);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("MXSPEC_SEED is not an unsigned integer");
  }
  return kDefaultSeed;
}

std::ofstream open_output(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(module::kCli, "cannot write '" + path.string() + "'");
  return out;
}

void write_planted(const fs::path& path, const std::vector<int>& labels) {
  auto out = open_output(path);
  out << "copy_index,cluster\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

fs::path planted_path(fs::path out) { return out.replace_extension(".planted.csv"); }

int run_generate(const RunConfig& cfg) {
  const std::uint64_t seed = resolve_seed(cfg);
  if (cfg.type == "er") {
    if (cfg.intra || cfg.inter) throw UsageError("--intra/--inter do not apply to --type er");
    save_network(gen_er_multiplex(cfg.n, cfg.k, cfg.p, seed), cfg.output);
  } else if (cfg.type == "sbm-fixed") {
    if (cfg.intra && *cfg.intra != 1.0) throw UsageError("sbm-fixed uses intra-cluster probability 1");
    const auto g = gen_fixed_sbm_multiplex(cfg.n, cfg.k, cfg.inter.value_or(cfg.p), seed);
    save_network(g.network, cfg.output);
    write_planted(planted_path(cfg.output), g.planted.labels);
  } else {
    if (cfg.k != 2) throw UsageError("sbm-overlap always has two layers");
    const auto g = gen_overlap_multiplex(cfg.n, cfg.intra.value_or(0.9), cfg.inter.value_or(0.1), seed);
    save_network(g.network, cfg.output);
    // Each copy is labeled with its community on its own layer.
    std::vector<int> labels = g.planted1.labels;
    labels.insert(labels.end(), g.planted2.labels.begin(), g.planted2.labels.end());
    write_planted(planted_path(cfg.output), labels);
  }
  return 0;
}

void check_model_flags(const RunConfig& cfg) {
  if (cfg.supra_weight && cfg.coupling) throw UsageError("give either --supra-weight or --coupling, not both");
  if (cfg.model == "supra" && !cfg.supra_weight) throw UsageError("--model supra needs --supra-weight");
  if (cfg.model == "dynamic" && cfg.supra_weight) throw UsageError("--supra-weight does not apply to --model dynamic");
}

CouplingConfig resolve_coupling(const RunConfig& cfg, const MultiplexNetwork& net) {
  if (cfg.model == "supra") return SupraWeight{*cfg.supra_weight};
  if (cfg.coupling) return load_coupling(*cfg.coupling, net.nodes(), net.layer_count());
  if (cfg.model == "dynamic") return DynamicCoupling::identity(net.nodes(), net.layer_count());
  // aggregate: the indivisible-node reduction of whichever operator is given.
  return SupraWeight{cfg.supra_weight.value_or(0.0)};
}

int run_cluster(const RunConfig& cfg) {
  const std::uint64_t seed = resolve_seed(cfg);
  check_model_flags(cfg);
  const MultiplexNetwork net = load_network(cfg.input);
  const CouplingConfig coupling = resolve_coupling(cfg, net);
  const SupraOperator op = build_operator(net, coupling);
  const bool aggregate = cfg.model == "aggregate";
  const Matrix lap = aggregate ? reduce_indivisible(op).laplacian : op.laplacian();

  if (cfg.clusters < 2 || static_cast<Eigen::Index>(cfg.clusters) > lap.rows()) {
    throw UsageError("--clusters must lie in 2.." + std::to_string(lap.rows()));
  }
  const EigenSystem eig = eig_sym(lap);
  Partition part;
  if (cfg.clusters == 2) {
    Bipartition split = fiedler_bipartition(lap, eig);
    std::cout << "fiedler_value=" << format_real(split.fiedler_value) << '\n'
              << "fiedler_multiplicity=" << split.fiedler_multiplicity << '\n'
              << "zero_multiplicity=" << split.zero_multiplicity << '\n'
              << "degenerate=" << (split.degenerate ? "true" : "false") << '\n';
    part = std::move(split.partition);
  } else {
    part = spectral_kway(eig, cfg.clusters, seed);
    std::cout << "effective_clusters=" << part.effective_clusters() << '\n';
  }
  if (aggregate) part = lift_to_copies(part, net.layer_count());

  const NodeCopyIndex index(net.nodes(), net.layer_count());
  auto out = open_output(cfg.output);
  out << "copy_index,layer,node,cluster\n";
  for (std::size_t i = 0; i < part.size(); ++i) {
    const NodeCopy c = index.unflatten(i);
    out << i << ',' << c.layer << ',' << c.node << ',' << part.labels[i] << '\n';
  }
  return 0;
}

Partition read_partition(const fs::path& path, std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw Error(module::kCut, "cannot open '" + path.string() + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(module::kCut, 1, "empty partition file");
  std::vector<std::string> header;
  {
    std::stringstream ss{std::string(trim(line))};
    for (std::string col; std::getline(ss, col, ',');) header.push_back(col);
  }
  const auto find = [&](const char* name) -> std::size_t {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    throw ParseError(module::kCut, 1, std::string("missing column ") + name);
  };
  const std::size_t ci = find("copy_index");
  const std::size_t li = find("cluster");
  Partition part;
  part.labels.assign(expected, -1);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss{std::string(trim(line))};
    for (std::string f; std::getline(ss, f, ',');) fields.push_back(f);
    if (fields.size() != header.size()) throw ParseError(module::kCut, line_no, "wrong column count");
    const auto copy = parse_integer(fields[ci]);
    const auto label = parse_integer(fields[li]);
    if (!copy || !label || *copy < 0 || static_cast<std::size_t>(*copy) >= expected || *label < 0) {
      throw ParseError(module::kCut, line_no, "malformed partition row");
    }
    part.labels[static_cast<std::size_t>(*copy)] = static_cast<int>(*label);
  }
  int max_label = -1;
  for (int l : part.labels) {
    if (l < 0) throw Error(module::kCut, "partition does not cover every node copy");
    max_label = std::max(max_label, l);
  }
  part.clusters = max_label + 1;
  return part;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

int run_cut(const RunConfig& cfg) {
  check_model_flags(cfg);
  const MultiplexNetwork net = load_network(cfg.input);
  const CouplingConfig coupling = resolve_coupling(cfg, net);
  const SupraOperator op = build_operator(net, coupling);
  const Partition part = read_partition(cfg.partition, op.size());

  std::cout << "term,value\n";
  std::cout << "cut," << format_real(cut_cost(op, part)) << '\n';
  if (part.clusters <= 2) {
    std::cout << "half_quadratic_form," << format_real(0.5 * quadratic_form(op.laplacian(), part)) << '\n';
  }
  if (cfg.decompose) {
    if (part.clusters > 2) throw Error(module::kCut, "decomposition needs a bipartition");
    const CutReport report = std::holds_alternative<SupraWeight>(coupling)
                                 ? decompose_supra(net, std::get<SupraWeight>(coupling).w, part)
                                 : decompose_dynamic(net, std::get<DynamicCoupling>(coupling), part);
    for (const auto& term : report.decomposition) {
      std::cout << csv_field(term.name) << ',' << format_real(term.value) << '\n';
    }
    std::cout << "decomposition_sum," << format_real(report.decomposition_sum()) << '\n';
    std::cout << "normalization," << csv_field(report.normalization) << '\n';
  }
  return 0;
}

std::vector<std::size_t> to_counts(const std::vector<double>& values) {
  std::vector<std::size_t> out;
  for (double v : values) {
    if (v < 1.0 || v != std::floor(v)) throw UsageError("layer counts must be positive integers");
    out.push_back(static_cast<std::size_t>(v));
  }
  return out;
}

std::vector<std::pair<double, double>> parse_pq_points(const std::string& spec) {
  std::vector<std::pair<double, double>> out;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ',');) {
    const auto slash = item.find('/');
    const auto p = slash == std::string::npos ? std::nullopt : parse_real(trim(std::string_view(item).substr(0, slash)));
    const auto q = slash == std::string::npos ? std::nullopt : parse_real(trim(std::string_view(item).substr(slash + 1)));
    if (!p || !q) throw UsageError("--pq-points expects p/q pairs separated by commas");
    out.emplace_back(*p, *q);
  }
  return out;
}

std::vector<double> grid_or(const std::optional<std::string>& flag, const char* desk, const char* full,
                            bool use_full) {
  return parse_grid(flag ? *flag : (use_full ? full : desk));
}

int run_experiment(const RunConfig& cfg) {
  const std::uint64_t seed = resolve_seed(cfg);
  SweepOptions base;
  base.seed = seed;
  base.instances = cfg.instances;
  base.jobs = cfg.jobs;
  base.nodes = cfg.n;
  base.recovery_threshold = cfg.recovery_threshold;

  OverlapOptions overlap;
  static_cast<SweepOptions&>(overlap) = base;
  overlap.intra = cfg.intra.value_or(0.9);
  overlap.inter = cfg.inter.value_or(0.1);

  SweepResult result;
  if (cfg.experiment == "er") {
    ErOptions opts;
    static_cast<SweepOptions&>(opts) = base;
    opts.supra_weight = cfg.supra_weight.value_or(1.0);
    opts.pairwise = cfg.pairwise;
    const auto ps = grid_or(cfg.p_grid, "0.05:0.5:0.05", "0.05:0.5:0.01", cfg.full);
    const auto ks = to_counts(grid_or(cfg.k_grid, "2,3,5", "2:10:1", cfg.full));
    if (cfg.er_model != "dynamic") result = run_er_experiment(ps, ks, Model::kSupra, opts);
    if (cfg.er_model != "supra") {
      SweepResult dyn = run_er_experiment(ps, ks, Model::kDynamic, opts);
      result.param_names = dyn.param_names;
      result.rows.insert(result.rows.end(), dyn.rows.begin(), dyn.rows.end());
    }
  } else if (cfg.experiment == "fixed-sbm") {
    const auto ps = grid_or(cfg.p_grid, "0:1:0.1", "0:1:0.1", cfg.full);
    const auto ws = grid_or(cfg.w_grid, "0,0.5,1,2,5", "0:5:0.1", cfg.full);
    const auto ks = to_counts(grid_or(cfg.k_grid, "2,4", "2:10:1", cfg.full));
    result = run_fixed_sbm_experiment(ps, ws, ks, base);
  } else if (cfg.experiment == "overlap") {
    const auto ps = grid_or(cfg.p_grid, "0:1:0.1", "0:1:0.05", cfg.full);
    const auto qs = grid_or(cfg.q_grid, "0:1:0.1", "0:1:0.05", cfg.full);
    result = run_overlap_experiment(ps, qs, overlap);
  } else if (cfg.experiment == "overlap-supra") {
    result = run_overlap_supra_experiment(grid_or(cfg.w_grid, "0.5:5:0.5", "0.1:5:0.1", cfg.full), overlap);
  } else {
    const auto ws = grid_or(cfg.w_grid, "1,2,5,10,25,50", "1:50:1", cfg.full);
    const auto pq = parse_pq_points(cfg.pq_points.value_or("0.5/0.5"));
    result = run_overlap_kway(ws, pq, overlap, cfg.clusters == 2 ? 4 : cfg.clusters);
  }

  {
    auto out = open_output(cfg.output);
    result.write_csv(out);
  }
  if (cfg.aggregate) {
    auto out = open_output(*cfg.aggregate);
    result.write_aggregate_csv(out);
  }
  if (cfg.verbose) std::cerr << "wrote " << result.rows.size() << " rows to " << cfg.output << '\n';
  return 0;
}

int run_heatmap(const RunConfig& cfg) {
  std::ifstream in(cfg.results);
  if (!in) throw Error(module::kExperiments, "cannot open '" + cfg.results.string() + "'");
  const SweepResult result = SweepResult::read_csv(in);
  std::map<std::string, std::string> filters;
  for (const auto& f : cfg.filters) {
    const auto eq = f.find('=');
    if (eq == std::string::npos) throw UsageError("--filter expects name=value");
    filters[f.substr(0, eq)] = f.substr(eq + 1);
  }
  const HeatmapGrid grid = build_heatmap(result, cfg.x, cfg.y, cfg.metric, filters);
  if (cfg.output.empty()) {
    grid.write_csv(std::cout);
  } else {
    auto out = open_output(cfg.output);
    grid.write_csv(out);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectral clustering for multiplex networks"};
  app.require_subcommand(1);
  RunConfig cfg;
  app.add_flag("-v,--verbose", cfg.verbose, "Print progress to stderr");

  auto add_seed = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed,
                    "Master seed (default: $MXSPEC_SEED, else 0xD15EA5E)");
  };
  auto add_model = [&](CLI::App* sub, std::vector<std::string> models) {
    sub->add_option("--model", cfg.model, "Operator model")->required()->check(CLI::IsMember(models));
    sub->add_option("--supra-weight", cfg.supra_weight, "Supra inter-layer weight w")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--coupling", cfg.coupling, "Dynamic coupling file (.cpl); default C = I")
        ->check(CLI::ExistingFile);
  };

  auto* gen = app.add_subcommand("generate", "Generate a synthetic multiplex network");
  gen->add_option("--type", cfg.type, "Network family")
      ->required()
      ->check(CLI::IsMember({"er", "sbm-fixed", "sbm-overlap"}));
  gen->add_option("--n", cfg.n, "Nodes per layer")->check(CLI::PositiveNumber);
  gen->add_option("--k", cfg.k, "Layers")->check(CLI::PositiveNumber);
  gen->add_option("--p", cfg.p, "ER wiring probability (sbm-fixed: inter probability if --inter absent)")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--intra", cfg.intra, "Intra-cluster probability (sbm-overlap, default 0.9)")
      ->check(CLI::Range(0.0, 1.0));
  gen->add_option("--inter", cfg.inter, "Inter-cluster probability (sbm-*, overlap default 0.1)")
      ->check(CLI::Range(0.0, 1.0));
  add_seed(gen);
  gen->add_option("--out", cfg.output, "Output .mpx path; planted sidecar goes to <out>.planted.csv")
      ->required();

  auto* cluster = app.add_subcommand("cluster", "Spectral clustering of a network");
  cluster->add_option("--input", cfg.input, "Input .mpx network")->required();
  add_model(cluster, {"supra", "dynamic", "aggregate"});
  cluster->add_option("--clusters", cfg.clusters, "Cluster count (2: Fiedler split, >2: k-means)");
  add_seed(cluster);
  cluster->add_option("--out", cfg.output, "Output assignment CSV")->required();

  auto* cut = app.add_subcommand("cut", "Cut cost of a partition and its decomposition");
  cut->add_option("--input", cfg.input, "Input .mpx network")->required();
  add_model(cut, {"supra", "dynamic"});
  cut->add_option("--partition", cfg.partition, "Assignment CSV with copy_index and cluster columns")
      ->required();
  cut->add_flag("--decompose", cfg.decompose, "Also print the per-layer decomposition");

  auto* exp = app.add_subcommand("experiment", "Run a seeded parameter sweep");
  exp->add_option("name", cfg.experiment, "Experiment")
      ->required()
      ->check(CLI::IsMember({"er", "fixed-sbm", "overlap", "overlap-supra", "overlap-kway"}));
  add_seed(exp);
  exp->add_option("--instances", cfg.instances, "Instances per parameter point")->check(CLI::PositiveNumber);
  exp->add_option("--jobs", cfg.jobs, "Worker threads (default: all cores)");
  exp->add_option("--n", cfg.n, "Nodes per layer (default 100)")->check(CLI::PositiveNumber);
  exp->add_flag("--full", cfg.full, "Use the full-scale default grids");
  exp->add_option("--p-grid", cfg.p_grid, "p values: a,b,c or start:stop:step");
  exp->add_option("--q-grid", cfg.q_grid, "q values (overlap)");
  exp->add_option("--k-grid", cfg.k_grid, "Layer counts (er, fixed-sbm)");
  exp->add_option("--w-grid", cfg.w_grid, "Supra weights (fixed-sbm, overlap-supra, overlap-kway)");
  exp->add_option("--pq-points", cfg.pq_points, "Dynamic p/q pairs for overlap-kway, e.g. 0.5/0.5,0.3/0.3");
  exp->add_option("--model", cfg.er_model, "Models for er")->check(CLI::IsMember({"supra", "dynamic", "both"}));
  exp->add_option("--supra-weight", cfg.supra_weight, "Supra weight for er (default 1)")
      ->check(CLI::NonNegativeNumber);
  exp->add_flag("--pairwise", cfg.pairwise, "er: also report pairwise co-clustering of copies");
  exp->add_option("--intra", cfg.intra, "Overlap SBM intra probability (default 0.9)")->check(CLI::Range(0.0, 1.0));
  exp->add_option("--inter", cfg.inter, "Overlap SBM inter probability (default 0.1)")->check(CLI::Range(0.0, 1.0));
  exp->add_option("--recovery-threshold", cfg.recovery_threshold,
                  "Agreement counted as recovery (default 1: exact match)")
      ->check(CLI::Range(0.0, 1.0));
  exp->add_option("--clusters", cfg.clusters, "overlap-kway cluster count (default 4)");
  exp->add_option("--out", cfg.output, "Instance-level results CSV")->required();
  exp->add_option("--aggregate", cfg.aggregate, "Per-point means CSV");

  auto* heat = app.add_subcommand("heatmap", "Pivot sweep results into a dense grid CSV");
  heat->add_option("results", cfg.results, "Results CSV from `experiment`")->required();
  heat->add_option("--x", cfg.x, "Parameter on the x axis")->required();
  heat->add_option("--y", cfg.y, "Parameter on the y axis")->required();
  heat->add_option("--metric", cfg.metric, "Metric (regime: most frequent code)")->required();
  heat->add_option("--filter", cfg.filters, "Keep rows with param=value (repeatable)");
  heat->add_option("--out", cfg.output, "Output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[cli]: " << e.what() << '\n';
    return 1;
  }

  try {
    if (gen->parsed()) return run_generate(cfg);
    if (cluster->parsed()) return run_cluster(cfg);
    if (cut->parsed()) return run_cut(cfg);
    if (exp->parsed()) return run_experiment(cfg);
    return run_heatmap(cfg);
  } catch (const UsageError& e) {
    std::cerr << "error[cli]: " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "error[" << e.module() << "]: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error[cli]: " << e.what() << '\n';
    return 2;
  }
}
