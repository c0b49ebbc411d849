#include "mxspec/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <istream>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "mxspec/error.hpp"
#include "mxspec/generators.hpp"
#include "mxspec/rng.hpp"
#include "mxspec/spectral.hpp"
#include "mxspec/text.hpp"

namespace mxspec {
namespace {

using Metrics = std::vector<std::pair<std::string, double>>;

struct Job {
  std::vector<std::string> params;
  std::size_t instance;
  std::uint64_t seed;
};

SweepResult run_jobs(const std::string& experiment, std::vector<std::string> param_names,
                     const std::vector<Job>& jobs, unsigned threads,
                     const std::function<Metrics(std::size_t)>& eval) {
  std::vector<Metrics> results(jobs.size());
  parallel_for(jobs.size(), threads, [&](std::size_t i) { results[i] = eval(i); });
  SweepResult out;
  out.param_names = std::move(param_names);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    for (auto& [metric, value] : results[i]) {
      out.rows.push_back({experiment, jobs[i].params, jobs[i].instance, jobs[i].seed, metric, value});
    }
  }
  return out;
}

void check_options(const SweepOptions& options) {
  if (options.instances == 0) throw Error(module::kExperiments, "instances must be positive");
  if (!(options.recovery_threshold > 0.0 && options.recovery_threshold <= 1.0)) {
    throw Error(module::kExperiments, "recovery threshold must lie in (0, 1]");
  }
}

double recovered(const PartitionMatch& match, const SweepOptions& options) {
  if (options.recovery_threshold >= 1.0) return match.equal_up_to_relabel ? 1.0 : 0.0;
  return match.agreement >= options.recovery_threshold ? 1.0 : 0.0;
}

Partition layer_split(std::size_t n) {
  Partition part;
  part.clusters = 2;
  part.labels.assign(2 * n, 0);
  std::fill(part.labels.begin() + static_cast<std::ptrdiff_t>(n), part.labels.end(), 1);
  return part;
}

Metrics regime_metrics(RegimeLabel regime, bool degenerate) {
  const auto code = static_cast<int>(regime);
  return {{"regime", static_cast<double>(code)},
          {"layers_split", code == 0 ? 1.0 : 0.0},
          {"layer1", code == 1 ? 1.0 : 0.0},
          {"layer2", code == 2 ? 1.0 : 0.0},
          {"other", code == 3 ? 1.0 : 0.0},
          {"degenerate", degenerate ? 1.0 : 0.0}};
}

std::uint64_t overlap_seed(const OverlapOptions& options, std::size_t instance) {
  return derive_seed(options.seed, "overlap-network",
                     {real_tag(options.intra), real_tag(options.inter), options.nodes, instance});
}

DynamicCoupling overlap_coupling(std::size_t n, double p, double q) {
  Matrix weights(2, 2);
  weights << 1.0 - p, p, q, 1.0 - q;
  return DynamicCoupling::uniform(n, weights);
}

std::vector<std::string> split_commas(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    out.emplace_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double rounded(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return *parse_real(buf);
}

}  // namespace

std::string_view to_string(RegimeLabel regime) noexcept {
  switch (regime) {
    case RegimeLabel::kLayersSplit: return "layers_split";
    case RegimeLabel::kLayer1: return "layer1";
    case RegimeLabel::kLayer2: return "layer2";
    case RegimeLabel::kOther: break;
  }
  return "other";
}

void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, count));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> workers;
    workers.reserve(jobs);
    for (unsigned t = 0; t < jobs; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next = count;
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> parse_grid(const std::string& spec) {
  const auto text = trim(spec);
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const auto pos = text.find(':', start);
      const auto token = text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start);
      const auto v = parse_real(trim(token));
      if (!v) throw Error(module::kExperiments, "malformed grid '" + spec + "'");
      parts.push_back(*v);
      if (pos == std::string_view::npos) break;
      start = pos + 1;
    }
    if (parts.size() != 3 || !(parts[2] > 0.0) || parts[1] < parts[0]) {
      throw Error(module::kExperiments, "grid range must be start:stop:step with step > 0");
    }
    const auto steps = static_cast<std::size_t>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
    for (std::size_t i = 0; i <= steps; ++i) out.push_back(rounded(parts[0] + static_cast<double>(i) * parts[2]));
    return out;
  }
  for (const auto& token : split_commas(text)) {
    const auto v = parse_real(trim(token));
    if (!v) throw Error(module::kExperiments, "malformed grid '" + spec + "'");
    out.push_back(*v);
  }
  return out;
}

std::vector<AggregateRow> SweepResult::aggregate() const {
  std::vector<AggregateRow> out;
  std::map<std::tuple<std::string, std::vector<std::string>, std::string>, std::size_t> slot;
  std::vector<double> sums;
  for (const auto& row : rows) {
    auto key = std::make_tuple(row.experiment, row.params, row.metric);
    auto [it, inserted] = slot.emplace(std::move(key), out.size());
    if (inserted) {
      out.push_back({row.experiment, row.params, row.metric, 0.0, 0});
      sums.push_back(0.0);
    }
    sums[it->second] += row.value;
    ++out[it->second].count;
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].mean = sums[i] / static_cast<double>(out[i].count);
  return out;
}

void SweepResult::write_csv(std::ostream& out) const {
  out << "experiment";
  for (const auto& name : param_names) out << ",param:" << name;
  out << ",instance,seed,metric,value\n";
  for (const auto& row : rows) {
    out << row.experiment;
    for (const auto& p : row.params) out << ',' << p;
    out << ',' << row.instance << ',' << row.seed << ',' << row.metric << ',' << format_real(row.value) << '\n';
  }
}

void SweepResult::write_aggregate_csv(std::ostream& out) const {
  out << "experiment";
  for (const auto& name : param_names) out << ",param:" << name;
  out << ",metric,mean,count\n";
  for (const auto& row : aggregate()) {
    out << row.experiment;
    for (const auto& p : row.params) out << ',' << p;
    out << ',' << row.metric << ',' << format_real(row.mean) << ',' << row.count << '\n';
  }
}

SweepResult SweepResult::read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(module::kExperiments, 1, "empty results file");
  const auto header = split_commas(trim(line));
  if (header.size() < 5 || header.front() != "experiment" ||
      header[header.size() - 4] != "instance" || header[header.size() - 3] != "seed" ||
      header[header.size() - 2] != "metric" || header.back() != "value") {
    throw ParseError(module::kExperiments, 1, "not a sweep results header");
  }
  SweepResult result;
  for (std::size_t i = 1; i + 4 < header.size(); ++i) {
    if (header[i].rfind("param:", 0) != 0) throw ParseError(module::kExperiments, 1, "unexpected column " + header[i]);
    result.param_names.push_back(header[i].substr(6));
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty()) continue;
    auto fields = split_commas(body);
    if (fields.size() != header.size()) throw ParseError(module::kExperiments, line_no, "wrong column count");
    SweepRow row;
    row.experiment = fields[0];
    row.params.assign(fields.begin() + 1, fields.end() - 4);
    const auto instance = parse_integer(fields[fields.size() - 4]);
    const auto value = parse_real(fields.back());
    std::uint64_t seed = 0;
    std::istringstream seed_in(fields[fields.size() - 3]);
    if (!instance || *instance < 0 || !value || !(seed_in >> seed)) {
      throw ParseError(module::kExperiments, line_no, "malformed row");
    }
    row.instance = static_cast<std::size_t>(*instance);
    row.seed = seed;
    row.metric = fields[fields.size() - 2];
    row.value = *value;
    result.rows.push_back(std::move(row));
  }
  return result;
}

double fraction_copies_together(const Partition& part, std::size_t n, std::size_t k) {
  if (part.size() != n * k) throw Error(module::kExperiments, "partition length is not n*k");
  std::size_t together = 0;
  for (std::size_t i = 0; i < n; ++i) {
    bool same = true;
    for (std::size_t a = 1; a < k && same; ++a) same = part.labels[a * n + i] == part.labels[i];
    together += same ? 1 : 0;
  }
  return static_cast<double>(together) / static_cast<double>(n);
}

double fraction_copy_pairs_together(const Partition& part, std::size_t n, std::size_t k) {
  if (part.size() != n * k) throw Error(module::kExperiments, "partition length is not n*k");
  if (k < 2) return 1.0;
  const double pairs = static_cast<double>(k * (k - 1) / 2);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t same = 0;
    for (std::size_t a = 0; a < k; ++a) {
      for (std::size_t b = a + 1; b < k; ++b) same += part.labels[a * n + i] == part.labels[b * n + i] ? 1 : 0;
    }
    total += static_cast<double>(same) / pairs;
  }
  return total / static_cast<double>(n);
}

RegimeLabel classify_regime(const Partition& part, const Partition& planted1,
                            const Partition& planted2, std::size_t k) {
  if (k != 2) throw Error(module::kExperiments, "regime classification is defined for two layers");
  const std::size_t n = planted1.size();
  if (planted2.size() != n || part.size() != 2 * n) {
    throw Error(module::kExperiments, "partition sizes do not match a two-layer network");
  }
  if (match_partitions(part, layer_split(n)).equal_up_to_relabel) return RegimeLabel::kLayersSplit;
  if (match_partitions(part, lift_to_copies(planted1, 2)).equal_up_to_relabel) return RegimeLabel::kLayer1;
  if (match_partitions(part, lift_to_copies(planted2, 2)).equal_up_to_relabel) return RegimeLabel::kLayer2;
  return RegimeLabel::kOther;
}

SweepResult run_er_experiment(std::span<const double> p_grid, std::span<const std::size_t> k_grid,
                              Model model, const ErOptions& options) {
  check_options(options);
  struct Point { double p; std::size_t k; };
  std::vector<Job> jobs;
  std::vector<Point> points;
  for (double p : p_grid) {
    for (std::size_t k : k_grid) {
      for (std::size_t inst = 0; inst < options.instances; ++inst) {
        const auto seed = derive_seed(options.seed, "er", {real_tag(p), k, options.nodes, inst});
        jobs.push_back({{format_real(p), std::to_string(k), std::string(to_string(model))}, inst, seed});
        points.push_back({p, k});
      }
    }
  }
  const std::size_t n = options.nodes;
  return run_jobs("er", {"p", "k", "model"}, jobs, options.jobs, [&](std::size_t i) {
    const auto [p, k] = points[i];
    const MultiplexNetwork net = gen_er_multiplex(n, k, p, jobs[i].seed);
    const SupraOperator op = model == Model::kSupra
                                 ? build_supra(net, options.supra_weight)
                                 : build_dynamic(net, DynamicCoupling::identity(n, k));
    const Bipartition split = fiedler_bipartition(op.laplacian());
    Metrics m{{"fraction_together", fraction_copies_together(split.partition, n, k)}};
    if (options.pairwise) m.emplace_back("fraction_pairwise", fraction_copy_pairs_together(split.partition, n, k));
    m.emplace_back("degenerate", split.degenerate ? 1.0 : 0.0);
    return m;
  });
}

SweepResult run_fixed_sbm_experiment(std::span<const double> p_grid, std::span<const double> w_grid,
                                     std::span<const std::size_t> k_grid,
                                     const SweepOptions& options) {
  check_options(options);
  struct Point { double p; std::size_t k; Model model; double w; };
  std::vector<Job> jobs;
  std::vector<Point> points;
  auto add = [&](double p, std::size_t k, Model model, double w, std::string w_text) {
    for (std::size_t inst = 0; inst < options.instances; ++inst) {
      const auto seed = derive_seed(options.seed, "fixed-sbm", {real_tag(p), k, options.nodes, inst});
      jobs.push_back({{format_real(p), std::to_string(k), std::string(to_string(model)), w_text}, inst, seed});
      points.push_back({p, k, model, w});
    }
  };
  for (double p : p_grid) {
    for (std::size_t k : k_grid) {
      add(p, k, Model::kDynamic, 0.0, "");
      for (double w : w_grid) add(p, k, Model::kSupra, w, format_real(w));
    }
  }
  const std::size_t n = options.nodes;
  return run_jobs("fixed-sbm", {"p", "k", "model", "w"}, jobs, options.jobs, [&](std::size_t i) {
    const Point& pt = points[i];
    const PlantedMultiplex g = gen_fixed_sbm_multiplex(n, pt.k, pt.p, jobs[i].seed);
    const SupraOperator op = pt.model == Model::kSupra
                                 ? build_supra(g.network, pt.w)
                                 : build_dynamic(g.network, DynamicCoupling::identity(n, pt.k));
    const Bipartition split = fiedler_bipartition(op.laplacian());
    const PartitionMatch match = match_partitions(split.partition, g.planted);
    return Metrics{{"recovered", recovered(match, options)},
                   {"agreement", match.agreement},
                   {"degenerate", split.degenerate ? 1.0 : 0.0}};
  });
}

SweepResult run_overlap_experiment(std::span<const double> p_grid, std::span<const double> q_grid,
                                   const OverlapOptions& options) {
  check_options(options);
  std::vector<Job> jobs;
  std::vector<std::pair<double, double>> points;
  for (double p : p_grid) {
    for (double q : q_grid) {
      if (!(p >= 0.0 && p <= 1.0 && q >= 0.0 && q <= 1.0)) {
        throw Error(module::kExperiments, "overlap couplings p and q must lie in [0, 1]");
      }
      for (std::size_t inst = 0; inst < options.instances; ++inst) {
        jobs.push_back({{format_real(p), format_real(q)}, inst, overlap_seed(options, inst)});
        points.emplace_back(p, q);
      }
    }
  }
  const std::size_t n = options.nodes;
  return run_jobs("overlap", {"p", "q"}, jobs, options.jobs, [&](std::size_t i) {
    const auto [p, q] = points[i];
    const OverlapMultiplex g = gen_overlap_multiplex(n, options.intra, options.inter, jobs[i].seed);
    const SupraOperator op = build_dynamic(g.network, overlap_coupling(n, p, q));
    const Bipartition split = fiedler_bipartition(op.laplacian());
    return regime_metrics(classify_regime(split.partition, g.planted1, g.planted2, 2), split.degenerate);
  });
}

SweepResult run_overlap_supra_experiment(std::span<const double> w_grid, const OverlapOptions& options) {
  check_options(options);
  std::vector<Job> jobs;
  std::vector<double> points;
  for (double w : w_grid) {
    for (std::size_t inst = 0; inst < options.instances; ++inst) {
      jobs.push_back({{format_real(w)}, inst, overlap_seed(options, inst)});
      points.push_back(w);
    }
  }
  const std::size_t n = options.nodes;
  return run_jobs("overlap-supra", {"w"}, jobs, options.jobs, [&](std::size_t i) {
    const OverlapMultiplex g = gen_overlap_multiplex(n, options.intra, options.inter, jobs[i].seed);
    const Bipartition split = fiedler_bipartition(build_supra(g.network, points[i]).laplacian());
    return regime_metrics(classify_regime(split.partition, g.planted1, g.planted2, 2), split.degenerate);
  });
}

SweepResult run_overlap_kway(std::span<const double> w_grid,
                             std::span<const std::pair<double, double>> pq_points,
                             const OverlapOptions& options, int clusters) {
  check_options(options);
  struct Point { Model model; double w, p, q; };
  std::vector<Job> jobs;
  std::vector<Point> points;
  for (double w : w_grid) {
    for (std::size_t inst = 0; inst < options.instances; ++inst) {
      jobs.push_back({{"supra", format_real(w), "", ""}, inst, overlap_seed(options, inst)});
      points.push_back({Model::kSupra, w, 0.0, 0.0});
    }
  }
  for (const auto& [p, q] : pq_points) {
    for (std::size_t inst = 0; inst < options.instances; ++inst) {
      jobs.push_back({{"dynamic", "", format_real(p), format_real(q)}, inst, overlap_seed(options, inst)});
      points.push_back({Model::kDynamic, 0.0, p, q});
    }
  }
  const std::size_t n = options.nodes;
  return run_jobs("overlap-kway", {"model", "w", "p", "q"}, jobs, options.jobs, [&](std::size_t i) {
    const Point& pt = points[i];
    const OverlapMultiplex g = gen_overlap_multiplex(n, options.intra, options.inter, jobs[i].seed);
    const SupraOperator op = pt.model == Model::kSupra ? build_supra(g.network, pt.w)
                                                       : build_dynamic(g.network, overlap_coupling(n, pt.p, pt.q));
    const Partition part = spectral_kway(op.laplacian(), clusters, derive_seed(jobs[i].seed, "kway"));
    Partition planted;
    planted.clusters = 4;
    planted.labels.reserve(2 * n);
    for (int l : g.planted1.labels) planted.labels.push_back(l);
    for (int l : g.planted2.labels) planted.labels.push_back(2 + l);
    const PartitionMatch match = match_partitions(part, planted);
    return Metrics{{"recovered", recovered(match, options)},
                   {"agreement", match.agreement},
                   {"effective_clusters", static_cast<double>(part.effective_clusters())}};
  });
}

void HeatmapGrid::write_csv(std::ostream& out) const {
  out << y_name << '\\' << x_name;
  for (double x : xs) out << ',' << format_real(x);
  out << '\n';
  for (std::size_t r = 0; r < ys.size(); ++r) {
    out << format_real(ys[r]);
    for (double v : values[r]) {
      out << ',';
      if (!std::isnan(v)) out << format_real(v);
    }
    out << '\n';
  }
}

HeatmapGrid build_heatmap(const SweepResult& result, const std::string& x, const std::string& y,
                          const std::string& metric, const std::map<std::string, std::string>& filters) {
  auto column = [&](const std::string& name) {
    const auto it = std::find(result.param_names.begin(), result.param_names.end(), name);
    if (it == result.param_names.end()) throw Error(module::kExperiments, "no parameter named '" + name + "'");
    return static_cast<std::size_t>(it - result.param_names.begin());
  };
  const std::size_t xc = column(x);
  const std::size_t yc = column(y);
  std::vector<std::pair<std::size_t, std::string>> wanted;
  for (const auto& [name, value] : filters) wanted.emplace_back(column(name), value);

  std::map<std::pair<double, double>, std::vector<double>> cells;
  for (const auto& row : result.rows) {
    if (row.metric != metric) continue;
    bool keep = true;
    for (const auto& [c, v] : wanted) keep = keep && row.params[c] == v;
    if (!keep) continue;
    const auto xv = parse_real(row.params[xc]);
    const auto yv = parse_real(row.params[yc]);
    if (!xv || !yv) continue;
    cells[{*xv, *yv}].push_back(row.value);
  }
  if (cells.empty()) throw Error(module::kExperiments, "no rows for metric '" + metric + "'");

  HeatmapGrid grid{x, y, {}, {}, {}};
  for (const auto& [key, values] : cells) {
    grid.xs.push_back(key.first);
    grid.ys.push_back(key.second);
  }
  std::sort(grid.xs.begin(), grid.xs.end());
  grid.xs.erase(std::unique(grid.xs.begin(), grid.xs.end()), grid.xs.end());
  std::sort(grid.ys.begin(), grid.ys.end());
  grid.ys.erase(std::unique(grid.ys.begin(), grid.ys.end()), grid.ys.end());
  grid.values.assign(grid.ys.size(), std::vector<double>(grid.xs.size(), std::numeric_limits<double>::quiet_NaN()));
  for (const auto& [key, values] : cells) {
    const auto xi = static_cast<std::size_t>(std::lower_bound(grid.xs.begin(), grid.xs.end(), key.first) - grid.xs.begin());
    const auto yi = static_cast<std::size_t>(std::lower_bound(grid.ys.begin(), grid.ys.end(), key.second) - grid.ys.begin());
    double cell = 0.0;
    if (metric == "regime") {
      std::map<double, std::size_t> counts;
      for (double v : values) ++counts[v];
      std::size_t best = 0;
      for (const auto& [code, count] : counts) {
        if (count > best) {
          best = count;
          cell = code;
        }
      }
    } else {
      for (double v : values) cell += v;
      cell /= static_cast<double>(values.size());
    }
    grid.values[yi][xi] = cell;
  }
  return grid;
}

}  // namespace mxspec
