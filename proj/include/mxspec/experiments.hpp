#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mxspec/network.hpp"
#include "mxspec/operators.hpp"

namespace mxspec {

/// Default master seed when none is given.
inline constexpr std::uint64_t kDefaultSeed = 0xD15EA5E;

/// One instance-level measurement.
struct SweepRow {
  std::string experiment;
  /// Values aligned with SweepResult::param_names; empty when a parameter
  /// does not apply to the row (e.g. `w` for the dynamic model).
  std::vector<std::string> params;
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::string metric;
  double value = 0.0;
};

struct AggregateRow {
  std::string experiment;
  std::vector<std::string> params;
  std::string metric;
  double mean = 0.0;
  std::size_t count = 0;
};

struct SweepResult {
  std::vector<std::string> param_names;
  std::vector<SweepRow> rows;

  /// Mean per (experiment, parameter point, metric), in first-appearance order.
  std::vector<AggregateRow> aggregate() const;

  /// Columns: experiment, param:<name>..., instance, seed, metric, value.
  void write_csv(std::ostream& out) const;
  /// Columns: experiment, param:<name>..., metric, mean, count.
  void write_aggregate_csv(std::ostream& out) const;
  static SweepResult read_csv(std::istream& in);
};

enum class RegimeLabel { kLayersSplit = 0, kLayer1 = 1, kLayer2 = 2, kOther = 3 };

std::string_view to_string(RegimeLabel regime) noexcept;

/// Fraction of nodes whose k copies all carry the same label.
double fraction_copies_together(const Partition& part, std::size_t n, std::size_t k);

/// Mean over nodes of the fraction of copy pairs (a < b) sharing a label.
double fraction_copy_pairs_together(const Partition& part, std::size_t n, std::size_t k);

/// Exact match (up to relabeling) of a two-layer bipartition against the
/// layer split, then the node-level planted partitions lifted to copies.
RegimeLabel classify_regime(const Partition& part, const Partition& planted1,
                            const Partition& planted2, std::size_t k);

struct SweepOptions {
  std::uint64_t seed = kDefaultSeed;
  std::size_t instances = 20;
  /// Worker threads; 0 means available hardware parallelism.
  unsigned jobs = 0;
  /// Nodes per layer.
  std::size_t nodes = 100;
  /// A planted partition counts as recovered when the matched agreement
  /// reaches this fraction; 1 means exact match up to relabeling.
  double recovery_threshold = 1.0;
};

struct ErOptions : SweepOptions {
  double supra_weight = 1.0;
  /// Also report the pairwise co-clustering fraction.
  bool pairwise = false;
};

/// Erdős–Rényi layers, two-way Fiedler split, fraction of nodes with all
/// copies together. The dynamic model uses C^{a,b} = I.
SweepResult run_er_experiment(std::span<const double> p_grid, std::span<const std::size_t> k_grid,
                              Model model, const ErOptions& options);

/// Identical planted halves on every layer (intra 1, inter p). Dynamic model
/// rows use C = I and carry no `w`; supra rows sweep `w_grid`. A row
/// records 1 when the two-way split matches the planted partition exactly.
SweepResult run_fixed_sbm_experiment(std::span<const double> p_grid,
                                     std::span<const double> w_grid,
                                     std::span<const std::size_t> k_grid,
                                     const SweepOptions& options);

struct OverlapOptions : SweepOptions {
  double intra = 0.9;
  double inter = 0.1;
};

/// Two layers with half-overlapping communities; dynamic coupling
/// C^{1,2} = pI, C^{2,1} = qI, C^{1,1} = (1-p)I, C^{2,2} = (1-q)I.
SweepResult run_overlap_experiment(std::span<const double> p_grid, std::span<const double> q_grid,
                                   const OverlapOptions& options);

/// Same networks, supra operator with weight w.
SweepResult run_overlap_supra_experiment(std::span<const double> w_grid,
                                         const OverlapOptions& options);

/// Four-way unnormalized spectral clustering on the overlap networks, for
/// supra weights and dynamic (p, q) couplings. `recovered` is 1 when the
/// result equals layer x planted-community up to relabeling.
SweepResult run_overlap_kway(std::span<const double> w_grid,
                             std::span<const std::pair<double, double>> pq_points,
                             const OverlapOptions& options, int clusters = 4);

/// Dense x-by-y grid of one metric. For `regime` each cell is the most
/// frequent regime code (ties to the smaller code); otherwise the mean.
/// Rows whose parameter values differ from `filters` are skipped.
struct HeatmapGrid {
  std::string x_name;
  std::string y_name;
  std::vector<double> xs;
  std::vector<double> ys;
  /// values[y][x]; NaN where no rows fall in the cell.
  std::vector<std::vector<double>> values;

  void write_csv(std::ostream& out) const;
};

HeatmapGrid build_heatmap(const SweepResult& result, const std::string& x, const std::string& y,
                          const std::string& metric,
                          const std::map<std::string, std::string>& filters = {});

/// Runs fn(i) for i in [0, count) on up to `jobs` threads.
void parallel_for(std::size_t count, unsigned jobs, const std::function<void(std::size_t)>& fn);

/// Parses "a,b,c" or "start:stop:step" (inclusive, tolerant to rounding).
std::vector<double> parse_grid(const std::string& spec);

}  // namespace mxspec
