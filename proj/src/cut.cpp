#include "mxspec/cut.hpp"

#include <cmath>
#include <algorithm>
#include <cstdint>
#include <limits>

#include "mxspec/error.hpp"

namespace mxspec {
namespace {

void require_bipartition(const Partition& part, std::size_t size) {
  if (part.size() != size) {
    throw Error(module::kCut, "partition has " + std::to_string(part.size()) + " labels, expected " +
                                  std::to_string(size));
  }
  for (int l : part.labels) {
    if (l != 0 && l != 1) throw Error(module::kCut, "expected a bipartition with labels 0 and 1");
  }
}

Vector layer_slice(const Vector& s, std::size_t layer, std::size_t n) {
  return s.segment(static_cast<Eigen::Index>(layer * n), static_cast<Eigen::Index>(n));
}

std::string pair_name(const char* base, std::size_t a) {
  return std::string(base) + "[" + std::to_string(a) + "]";
}

std::string pair_name(const char* base, std::size_t a, std::size_t b) {
  return std::string(base) + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}

}  // namespace

Vector indicator(const Partition& part) {
  Vector s(static_cast<Eigen::Index>(part.size()));
  for (std::size_t i = 0; i < part.size(); ++i) {
    s(static_cast<Eigen::Index>(i)) = part.labels[i] == 0 ? 1.0 : -1.0;
  }
  return s;
}

double cut_cost(const Matrix& adjacency, const Partition& part) {
  if (part.size() != static_cast<std::size_t>(adjacency.rows())) {
    throw Error(module::kCut, "partition length does not match the operator");
  }
  double total = 0.0;
  for (Eigen::Index q = 0; q < adjacency.cols(); ++q) {
    for (Eigen::Index p = 0; p < adjacency.rows(); ++p) {
      if (p != q && part.labels[static_cast<std::size_t>(p)] != part.labels[static_cast<std::size_t>(q)]) {
        total += adjacency(p, q);
      }
    }
  }
  return total;
}

double cut_cost(const SupraOperator& op, const Partition& part) {
  return cut_cost(op.adjacency(), part);
}

double quadratic_form(const Matrix& laplacian, const Partition& part) {
  require_bipartition(part, static_cast<std::size_t>(laplacian.rows()));
  const Vector s = indicator(part);
  return s.dot(laplacian * s);
}

double CutReport::decomposition_sum() const {
  double sum = 0.0;
  for (const auto& t : decomposition) sum += t.value;
  return sum;
}

CutReport decompose_supra(const MultiplexNetwork& net, double w, const Partition& part) {
  const std::size_t n = net.nodes();
  const std::size_t k = net.layer_count();
  require_bipartition(part, n * k);
  const SupraOperator op = build_supra(net, w);
  const Vector s = indicator(part);

  CutReport report;
  report.normalization = "terms sum to s^T L s; clique = k^2 n w; alignment = -w |sum_a s_a|^2";
  for (std::size_t a = 0; a < k; ++a) {
    const Vector sa = layer_slice(s, a, n);
    report.decomposition.push_back(
        {pair_name("intra", a), sa.dot(laplacian(symmetrize(net.layer(a))) * sa)});
  }
  report.decomposition.push_back(
      {"clique", static_cast<double>(k * k * n) * w});
  Vector layer_sum = Vector::Zero(static_cast<Eigen::Index>(n));
  for (std::size_t a = 0; a < k; ++a) layer_sum += layer_slice(s, a, n);
  report.decomposition.push_back({"alignment", -w * layer_sum.squaredNorm()});
  report.total = cut_cost(op, part);
  report.quadratic_form = 0.5 * quadratic_form(op.laplacian(), part);
  return report;
}

CutReport decompose_dynamic(const MultiplexNetwork& net, const DynamicCoupling& coupling,
                            const Partition& part) {
  const std::size_t n = net.nodes();
  const std::size_t k = net.layer_count();
  require_bipartition(part, n * k);
  const SupraOperator op = build_dynamic(net, coupling);
  const Vector s = indicator(part);

  auto b_block = [&](std::size_t a, std::size_t b) -> Matrix {
    Matrix forward = coupling.diagonal(a, b).asDiagonal() * net.layer(b);
    Matrix backward = coupling.diagonal(b, a).asDiagonal() * net.layer(a);
    return forward + backward.transpose();
  };

  CutReport report;
  report.normalization =
      "terms sum to s^T L s; operator blocks are B/2; intra uses L of B_aa/2; inter = (M_ab - "
      "s_a^T B_ab s_b)/2";
  for (std::size_t a = 0; a < k; ++a) {
    const Vector sa = layer_slice(s, a, n);
    const Matrix half = 0.5 * b_block(a, a);
    report.decomposition.push_back({pair_name("intra", a), sa.dot(laplacian(half) * sa)});
  }
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      const Matrix bab = b_block(a, b);
      const double total_weight = bab.sum();
      const double aligned = layer_slice(s, a, n).dot(bab * layer_slice(s, b, n));
      report.decomposition.push_back({pair_name("inter", a, b), 0.5 * (total_weight - aligned)});
    }
  }
  report.total = cut_cost(op, part);
  report.quadratic_form = 0.5 * quadratic_form(op.laplacian(), part);
  return report;
}

MinCut brute_force_min_cut(const Matrix& adjacency) {
  const auto m = static_cast<std::size_t>(adjacency.rows());
  if (m > kBruteForceLimit) {
    throw Error(module::kCut, "brute-force minimum cut is limited to " +
                                  std::to_string(kBruteForceLimit) + " elements, got " +
                                  std::to_string(m));
  }
  if (m < 2) throw Error(module::kCut, "brute-force minimum cut needs at least two elements");

  // Upper-triangle pair weights, both orientations folded together.
  std::vector<double> pair(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      pair[i * m + j] = adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) +
                        adjacency(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
    }
  }
  const double scale = std::max(1.0, adjacency.cwiseAbs().sum());
  const double tie = 1e-12 * scale;

  // Bit i of `mask` is the label of element i; element 0 is fixed to 0. The
  // label vector ordering (label[0], label[1], ...) is lexicographic in the
  // bit-reversed mask, so compare label vectors explicitly on ties.
  auto lex_less = [m](std::uint32_t x, std::uint32_t y) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto bx = (x >> i) & 1u;
      const auto by = (y >> i) & 1u;
      if (bx != by) return bx < by;
    }
    return false;
  };

  const std::uint32_t end = 1u << m;
  std::uint32_t best_mask = 0;
  double best = std::numeric_limits<double>::infinity();
  for (std::uint32_t mask = 2; mask < end; mask += 2) {
    double cost = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const auto li = (mask >> i) & 1u;
      for (std::size_t j = i + 1; j < m; ++j) {
        if (li != ((mask >> j) & 1u)) cost += pair[i * m + j];
      }
    }
    if (cost < best - tie || (std::abs(cost - best) <= tie && lex_less(mask, best_mask))) {
      best = cost;
      best_mask = mask;
    }
  }

  MinCut out;
  out.partition.clusters = 2;
  out.partition.labels.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.partition.labels[i] = static_cast<int>((best_mask >> i) & 1u);
  out.cost = cut_cost(adjacency, out.partition);
  return out;
}

MinCut brute_force_min_cut(const SupraOperator& op) { return brute_force_min_cut(op.adjacency()); }

}  // namespace mxspec
