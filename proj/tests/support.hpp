#pragma once

// Test-only oracles: element-wise reimplementations that share no code with
// the library's block assembly.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "mxspec/network.hpp"

namespace oracle {

using mxspec::DynamicCoupling;
using mxspec::Matrix;
using mxspec::MultiplexNetwork;
using mxspec::Partition;

inline MultiplexNetwork random_network(std::mt19937_64& gen, std::size_t n, std::size_t k,
                                       double density = 0.5) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<Matrix> layers;
  for (std::size_t a = 0; a < k; ++a) {
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (i != j && u(gen) < density) m(i, j) = 0.1 + 2.0 * u(gen);
      }
    }
    layers.push_back(m);
  }
  return MultiplexNetwork(std::move(layers));
}

inline DynamicCoupling random_coupling(std::mt19937_64& gen, std::size_t n, std::size_t k,
                                       double zero_off_diagonal = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DynamicCoupling c(n, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        if (a != b && u(gen) < zero_off_diagonal) continue;
        c.set(a, b, i, u(gen));
      }
    }
  }
  return c;
}

inline Partition random_bipartition(std::mt19937_64& gen, std::size_t size) {
  Partition p;
  p.clusters = 2;
  p.labels.resize(size);
  for (auto& l : p.labels) l = static_cast<int>(gen() & 1U);
  p.degenerate = true;
  return p;
}

/// 𝔄 entry by entry: layer blocks ½(A+Aᵀ), copies of the same node joined by w.
inline Matrix supra_adjacency(const MultiplexNetwork& net, double w) {
  const std::size_t n = net.nodes(), k = net.layer_count();
  Matrix s = Matrix::Zero(n * k, n * k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          double v = 0.0;
          if (a == b) v = 0.5 * (net.layer(a)(i, j) + net.layer(a)(j, i));
          else if (i == j) v = w;
          s(a * n + i, b * n + j) = v;
        }
      }
    }
  }
  return s;
}

/// 𝔄 entry by entry: raw(a,i ; b,j) = c^{ab}_i A^b(i,j), then symmetrized.
inline Matrix dynamic_adjacency(const MultiplexNetwork& net, const DynamicCoupling& c) {
  const std::size_t n = net.nodes(), k = net.layer_count();
  auto raw = [&](std::size_t a, std::size_t i, std::size_t b, std::size_t j) {
    return c.at(a, b, i) * net.layer(b)(i, j);
  };
  Matrix s = Matrix::Zero(n * k, n * k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t b = 0; b < k; ++b)
        for (std::size_t j = 0; j < n; ++j)
          s(a * n + i, b * n + j) = 0.5 * (raw(a, i, b, j) + raw(b, j, a, i));
  return s;
}

inline Matrix laplacian(const Matrix& s) {
  Matrix l = Matrix::Zero(s.rows(), s.cols());
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      if (i == j) continue;
      l(i, j) = -s(i, j);
      l(i, i) += s(i, j);
    }
  }
  return l;
}

/// Sum of 𝔄_pq over ordered pairs (p, q) in different clusters.
inline double cut(const Matrix& s, const std::vector<int>& labels) {
  double total = 0.0;
  for (std::size_t p = 0; p < labels.size(); ++p)
    for (std::size_t q = 0; q < labels.size(); ++q)
      if (labels[p] != labels[q]) total += s(p, q);
  return total;
}

inline double quadratic(const Matrix& l, const std::vector<int>& labels) {
  double total = 0.0;
  for (std::size_t p = 0; p < labels.size(); ++p)
    for (std::size_t q = 0; q < labels.size(); ++q)
      total += (labels[p] == 0 ? 1.0 : -1.0) * l(p, q) * (labels[q] == 0 ? 1.0 : -1.0);
  return total;
}

/// Laplacian of Σ_a ½(A^a + A^aᵀ).
inline Matrix supra_aggregate_laplacian(const MultiplexNetwork& net) {
  const std::size_t n = net.nodes();
  Matrix agg = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < net.layer_count(); ++a)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) agg(i, j) += 0.5 * (net.layer(a)(i, j) + net.layer(a)(j, i));
  return laplacian(agg);
}

/// Laplacian of ½ Σ_{a,b} (C^{ab} A^b + (C^{ba} A^a)ᵀ).
inline Matrix dynamic_aggregate_laplacian(const MultiplexNetwork& net, const DynamicCoupling& c) {
  const std::size_t n = net.nodes(), k = net.layer_count();
  Matrix agg = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          agg(i, j) += 0.5 * (c.at(a, b, i) * net.layer(b)(i, j) + c.at(b, a, j) * net.layer(a)(j, i));
  return laplacian(agg);
}

/// Connected components by depth-first search on nonzero entries.
inline std::size_t components(const Matrix& s) {
  const auto n = static_cast<std::size_t>(s.rows());
  std::vector<bool> seen(n, false);
  std::size_t count = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (seen[start]) continue;
    ++count;
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t u = 0; u < n; ++u) {
        if (!seen[u] && (s(v, u) != 0.0 || s(u, v) != 0.0)) {
          seen[u] = true;
          stack.push_back(u);
        }
      }
    }
  }
  return count;
}

/// Minimum cut over all non-trivial bipartitions, by plain enumeration.
inline double min_cut(const Matrix& s) {
  const auto n = static_cast<std::size_t>(s.rows());
  double best = std::numeric_limits<double>::infinity();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<int>((mask >> i) & 1U);
    best = std::min(best, cut(s, labels));
  }
  return best;
}

/// Two m-cliques (unit weights) joined by one bridge of weight `bridge`.
inline Matrix two_cliques(std::size_t m, double bridge = 1.0) {
  Matrix s = Matrix::Zero(2 * m, 2 * m);
  for (std::size_t i = 0; i < 2 * m; ++i)
    for (std::size_t j = 0; j < 2 * m; ++j)
      if (i != j && (i < m) == (j < m)) s(i, j) = 1.0;
  s(m - 1, m) = s(m, m - 1) = bridge;
  return s;
}

}  // namespace oracle
