#include "mxspec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <Eigen/Eigenvalues>

#include "mxspec/error.hpp"
#include "mxspec/rng.hpp"

namespace mxspec {
namespace {

constexpr double kEntryZero = 1e-12;
constexpr double kInputSymmetry = 1e-10;

void normalize_signs(Matrix& vectors) {
  for (Eigen::Index c = 0; c < vectors.cols(); ++c) {
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
      const double v = vectors(r, c);
      if (std::abs(v) > kEntryZero) {
        if (v < 0.0) vectors.col(c) *= -1.0;
        break;
      }
    }
  }
}

std::vector<bool> component_of_first(const Matrix& laplacian) {
  const auto m = laplacian.rows();
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  std::vector<Eigen::Index> stack{0};
  seen[0] = true;
  while (!stack.empty()) {
    const auto u = stack.back();
    stack.pop_back();
    for (Eigen::Index v = 0; v < m; ++v) {
      if (v != u && laplacian(v, u) < 0.0 && !seen[static_cast<std::size_t>(v)]) {
        seen[static_cast<std::size_t>(v)] = true;
        stack.push_back(v);
      }
    }
  }
  return seen;
}

double squared_distance(const Matrix& points, Eigen::Index row, const Matrix& centers,
                        Eigen::Index center) {
  return (points.row(row) - centers.row(center)).squaredNorm();
}

struct Run {
  std::vector<int> labels;
  double inertia;
};

Run lloyd_once(const Matrix& points, int clusters, Rng& rng, int max_iterations) {
  const Eigen::Index m = points.rows();
  const Eigen::Index c = clusters;
  Matrix centers(c, points.cols());

  // k-means++ seeding.
  std::vector<double> dist(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
  centers.row(0) = points.row(static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m))));
  for (Eigen::Index k = 1; k < c; ++k) {
    double total = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      auto& d = dist[static_cast<std::size_t>(i)];
      d = std::min(d, squared_distance(points, i, centers, k - 1));
      total += d;
    }
    Eigen::Index chosen = m - 1;
    if (total > 0.0) {
      const double target = rng.uniform() * total;
      double acc = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        acc += dist[static_cast<std::size_t>(i)];
        if (acc > target) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(m)));
    }
    centers.row(k) = points.row(chosen);
  }

  std::vector<int> labels(static_cast<std::size_t>(m), -1);
  std::vector<double> own(static_cast<std::size_t>(m), 0.0);
  for (int iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      int best = 0;
      double best_d = squared_distance(points, i, centers, 0);
      for (Eigen::Index k = 1; k < c; ++k) {
        const double d = squared_distance(points, i, centers, k);
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(k);
        }
      }
      own[static_cast<std::size_t>(i)] = best_d;
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }

    // Repair empty clusters by moving in the point farthest from its center.
    std::vector<Eigen::Index> counts(static_cast<std::size_t>(c), 0);
    for (int l : labels) ++counts[static_cast<std::size_t>(l)];
    for (Eigen::Index k = 0; k < c; ++k) {
      if (counts[static_cast<std::size_t>(k)] > 0) continue;
      Eigen::Index far = -1;
      double far_d = -1.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])] > 1 &&
            own[static_cast<std::size_t>(i)] > far_d) {
          far_d = own[static_cast<std::size_t>(i)];
          far = i;
        }
      }
      if (far < 0) break;
      --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
      labels[static_cast<std::size_t>(far)] = static_cast<int>(k);
      own[static_cast<std::size_t>(far)] = 0.0;
      ++counts[static_cast<std::size_t>(k)];
      changed = true;
    }

    centers.setZero();
    for (Eigen::Index i = 0; i < m; ++i) centers.row(labels[static_cast<std::size_t>(i)]) += points.row(i);
    for (Eigen::Index k = 0; k < c; ++k) {
      if (counts[static_cast<std::size_t>(k)] > 0) {
        centers.row(k) /= static_cast<double>(counts[static_cast<std::size_t>(k)]);
      }
    }
    if (!changed) break;
  }

  double inertia = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    inertia += squared_distance(points, i, centers, labels[static_cast<std::size_t>(i)]);
  }
  return {std::move(labels), inertia};
}

std::vector<int> relabel_by_first_appearance(const std::vector<int>& labels) {
  std::map<int, int> remap;
  std::vector<int> out;
  out.reserve(labels.size());
  for (int l : labels) {
    auto [it, inserted] = remap.emplace(l, static_cast<int>(remap.size()));
    out.push_back(it->second);
  }
  return out;
}

}  // namespace

std::size_t EigenSystem::zero_multiplicity() const {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values(i) <= zero_tolerance) ++count;
  }
  return count;
}

EigenSystem eig_sym(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(module::kSpectral, "eigendecomposition needs a square matrix");
  if (m.rows() == 0) throw Error(module::kSpectral, "eigendecomposition of an empty matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kInputSymmetry * scale) {
    throw Error(module::kSpectral, "eigendecomposition needs a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw Error(module::kSpectral, "symmetric eigensolver failed to converge");
  }
  EigenSystem out;
  out.values = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  normalize_signs(out.vectors);
  out.zero_tolerance = 1e-8 * std::max(1.0, out.values(out.values.size() - 1));
  return out;
}

Bipartition fiedler_bipartition(const Matrix& laplacian) {
  if (laplacian.rows() < 2) throw Error(module::kSpectral, "bipartition needs at least two elements");
  return fiedler_bipartition(laplacian, eig_sym(laplacian));
}

Bipartition fiedler_bipartition(const Matrix& laplacian, const EigenSystem& eig) {
  const Eigen::Index m = eig.values.size();
  if (m < 2) throw Error(module::kSpectral, "bipartition needs at least two elements");

  Bipartition out;
  out.zero_multiplicity = eig.zero_multiplicity();
  out.degenerate = out.zero_multiplicity > 1;

  Eigen::Index first_positive = m;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (eig.values(i) > eig.zero_tolerance) {
      first_positive = i;
      break;
    }
  }
  if (first_positive < m) {
    out.fiedler_value = eig.values(first_positive);
    const double tie = eig.zero_tolerance + 1e-10 * std::abs(out.fiedler_value);
    for (Eigen::Index i = first_positive; i < m; ++i) {
      if (std::abs(eig.values(i) - out.fiedler_value) <= tie) ++out.fiedler_multiplicity;
    }
  }

  Partition& part = out.partition;
  part.clusters = 2;
  part.labels.assign(static_cast<std::size_t>(m), 0);

  if (out.degenerate) {
    const auto component = component_of_first(laplacian);
    bool split = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      part.labels[static_cast<std::size_t>(i)] = component[static_cast<std::size_t>(i)] ? 0 : 1;
      split = split || !component[static_cast<std::size_t>(i)];
    }
    if (split) {
      part.degenerate = true;
      return out;
    }
    // Numerically repeated zero eigenvalue on a structurally connected
    // operator: fall through to the eigenvector at index 1.
    first_positive = 1;
  }

  if (first_positive >= m) {
    // Zero matrix: everything in one cluster.
    part.degenerate = true;
    return out;
  }
  const auto fiedler = eig.vectors.col(first_positive);
  for (Eigen::Index i = 0; i < m; ++i) {
    part.labels[static_cast<std::size_t>(i)] = fiedler(i) >= -kEntryZero ? 0 : 1;
  }
  part.degenerate = part.effective_clusters() < 2;
  return out;
}

KMeansResult kmeans(const Matrix& points, int clusters, std::uint64_t seed, KMeansOptions options) {
  if (clusters < 1 || clusters > points.rows()) {
    throw Error(module::kSpectral, "cluster count must lie in 1.." + std::to_string(points.rows()));
  }
  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(derive_seed(seed, "kmeans-restart", {static_cast<std::uint64_t>(r)}));
    Run run = lloyd_once(points, clusters, rng, options.max_iterations);
    if (run.inertia < best.inertia) {
      best.inertia = run.inertia;
      best.labels = std::move(run.labels);
    }
  }
  return best;
}

Partition spectral_kway(const Matrix& laplacian, int clusters, std::uint64_t seed,
                        KMeansOptions options) {
  if (clusters < 2 || clusters > laplacian.rows()) {
    throw Error(module::kSpectral, "cluster count must lie in 2.." + std::to_string(laplacian.rows()));
  }
  return spectral_kway(eig_sym(laplacian), clusters, seed, options);
}

Partition spectral_kway(const EigenSystem& eig, int clusters, std::uint64_t seed,
                        KMeansOptions options) {
  if (clusters < 2 || clusters > eig.values.size()) {
    throw Error(module::kSpectral, "cluster count must lie in 2.." + std::to_string(eig.values.size()));
  }
  const Matrix embedding = eig.vectors.leftCols(clusters);
  KMeansResult km = kmeans(embedding, clusters, seed, options);
  Partition part;
  part.labels = relabel_by_first_appearance(km.labels);
  part.clusters = clusters;
  part.degenerate = part.effective_clusters() < clusters;
  return part;
}

std::vector<int> solve_assignment(const Matrix& cost) {
  // Shortest augmenting path formulation with potentials, 1-based internally.
  const auto n = static_cast<std::size_t>(cost.rows());
  if (cost.cols() != cost.rows()) throw Error(module::kSpectral, "assignment needs a square cost matrix");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<bool> used(n + 1, false);
    do {
      used[j0] = true;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) -
                           u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (std::size_t j = 1; j <= n; ++j) {
    if (p[j] != 0) row_to_col[p[j] - 1] = static_cast<int>(j - 1);
  }
  return row_to_col;
}

PartitionMatch match_partitions(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw Error(module::kSpectral, "partitions differ in length");
  if (a.size() == 0) return {true, 1.0};
  int ca = 0;
  int cb = 0;
  for (int l : a.labels) ca = std::max(ca, l + 1);
  for (int l : b.labels) cb = std::max(cb, l + 1);
  const int c = std::max(ca, cb);
  Matrix confusion = Matrix::Zero(c, c);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.labels[i] < 0 || b.labels[i] < 0) throw Error(module::kSpectral, "negative partition label");
    confusion(a.labels[i], b.labels[i]) += 1.0;
  }
  const auto assignment = solve_assignment(-confusion);
  double matched = 0.0;
  for (int r = 0; r < c; ++r) matched += confusion(r, assignment[static_cast<std::size_t>(r)]);
  const auto total = static_cast<double>(a.size());
  return {matched == total, matched / total};
}

}  // namespace mxspec
