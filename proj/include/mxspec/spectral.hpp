#pragma once

#include <cstdint>

#include "mxspec/network.hpp"

namespace mxspec {

/// Full symmetric eigendecomposition with ascending eigenvalues.
struct EigenSystem {
  Vector values;
  /// Orthonormal columns aligned with `values`. Each column's first entry of
  /// magnitude above 1e-12 is positive.
  Matrix vectors;
  /// 1e-8 * max(1, largest eigenvalue); eigenvalues at or below it count as zero.
  double zero_tolerance = 0.0;

  std::size_t zero_multiplicity() const;
};

EigenSystem eig_sym(const Matrix& m);

struct Bipartition {
  Partition partition;
  /// Smallest eigenvalue above the zero tolerance.
  double fiedler_value = 0.0;
  /// Number of eigenvalues numerically equal to fiedler_value.
  std::size_t fiedler_multiplicity = 0;
  std::size_t zero_multiplicity = 0;
  /// Set when the zero eigenvalue is repeated (disconnected operator).
  bool degenerate = false;
};

/// Two-way split of a Laplacian by the sign pattern of its Fiedler vector.
///
/// The Fiedler vector is the (sign-normalized) eigenvector of the smallest
/// eigenvalue above the zero tolerance; entries with |v_i| <= 1e-12 join the
/// positive side, and the positive side is cluster 0. When the zero
/// eigenvalue is repeated the operator is disconnected and the relaxed
/// minimum is attained inside the null space: we use the null vector
/// orthogonal to the constant that is positive on the connected component of
/// entry 0, so the split is that component against everything else.
Bipartition fiedler_bipartition(const Matrix& laplacian);
Bipartition fiedler_bipartition(const Matrix& laplacian, const EigenSystem& eig);

struct KMeansOptions {
  int restarts = 10;
  int max_iterations = 300;
};

/// Unnormalized spectral clustering into c clusters: rows of the first c
/// eigenvectors (the trivial one included) clustered by k-means++ / Lloyd.
/// Labels are renumbered in order of first appearance.
Partition spectral_kway(const Matrix& laplacian, int clusters, std::uint64_t seed,
                        KMeansOptions options = {});
Partition spectral_kway(const EigenSystem& eig, int clusters, std::uint64_t seed,
                        KMeansOptions options = {});

struct KMeansResult {
  std::vector<int> labels;
  double inertia = 0.0;
};

/// Lloyd's algorithm with k-means++ seeding on the rows of `points`, best of
/// `options.restarts` runs by within-cluster sum of squares.
KMeansResult kmeans(const Matrix& points, int clusters, std::uint64_t seed,
                    KMeansOptions options = {});

struct PartitionMatch {
  bool equal_up_to_relabel = false;
  /// Fraction of elements that agree under the best label bijection.
  double agreement = 0.0;
};

PartitionMatch match_partitions(const Partition& a, const Partition& b);

/// Optimal assignment for a square cost matrix (Hungarian method); returns
/// the column assigned to each row, minimizing total cost.
std::vector<int> solve_assignment(const Matrix& cost);

}  // namespace mxspec
