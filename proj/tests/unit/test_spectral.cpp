#include <random>

#include "doctest.h"
#include "mxspec/error.hpp"
#include "mxspec/operators.hpp"
#include "mxspec/spectral.hpp"
#include "support.hpp"

using namespace mxspec;

namespace {

Matrix path3() {
  Matrix s(3, 3);
  s << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  return s;
}

Matrix planted_cliques(int count, int size, double bridge) {
  const int m = count * size;
  Matrix s = Matrix::Zero(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      if (i != j && i / size == j / size) s(i, j) = 1.0;
  for (int c = 0; c + 1 < count; ++c) s(c * size, (c + 1) * size) = s((c + 1) * size, c * size) = bridge;
  return s;
}

}  // namespace

TEST_CASE("K3 eigenvalues") {
  Matrix k3 = Matrix::Ones(3, 3) - Matrix::Identity(3, 3);
  const auto eig = eig_sym(laplacian(k3));
  CHECK(eig.values(0) == doctest::Approx(0.0));
  CHECK(eig.values(1) == doctest::Approx(3.0));
  CHECK(eig.values(2) == doctest::Approx(3.0));
  CHECK(eig.zero_multiplicity() == 1);
}

TEST_CASE("zero matrix decomposition") {
  const auto eig = eig_sym(Matrix::Zero(4, 4));
  CHECK(eig.values.isZero());
  CHECK(eig.vectors.isIdentity(1e-12));
  CHECK(eig.zero_multiplicity() == 4);
}

TEST_CASE("eigenvectors are orthonormal and sign normalized") {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 30; ++t) {
    const Matrix l = laplacian(symmetrize(oracle::random_network(gen, 2 + gen() % 10, 1).layer(0)));
    const auto eig = eig_sym(l);
    const auto m = l.rows();
    CHECK((eig.vectors.transpose() * eig.vectors - Matrix::Identity(m, m)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((l * eig.vectors - eig.vectors * eig.values.asDiagonal()).cwiseAbs().maxCoeff() < 1e-9);
    for (Eigen::Index c = 0; c < m; ++c) {
      for (Eigen::Index r = 0; r < m; ++r) {
        if (std::abs(eig.vectors(r, c)) > 1e-12) {
          CHECK(eig.vectors(r, c) > 0);
          break;
        }
      }
    }
  }
  Matrix asym = Matrix::Zero(2, 2);
  asym(0, 1) = 1;
  CHECK_THROWS_AS(eig_sym(asym), Error);
}

TEST_CASE("3-path Fiedler split") {
  const auto split = fiedler_bipartition(laplacian(path3()));
  CHECK(split.fiedler_value == doctest::Approx(1.0));
  CHECK_FALSE(split.degenerate);
  CHECK(split.partition.labels == std::vector<int>{0, 0, 1});
}

TEST_CASE("disconnected graph is degenerate and split by component") {
  Matrix s = Matrix::Zero(4, 4);
  s(0, 1) = s(1, 0) = 1;
  s(2, 3) = s(3, 2) = 1;
  const auto split = fiedler_bipartition(laplacian(s));
  CHECK(split.degenerate);
  CHECK(split.zero_multiplicity == 2);
  CHECK(split.partition.labels[0] == split.partition.labels[1]);
  CHECK(split.partition.labels[2] == split.partition.labels[3]);
  CHECK(split.partition.labels[0] != split.partition.labels[2]);
}

TEST_CASE("two cliques with a bridge split at the bridge") {
  const Matrix s = oracle::two_cliques(5);
  const auto split = fiedler_bipartition(laplacian(s));
  for (int i = 0; i < 10; ++i) CHECK(split.partition.labels[i] == (i < 5 ? 0 : 1));
  CHECK(oracle::cut(s, split.partition.labels) == doctest::Approx(oracle::min_cut(s)));
}

TEST_CASE("zero multiplicity equals component count") {
  std::mt19937_64 gen(2);
  for (int t = 0; t < 100; ++t) {
    const Matrix s = symmetrize(oracle::random_network(gen, 2 + gen() % 12, 1, 0.12).layer(0));
    const auto eig = eig_sym(laplacian(s));
    CHECK(eig.zero_multiplicity() == oracle::components(s));
    CHECK(eig.values.minCoeff() >= -1e-9 * std::max(1.0, eig.values.maxCoeff()));
  }
}

TEST_CASE("k-way clustering") {
  const Matrix two = oracle::two_cliques(5);
  const auto split = fiedler_bipartition(laplacian(two));
  CHECK(match_partitions(spectral_kway(laplacian(two), 2, 3), split.partition).equal_up_to_relabel);

  const Matrix four = planted_cliques(4, 6, 0.0);
  const auto kway = spectral_kway(laplacian(four), 4, 5);
  Partition truth;
  truth.clusters = 4;
  for (int i = 0; i < 24; ++i) truth.labels.push_back(i / 6);
  CHECK(match_partitions(kway, truth).equal_up_to_relabel);

  const Matrix bridged = planted_cliques(4, 6, 0.5);
  const auto a = spectral_kway(laplacian(bridged), 4, 99);
  CHECK(match_partitions(a, truth).equal_up_to_relabel);
  CHECK(a.labels == spectral_kway(laplacian(bridged), 4, 99).labels);
  CHECK(a.labels[0] == 0);
  CHECK_THROWS_AS(spectral_kway(laplacian(two), 11, 1), Error);
}

TEST_CASE("kmeans separates obvious clusters") {
  Matrix pts(6, 1);
  pts << 0.0, 0.1, 0.2, 10.0, 10.1, 10.2;
  const auto r = kmeans(pts, 2, 1);
  CHECK(r.labels == std::vector<int>{0, 0, 0, 1, 1, 1});
  CHECK(r.inertia == doctest::Approx(0.04));
}

TEST_CASE("partition matching") {
  Partition a;
  a.clusters = 2;
  for (int i = 0; i < 100; ++i) a.labels.push_back(i % 2);
  CHECK(match_partitions(a, a).equal_up_to_relabel);
  CHECK(match_partitions(a, a).agreement == 1.0);
  Partition swapped = a;
  for (auto& l : swapped.labels) l = 1 - l;
  CHECK(match_partitions(a, swapped).equal_up_to_relabel);
  CHECK(match_partitions(a, swapped).agreement == 1.0);
  Partition moved = a;
  moved.labels[7] = 1 - moved.labels[7];
  CHECK_FALSE(match_partitions(a, moved).equal_up_to_relabel);
  CHECK(match_partitions(a, moved).agreement == doctest::Approx(0.99));
}

TEST_CASE("assignment solver finds the optimum") {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0, 1);
  for (int t = 0; t < 50; ++t) {
    const int m = 1 + static_cast<int>(gen() % 6);
    Matrix cost(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) cost(i, j) = u(gen);
    const auto assign = solve_assignment(cost);
    double got = 0;
    for (int i = 0; i < m; ++i) got += cost(i, assign[i]);
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    double best = 1e300;
    do {
      double c = 0;
      for (int i = 0; i < m; ++i) c += cost(i, perm[i]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == doctest::Approx(best));
  }
}
