#include <random>

#include "doctest.h"
#include "mxspec/cut.hpp"
#include "mxspec/error.hpp"
#include "mxspec/operators.hpp"
#include "mxspec/spectral.hpp"
#include "support.hpp"

using namespace mxspec;

namespace {

Partition labels(std::vector<int> l, int clusters = 2) {
  Partition p;
  p.labels = std::move(l);
  p.clusters = clusters;
  p.degenerate = true;
  return p;
}

double term(const CutReport& r, const std::string& name) {
  for (const auto& t : r.decomposition)
    if (t.name == name) return t.value;
  FAIL("missing term " << name);
  return 0;
}

}  // namespace

TEST_CASE("cut cost of small graphs") {
  Matrix path(3, 3);
  path << 0, 1, 0, 1, 0, 1, 0, 1, 0;
  CHECK(cut_cost(path, labels({0, 0, 1})) == doctest::Approx(2.0));
  CHECK(cut_cost(path, labels({0, 0, 0})) == 0.0);
  Matrix directed = Matrix::Zero(2, 2);
  directed(1, 0) = 1;
  CHECK(cut_cost(directed, labels({0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("cut cost is half the quadratic form") {
  std::mt19937_64 gen(1);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + gen() % 6, k = 1 + gen() % 3;
    const auto net = oracle::random_network(gen, n, k);
    const auto part = oracle::random_bipartition(gen, n * k);
    const auto supra = build_supra(net, 0.8);
    CHECK(cut_cost(supra, part) == doctest::Approx(oracle::cut(oracle::supra_adjacency(net, 0.8), part.labels)));
    CHECK(cut_cost(supra, part) == doctest::Approx(0.5 * quadratic_form(supra.laplacian(), part)));
    CHECK(quadratic_form(supra.laplacian(), part) ==
          doctest::Approx(oracle::quadratic(supra.laplacian(), part.labels)));
  }
}

TEST_CASE("indicator") {
  CHECK(indicator(labels({0, 1, 0})) == Vector{{1, -1, 1}});
}

TEST_CASE("supra decomposition") {
  std::mt19937_64 gen(2);
  const std::size_t n = 5, k = 3;
  const auto net = oracle::random_network(gen, n, k);
  const double w = 0.7;

  const auto ones = decompose_supra(net, w, labels(std::vector<int>(n * k, 0)));
  CHECK(term(ones, "clique") == doctest::Approx(k * k * n * w));
  CHECK(term(ones, "alignment") == doctest::Approx(-double(k * k * n) * w));
  CHECK(ones.decomposition_sum() == doctest::Approx(0.0).epsilon(1e-12));

  const auto part = oracle::random_bipartition(gen, n * k);
  const auto zero = decompose_supra(net, 0.0, part);
  CHECK(term(zero, "clique") == 0.0);
  CHECK(term(zero, "alignment") == 0.0);
  double intra = 0;
  for (std::size_t a = 0; a < k; ++a) intra += term(zero, "intra[" + std::to_string(a) + "]");
  CHECK(zero.decomposition_sum() == doctest::Approx(intra));

  std::vector<int> split(2 * n, 0);
  for (std::size_t i = n; i < 2 * n; ++i) split[i] = 1;
  const auto empty = MultiplexNetwork::empty(n, 2);
  const auto layers = decompose_supra(empty, w, labels(split));
  CHECK(layers.decomposition_sum() == doctest::Approx(4.0 * n * w));
  CHECK(layers.total == doctest::Approx(cut_cost(build_supra(empty, w), labels(split))));
  CHECK(layers.total == doctest::Approx(2.0 * n * w));
}

TEST_CASE("dynamic decomposition") {
  std::mt19937_64 gen(3);
  const std::size_t n = 4, k = 3;
  const auto net = oracle::random_network(gen, n, k);
  const auto c = oracle::random_coupling(gen, n, k);
  const auto ones = decompose_dynamic(net, c, labels(std::vector<int>(n * k, 0)));
  for (const auto& t : ones.decomposition) CHECK(t.value == doctest::Approx(0.0).epsilon(1e-12));

  const auto part = oracle::random_bipartition(gen, n * k);
  const auto dis = decompose_dynamic(net, DynamicCoupling::disjoint(n, k), part);
  for (const auto& t : dis.decomposition)
    if (t.name.rfind("inter", 0) == 0) CHECK(t.value == 0.0);

  const auto full = decompose_dynamic(net, c, part);
  const auto op = build_dynamic(net, c);
  CHECK(full.decomposition_sum() == doctest::Approx(quadratic_form(op.laplacian(), part)));
  CHECK(full.total == doctest::Approx(cut_cost(op, part)));
}

TEST_CASE("decompositions sum to the quadratic form") {
  std::mt19937_64 gen(4);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + gen() % 7, k = 1 + gen() % 3;
    const auto net = oracle::random_network(gen, n, k);
    const auto part = oracle::random_bipartition(gen, n * k);
    const double w = std::uniform_real_distribution<double>(0, 4)(gen);
    const auto s = decompose_supra(net, w, part);
    CHECK(std::abs(s.decomposition_sum() - oracle::quadratic(oracle::laplacian(oracle::supra_adjacency(net, w)), part.labels)) < 1e-10);
    const auto c = oracle::random_coupling(gen, n, k, 0.3);
    const auto d = decompose_dynamic(net, c, part);
    CHECK(std::abs(d.decomposition_sum() - oracle::quadratic(oracle::laplacian(oracle::dynamic_adjacency(net, c)), part.labels)) < 1e-10);
  }
}

TEST_CASE("supra cut cost is non-decreasing in w") {
  std::mt19937_64 gen(5);
  for (int t = 0; t < 20; ++t) {
    const auto net = oracle::random_network(gen, 5, 2);
    const auto part = oracle::random_bipartition(gen, 10);
    double prev = -1;
    for (double w : {0.0, 0.1, 0.5, 1.0, 2.0, 5.0}) {
      const double c = cut_cost(build_supra(net, w), part);
      CHECK(c >= prev - 1e-12);
      prev = c;
    }
  }
}

TEST_CASE("brute force minimum cut") {
  const auto bridge = brute_force_min_cut(oracle::two_cliques(3));
  CHECK(bridge.cost == doctest::Approx(2.0));
  CHECK(bridge.partition.labels == std::vector<int>{0, 0, 0, 1, 1, 1});

  Matrix cycle = Matrix::Zero(4, 4);
  for (int i = 0; i < 4; ++i) cycle(i, (i + 1) % 4) = cycle((i + 1) % 4, i) = 1;
  const auto c4 = brute_force_min_cut(cycle);
  CHECK(c4.cost == doctest::Approx(4.0));
  CHECK(c4.partition.labels == std::vector<int>{0, 0, 0, 1});

  std::mt19937_64 gen(6);
  for (int t = 0; t < 30; ++t) {
    const Matrix s = symmetrize(oracle::random_network(gen, 2 + gen() % 8, 1).layer(0));
    const auto best = brute_force_min_cut(s);
    CHECK(best.cost == doctest::Approx(oracle::min_cut(s)));
    CHECK(best.partition.labels[0] == 0);
  }
  CHECK_THROWS_AS(brute_force_min_cut(Matrix::Zero(21, 21)), Error);
}

TEST_CASE("brute force bounds the spectral cut") {
  std::mt19937_64 gen(7);
  for (int t = 0; t < 30; ++t) {
    const std::size_t n = 2 + gen() % 3, k = 1 + gen() % 2;
    const auto op = build_supra(oracle::random_network(gen, n, k), 0.5);
    const auto split = fiedler_bipartition(op.laplacian());
    CHECK(brute_force_min_cut(op).cost <= cut_cost(op, split.partition) + 1e-12);
  }
}
