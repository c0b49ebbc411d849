#include "mxspec/generators.hpp"

#include <string>

#include "mxspec/error.hpp"
#include "mxspec/rng.hpp"

namespace mxspec {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw Error(module::kGenerators, std::string(what) + " must lie in [0, 1]");
  }
}

Matrix draw_sbm(const SbmSpec& spec, Rng& rng) {
  const auto n = static_cast<Eigen::Index>(spec.blocks.size());
  Matrix a = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double p = spec.probabilities(spec.blocks[static_cast<std::size_t>(i)],
                                          spec.blocks[static_cast<std::size_t>(j)]);
      if (rng.bernoulli(p)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

Matrix draw_er(std::size_t n, double p, Rng& rng) {
  const auto m = static_cast<Eigen::Index>(n);
  Matrix a = Matrix::Zero(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i + 1; j < m; ++j) {
      if (rng.bernoulli(p)) {
        a(i, j) = 1.0;
        a(j, i) = 1.0;
      }
    }
  }
  return a;
}

Partition node_partition(std::vector<int> labels) {
  Partition part;
  part.labels = std::move(labels);
  part.clusters = 2;
  part.domain = PartitionDomain::kNodes;
  return part;
}

}  // namespace

SbmSpec SbmSpec::two_block(std::vector<int> blocks, double intra, double inter) {
  SbmSpec spec;
  spec.blocks = std::move(blocks);
  spec.probabilities.resize(2, 2);
  spec.probabilities << intra, inter, inter, intra;
  return spec;
}

void SbmSpec::validate() const {
  if (blocks.empty()) throw Error(module::kGenerators, "SBM needs at least one node");
  if (probabilities.rows() != probabilities.cols() || probabilities.rows() == 0) {
    throw Error(module::kGenerators, "SBM connection matrix must be square and non-empty");
  }
  const auto b = static_cast<int>(probabilities.rows());
  for (int label : blocks) {
    if (label < 0 || label >= b) throw Error(module::kGenerators, "SBM block label out of range");
  }
  for (Eigen::Index r = 0; r < probabilities.rows(); ++r) {
    for (Eigen::Index c = 0; c < probabilities.cols(); ++c) {
      check_probability(probabilities(r, c), "SBM probability");
      if (probabilities(r, c) != probabilities(c, r)) {
        throw Error(module::kGenerators, "SBM connection matrix must be symmetric");
      }
    }
  }
}

Matrix gen_er_layer(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p, "wiring probability");
  if (n == 0) throw Error(module::kGenerators, "n must be positive");
  Rng rng(seed);
  return draw_er(n, p, rng);
}

Matrix gen_sbm_layer(const SbmSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng(seed);
  return draw_sbm(spec, rng);
}

MultiplexNetwork gen_er_multiplex(std::size_t n, std::size_t k, double p, std::uint64_t seed) {
  check_probability(p, "wiring probability");
  if (n == 0 || k == 0) throw Error(module::kGenerators, "n and k must be positive");
  Rng rng(seed);
  std::vector<Matrix> layers;
  layers.reserve(k);
  for (std::size_t a = 0; a < k; ++a) layers.push_back(draw_er(n, p, rng));
  return MultiplexNetwork(std::move(layers));
}

std::vector<int> halves_blocks(std::size_t n) {
  std::vector<int> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = i < n / 2 ? 0 : 1;
  return blocks;
}

std::vector<int> middle_blocks(std::size_t n) {
  std::vector<int> blocks(n);
  for (std::size_t i = 0; i < n; ++i) blocks[i] = (i >= n / 4 && i < 3 * n / 4) ? 0 : 1;
  return blocks;
}

PlantedMultiplex gen_fixed_sbm_multiplex(std::size_t n, std::size_t k, double inter_p,
                                         std::uint64_t seed) {
  if (n == 0 || n % 2 != 0) throw Error(module::kGenerators, "fixed SBM needs a positive even n");
  if (k == 0) throw Error(module::kGenerators, "k must be positive");
  check_probability(inter_p, "inter-cluster probability");
  const SbmSpec spec = SbmSpec::two_block(halves_blocks(n), 1.0, inter_p);
  Rng rng(seed);
  std::vector<Matrix> layers;
  layers.reserve(k);
  for (std::size_t a = 0; a < k; ++a) layers.push_back(draw_sbm(spec, rng));
  return {MultiplexNetwork(std::move(layers)), lift_to_copies(node_partition(spec.blocks), k)};
}

OverlapMultiplex gen_overlap_multiplex(std::size_t n, double intra_p, double inter_p,
                                       std::uint64_t seed) {
  if (n == 0 || n % 4 != 0) throw Error(module::kGenerators, "overlap SBM needs n divisible by 4");
  check_probability(intra_p, "intra-cluster probability");
  check_probability(inter_p, "inter-cluster probability");
  const SbmSpec first = SbmSpec::two_block(halves_blocks(n), intra_p, inter_p);
  const SbmSpec second = SbmSpec::two_block(middle_blocks(n), intra_p, inter_p);
  Rng rng(seed);
  std::vector<Matrix> layers;
  layers.push_back(draw_sbm(first, rng));
  layers.push_back(draw_sbm(second, rng));
  return {MultiplexNetwork(std::move(layers)), node_partition(first.blocks),
          node_partition(second.blocks)};
}

}  // namespace mxspec
