#pragma once

#include <cstdint>
#include <vector>

#include "mxspec/network.hpp"

namespace mxspec {

/// Planted block structure for one layer: node i belongs to block
/// `blocks[i]`, and a pair in blocks (a, b) is joined with probability
/// `probabilities(a, b)`.
struct SbmSpec {
  std::vector<int> blocks;
  Matrix probabilities;

  /// Two blocks (labels 0 and 1) with a shared intra probability.
  static SbmSpec two_block(std::vector<int> blocks, double intra, double inter);

  void validate() const;
};

// Every generator draws unordered pairs {i, j}, i < j, in row-major order
// (i outer, j inner) from one SplitMix64 stream seeded with `seed`, and sets
// both directions. Multiplex generators draw their layers one after another
// from the same stream.

Matrix gen_er_layer(std::size_t n, double p, std::uint64_t seed);
Matrix gen_sbm_layer(const SbmSpec& spec, std::uint64_t seed);

MultiplexNetwork gen_er_multiplex(std::size_t n, std::size_t k, double p, std::uint64_t seed);

struct PlantedMultiplex {
  MultiplexNetwork network;
  /// Over node copies; a copy inherits its node's block.
  Partition planted;
};

/// k layers drawn independently from the same two-block SBM: the first n/2
/// nodes against the last n/2, intra probability 1, inter probability
/// `inter_p`.
PlantedMultiplex gen_fixed_sbm_multiplex(std::size_t n, std::size_t k, double inter_p,
                                         std::uint64_t seed);

struct OverlapMultiplex {
  MultiplexNetwork network;
  /// Node-level blocks of layer 0: first half vs second half.
  Partition planted1;
  /// Node-level blocks of layer 1: middle half vs the outer quarters.
  Partition planted2;
};

/// Two layers with half-overlapping planted communities. Requires n % 4 == 0.
OverlapMultiplex gen_overlap_multiplex(std::size_t n, double intra_p, double inter_p,
                                       std::uint64_t seed);

/// Node labels for the two overlap layers (exposed for tests and the CLI).
std::vector<int> halves_blocks(std::size_t n);
std::vector<int> middle_blocks(std::size_t n);

}  // namespace mxspec
