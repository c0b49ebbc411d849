#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace mxspec {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A fixed node set with k weighted directed layers.
///
/// Layer matrices follow the column-to-row convention: `layer(a)(i, j)` is the
/// weight of the edge from node j to node i on layer a. Layers and nodes are
/// 0-based. Instances are immutable once constructed.
class MultiplexNetwork {
 public:
  /// Throws mxspec::Error if a layer is not n x n, has a non-zero diagonal,
  /// or holds a negative / non-finite weight.
  explicit MultiplexNetwork(std::vector<Matrix> layers);

  /// k empty n x n layers.
  static MultiplexNetwork empty(std::size_t nodes, std::size_t layers);

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t layer_count() const noexcept { return layers_.size(); }
  std::size_t copies() const noexcept { return nodes_ * layers_.size(); }

  const Matrix& layer(std::size_t alpha) const;
  std::span<const Matrix> layers() const noexcept { return layers_; }

  bool operator==(const MultiplexNetwork& other) const;

 private:
  std::size_t nodes_ = 0;
  std::vector<Matrix> layers_;
};

struct NodeCopy {
  std::size_t layer;
  std::size_t node;

  bool operator==(const NodeCopy&) const = default;
};

/// Layer-major bijection between node copies (layer, node) and flat indices:
/// flat = layer * n + node.
class NodeCopyIndex {
 public:
  NodeCopyIndex(std::size_t nodes, std::size_t layers);

  std::size_t flat(std::size_t layer, std::size_t node) const;
  NodeCopy unflatten(std::size_t index) const;

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t layers() const noexcept { return layers_; }
  std::size_t size() const noexcept { return nodes_ * layers_; }

 private:
  std::size_t nodes_;
  std::size_t layers_;
};

/// Supra-adjacency coupling: every pair of copies of the same node is joined
/// with weight w.
struct SupraWeight {
  double w = 0.0;
};

/// Per-layer-pair diagonal coupling matrices. `at(alpha, beta, i)` is the
/// diagonal entry i of C^{alpha,beta}, i.e. the product of the mixing and
/// coupling constants for the transfer from layer beta into layer alpha.
class DynamicCoupling {
 public:
  /// All coefficients zero.
  DynamicCoupling(std::size_t nodes, std::size_t layers);

  /// C^{alpha,beta} = I for every pair.
  static DynamicCoupling identity(std::size_t nodes, std::size_t layers);
  /// C^{alpha,alpha} = I and zero coupling across layers.
  static DynamicCoupling disjoint(std::size_t nodes, std::size_t layers);
  /// C^{alpha,beta} = weights(alpha, beta) * I.
  static DynamicCoupling uniform(std::size_t nodes, const Matrix& weights);

  std::size_t nodes() const noexcept { return nodes_; }
  std::size_t layers() const noexcept { return layers_; }

  double at(std::size_t alpha, std::size_t beta, std::size_t i) const;
  void set(std::size_t alpha, std::size_t beta, std::size_t i, double value);
  void set_block(std::size_t alpha, std::size_t beta, double value);

  /// The diagonal of C^{alpha,beta} as a vector of length n.
  Vector diagonal(std::size_t alpha, std::size_t beta) const;

 private:
  std::size_t offset(std::size_t alpha, std::size_t beta, std::size_t i) const;

  std::size_t nodes_;
  std::size_t layers_;
  std::vector<double> coeff_;
};

using CouplingConfig = std::variant<SupraWeight, DynamicCoupling>;

enum class PartitionDomain { kNodeCopies, kNodes };

/// Cluster assignment over node copies (or nodes, for reduced problems).
struct Partition {
  std::vector<int> labels;
  int clusters = 0;
  PartitionDomain domain = PartitionDomain::kNodeCopies;
  bool degenerate = false;

  std::size_t size() const noexcept { return labels.size(); }
  /// Number of distinct labels actually present.
  int effective_clusters() const;
  /// Throws mxspec::Error when a label is out of range, or when a cluster id
  /// is unused and the partition is not flagged degenerate.
  void validate() const;
};

/// Lifts a node partition to node copies: copy (a, i) gets the label of i.
Partition lift_to_copies(const Partition& nodes, std::size_t layers);

/// Reads a network in the .mpx text format.
MultiplexNetwork load_network(const std::filesystem::path& path);
MultiplexNetwork parse_network(std::istream& in);
void save_network(const MultiplexNetwork& net, const std::filesystem::path& path);
void write_network(const MultiplexNetwork& net, std::ostream& out);

}  // namespace mxspec
