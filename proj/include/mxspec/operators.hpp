#pragma once

#include <filesystem>
#include <iosfwd>
#include <string_view>

#include "mxspec/network.hpp"

namespace mxspec {

enum class Model { kSupra, kDynamic };

std::string_view to_string(Model model) noexcept;

/// An nk x nk symmetric operator over node copies together with its graph
/// Laplacian. Immutable once built; use build_supra / build_dynamic.
class SupraOperator {
 public:
  SupraOperator(Model model, Matrix adjacency, NodeCopyIndex index, CouplingConfig coupling);

  Model model() const noexcept { return model_; }
  /// The symmetric weight matrix over node copies.
  const Matrix& adjacency() const noexcept { return adjacency_; }
  const Matrix& laplacian() const noexcept { return laplacian_; }
  const NodeCopyIndex& index() const noexcept { return index_; }
  const CouplingConfig& coupling() const noexcept { return coupling_; }

  std::size_t size() const noexcept { return index_.size(); }
  std::size_t nodes() const noexcept { return index_.nodes(); }
  std::size_t layers() const noexcept { return index_.layers(); }

 private:
  Model model_;
  Matrix adjacency_;
  Matrix laplacian_;
  NodeCopyIndex index_;
  CouplingConfig coupling_;
};

/// n x n operator obtained by binding all copies of each node together.
struct ReducedOperator {
  Matrix adjacency;
  Matrix laplacian;
};

/// (M + M^T) / 2.
Matrix symmetrize(const Matrix& m);

/// D - S with D_ii the i-th row sum of S. Rejects non-square input,
/// asymmetry beyond 1e-12 relative, and negative off-diagonal weights.
Matrix laplacian(const Matrix& s);

/// Supra-adjacency operator: symmetrized layers on the diagonal blocks and
/// w * I on every off-diagonal block.
SupraOperator build_supra(const MultiplexNetwork& net, double w);

/// Dynamical-coupling operator: block (alpha, beta) of the raw operator is
/// C^{alpha,beta} A^beta, and the stored adjacency is its symmetrization.
SupraOperator build_dynamic(const MultiplexNetwork& net, const DynamicCoupling& coupling);

SupraOperator build_operator(const MultiplexNetwork& net, const CouplingConfig& coupling);

/// Zero inter-layer coupling for the given model.
SupraOperator disjoint_operator(const MultiplexNetwork& net, Model model);

/// J^T L J with J the vertical stack of k identity matrices.
ReducedOperator reduce_indivisible(const SupraOperator& op);

/// Number of connected components of the graph whose edges are the strictly
/// positive off-diagonal entries of the symmetric matrix `adjacency`.
std::size_t connected_components(const Matrix& adjacency);

/// Reads a coupling file: `<alpha> <beta> <value>` sets C^{alpha,beta} =
/// value * I, `<alpha> <beta> <node> <value>` sets one diagonal entry. Later
/// lines override earlier ones; unspecified entries are zero. `%` starts a
/// comment line.
DynamicCoupling load_coupling(const std::filesystem::path& path, std::size_t nodes,
                              std::size_t layers);
DynamicCoupling parse_coupling(std::istream& in, std::size_t nodes, std::size_t layers);

}  // namespace mxspec
