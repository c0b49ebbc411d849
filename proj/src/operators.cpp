#include "mxspec/operators.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <string>
#include <vector>

#include "mxspec/error.hpp"
#include "mxspec/text.hpp"

namespace mxspec {
namespace {

constexpr double kSymmetryTolerance = 1e-12;

Eigen::Index block_start(std::size_t layer, std::size_t n) {
  return static_cast<Eigen::Index>(layer * n);
}

}  // namespace

std::string_view to_string(Model model) noexcept {
  return model == Model::kSupra ? "supra" : "dynamic";
}

SupraOperator::SupraOperator(Model model, Matrix adjacency, NodeCopyIndex index,
                             CouplingConfig coupling)
    : model_(model),
      adjacency_(std::move(adjacency)),
      laplacian_(mxspec::laplacian(adjacency_)),
      index_(index),
      coupling_(std::move(coupling)) {
  if (static_cast<std::size_t>(adjacency_.rows()) != index_.size()) {
    throw Error(module::kOperators, "operator size does not match node-copy index");
  }
}

Matrix symmetrize(const Matrix& m) {
  if (m.rows() != m.cols()) throw Error(module::kOperators, "symmetrize needs a square matrix");
  Matrix out = m + m.transpose();
  out *= 0.5;
  return out;
}

Matrix laplacian(const Matrix& s) {
  if (s.rows() != s.cols()) throw Error(module::kOperators, "laplacian needs a square matrix");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  const double tol = kSymmetryTolerance * scale;
  for (Eigen::Index j = 0; j < s.cols(); ++j) {
    for (Eigen::Index i = 0; i < s.rows(); ++i) {
      if (i != j && s(i, j) < 0.0) {
        throw Error(module::kOperators, "laplacian needs non-negative off-diagonal weights");
      }
      if (std::abs(s(i, j) - s(j, i)) > tol) {
        throw Error(module::kOperators, "laplacian needs a symmetric matrix");
      }
    }
  }
  Matrix l = -s;
  l.diagonal() += s.rowwise().sum();
  return l;
}

SupraOperator build_supra(const MultiplexNetwork& net, double w) {
  if (!std::isfinite(w) || w < 0.0) {
    throw Error(module::kOperators, "supra weight must be finite and non-negative");
  }
  const std::size_t n = net.nodes();
  const std::size_t k = net.layer_count();
  const auto m = static_cast<Eigen::Index>(n * k);
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix adj = Matrix::Zero(m, m);
  for (std::size_t a = 0; a < k; ++a) {
    adj.block(block_start(a, n), block_start(a, n), nn, nn) = symmetrize(net.layer(a));
    for (std::size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      adj.block(block_start(a, n), block_start(b, n), nn, nn).diagonal().setConstant(w);
    }
  }
  return SupraOperator(Model::kSupra, std::move(adj), NodeCopyIndex(n, k), SupraWeight{w});
}

SupraOperator build_dynamic(const MultiplexNetwork& net, const DynamicCoupling& coupling) {
  const std::size_t n = net.nodes();
  const std::size_t k = net.layer_count();
  if (coupling.nodes() != n || coupling.layers() != k) {
    throw Error(module::kOperators, "coupling dimensions (" + std::to_string(coupling.layers()) +
                                        " layers, " + std::to_string(coupling.nodes()) +
                                        " nodes) do not match the network");
  }
  const auto m = static_cast<Eigen::Index>(n * k);
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix raw(m, m);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      raw.block(block_start(a, n), block_start(b, n), nn, nn) =
          coupling.diagonal(a, b).asDiagonal() * net.layer(b);
    }
  }
  return SupraOperator(Model::kDynamic, symmetrize(raw), NodeCopyIndex(n, k), coupling);
}

SupraOperator build_operator(const MultiplexNetwork& net, const CouplingConfig& coupling) {
  if (const auto* w = std::get_if<SupraWeight>(&coupling)) return build_supra(net, w->w);
  return build_dynamic(net, std::get<DynamicCoupling>(coupling));
}

SupraOperator disjoint_operator(const MultiplexNetwork& net, Model model) {
  if (model == Model::kSupra) return build_supra(net, 0.0);
  return build_dynamic(net, DynamicCoupling::disjoint(net.nodes(), net.layer_count()));
}

ReducedOperator reduce_indivisible(const SupraOperator& op) {
  const std::size_t n = op.nodes();
  const auto nn = static_cast<Eigen::Index>(n);
  Matrix reduced = Matrix::Zero(nn, nn);
  for (std::size_t a = 0; a < op.layers(); ++a) {
    for (std::size_t b = 0; b < op.layers(); ++b) {
      reduced += op.laplacian().block(block_start(a, n), block_start(b, n), nn, nn);
    }
  }
  // Exact symmetry; block sums in a different order can differ in the last bit.
  reduced = symmetrize(reduced);
  Matrix adjacency = -reduced;
  adjacency.diagonal().setZero();
  return {std::move(adjacency), std::move(reduced)};
}

std::size_t connected_components(const Matrix& adjacency) {
  const auto m = static_cast<std::size_t>(adjacency.rows());
  std::vector<std::size_t> parent(m);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t components = m;
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = j + 1; i < m; ++i) {
      if (adjacency(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0) {
        const auto ri = find(i);
        const auto rj = find(j);
        if (ri != rj) {
          parent[ri] = rj;
          --components;
        }
      }
    }
  }
  return components;
}

DynamicCoupling parse_coupling(std::istream& in, std::size_t nodes, std::size_t layers) {
  DynamicCoupling coupling(nodes, layers);
  std::string raw;
  std::size_t line_no = 0;
  auto index = [&](std::string_view token, std::size_t bound, const char* what) {
    const auto v = parse_integer(token);
    if (!v || *v < 0 || static_cast<std::size_t>(*v) >= bound) {
      throw ParseError(module::kOperators, line_no, std::string(what) + " index out of range");
    }
    return static_cast<std::size_t>(*v);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') continue;
    const auto fields = split_fields(line);
    if (fields.size() != 3 && fields.size() != 4) {
      throw ParseError(module::kOperators, line_no,
                       "expected '<alpha> <beta> <value>' or '<alpha> <beta> <node> <value>'");
    }
    const auto alpha = index(fields[0], layers, "layer");
    const auto beta = index(fields[1], layers, "layer");
    const auto value = parse_real(fields.back());
    if (!value || !std::isfinite(*value) || *value < 0.0) {
      throw ParseError(module::kOperators, line_no, "coupling value must be a non-negative real");
    }
    if (fields.size() == 3) {
      coupling.set_block(alpha, beta, *value);
    } else {
      coupling.set(alpha, beta, index(fields[2], nodes, "node"), *value);
    }
  }
  return coupling;
}

DynamicCoupling load_coupling(const std::filesystem::path& path, std::size_t nodes,
                              std::size_t layers) {
  std::ifstream in(path);
  if (!in) throw Error(module::kOperators, "cannot open '" + path.string() + "'");
  return parse_coupling(in, nodes, layers);
}

}  // namespace mxspec
