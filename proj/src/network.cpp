#include "mxspec/network.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <algorithm>
#include <optional>
#include <set>
#include <tuple>
#include <sstream>
#include <string>

#include "mxspec/error.hpp"
#include "mxspec/text.hpp"

namespace mxspec {

MultiplexNetwork::MultiplexNetwork(std::vector<Matrix> layers) : layers_(std::move(layers)) {
  if (layers_.empty()) throw Error(module::kCore, "a multiplex network needs at least one layer");
  nodes_ = static_cast<std::size_t>(layers_.front().rows());
  if (nodes_ == 0) throw Error(module::kCore, "a multiplex network needs at least one node");
  for (std::size_t a = 0; a < layers_.size(); ++a) {
    const Matrix& m = layers_[a];
    if (static_cast<std::size_t>(m.rows()) != nodes_ ||
        static_cast<std::size_t>(m.cols()) != nodes_) {
      throw Error(module::kCore, "layer " + std::to_string(a) + " is not " +
                                     std::to_string(nodes_) + "x" + std::to_string(nodes_));
    }
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        const double v = m(i, j);
        if (!std::isfinite(v) || v < 0.0) {
          throw Error(module::kCore, "layer " + std::to_string(a) +
                                         " has a negative or non-finite weight");
        }
        if (i == j && v != 0.0) {
          throw Error(module::kCore, "layer " + std::to_string(a) + " has a self-loop on node " +
                                         std::to_string(i));
        }
      }
    }
  }
}

MultiplexNetwork MultiplexNetwork::empty(std::size_t nodes, std::size_t layers) {
  const auto n = static_cast<Eigen::Index>(nodes);
  return MultiplexNetwork(std::vector<Matrix>(layers, Matrix::Zero(n, n)));
}

const Matrix& MultiplexNetwork::layer(std::size_t alpha) const {
  if (alpha >= layers_.size()) {
    throw Error(module::kCore, "layer index " + std::to_string(alpha) + " out of range");
  }
  return layers_[alpha];
}

bool MultiplexNetwork::operator==(const MultiplexNetwork& other) const {
  if (nodes_ != other.nodes_ || layers_.size() != other.layers_.size()) return false;
  for (std::size_t a = 0; a < layers_.size(); ++a) {
    if (layers_[a] != other.layers_[a]) return false;
  }
  return true;
}

NodeCopyIndex::NodeCopyIndex(std::size_t nodes, std::size_t layers)
    : nodes_(nodes), layers_(layers) {
  if (nodes == 0 || layers == 0) throw Error(module::kCore, "node and layer counts must be positive");
}

std::size_t NodeCopyIndex::flat(std::size_t layer, std::size_t node) const {
  if (layer >= layers_ || node >= nodes_) {
    throw Error(module::kCore, "node copy (" + std::to_string(layer) + ", " +
                                   std::to_string(node) + ") out of range");
  }
  return layer * nodes_ + node;
}

NodeCopy NodeCopyIndex::unflatten(std::size_t index) const {
  if (index >= size()) {
    throw Error(module::kCore, "flat index " + std::to_string(index) + " out of range");
  }
  return {index / nodes_, index % nodes_};
}

DynamicCoupling::DynamicCoupling(std::size_t nodes, std::size_t layers)
    : nodes_(nodes), layers_(layers), coeff_(nodes * layers * layers, 0.0) {}

DynamicCoupling DynamicCoupling::identity(std::size_t nodes, std::size_t layers) {
  DynamicCoupling c(nodes, layers);
  std::fill(c.coeff_.begin(), c.coeff_.end(), 1.0);
  return c;
}

DynamicCoupling DynamicCoupling::disjoint(std::size_t nodes, std::size_t layers) {
  DynamicCoupling c(nodes, layers);
  for (std::size_t a = 0; a < layers; ++a) c.set_block(a, a, 1.0);
  return c;
}

DynamicCoupling DynamicCoupling::uniform(std::size_t nodes, const Matrix& weights) {
  if (weights.rows() != weights.cols()) {
    throw Error(module::kOperators, "layer coupling weights must be square");
  }
  const auto k = static_cast<std::size_t>(weights.rows());
  DynamicCoupling c(nodes, k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) c.set_block(a, b, weights(a, b));
  }
  return c;
}

std::size_t DynamicCoupling::offset(std::size_t alpha, std::size_t beta, std::size_t i) const {
  if (alpha >= layers_ || beta >= layers_ || i >= nodes_) {
    throw Error(module::kOperators, "coupling index out of range");
  }
  return (alpha * layers_ + beta) * nodes_ + i;
}

double DynamicCoupling::at(std::size_t alpha, std::size_t beta, std::size_t i) const {
  return coeff_[offset(alpha, beta, i)];
}

void DynamicCoupling::set(std::size_t alpha, std::size_t beta, std::size_t i, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    throw Error(module::kOperators, "coupling coefficients must be finite and non-negative");
  }
  coeff_[offset(alpha, beta, i)] = value;
}

void DynamicCoupling::set_block(std::size_t alpha, std::size_t beta, double value) {
  for (std::size_t i = 0; i < nodes_; ++i) set(alpha, beta, i, value);
}

Vector DynamicCoupling::diagonal(std::size_t alpha, std::size_t beta) const {
  Vector d(static_cast<Eigen::Index>(nodes_));
  const std::size_t base = offset(alpha, beta, 0);
  for (std::size_t i = 0; i < nodes_; ++i) d(static_cast<Eigen::Index>(i)) = coeff_[base + i];
  return d;
}

int Partition::effective_clusters() const {
  std::set<int> seen(labels.begin(), labels.end());
  return static_cast<int>(seen.size());
}

void Partition::validate() const {
  std::vector<bool> used(static_cast<std::size_t>(std::max(clusters, 0)), false);
  for (int label : labels) {
    if (label < 0 || label >= clusters) {
      throw Error(module::kSpectral, "partition label " + std::to_string(label) +
                                         " outside 0.." + std::to_string(clusters - 1));
    }
    used[static_cast<std::size_t>(label)] = true;
  }
  if (!degenerate) {
    for (std::size_t c = 0; c < used.size(); ++c) {
      if (!used[c]) throw Error(module::kSpectral, "cluster " + std::to_string(c) + " is empty");
    }
  }
}

Partition lift_to_copies(const Partition& nodes, std::size_t layers) {
  Partition out;
  out.clusters = nodes.clusters;
  out.degenerate = nodes.degenerate;
  out.domain = PartitionDomain::kNodeCopies;
  out.labels.reserve(nodes.labels.size() * layers);
  for (std::size_t a = 0; a < layers; ++a) {
    out.labels.insert(out.labels.end(), nodes.labels.begin(), nodes.labels.end());
  }
  return out;
}

MultiplexNetwork parse_network(std::istream& in) {
  std::optional<std::size_t> nodes;
  std::optional<std::size_t> layers;
  std::vector<Matrix> mats;
  std::set<std::tuple<std::size_t, std::size_t, std::size_t>> seen;

  auto header_value = [](std::string_view token, std::size_t line_no) {
    auto v = parse_integer(token);
    if (!v || *v <= 0) throw ParseError(module::kCore, line_no, "header value must be a positive integer");
    return static_cast<std::size_t>(*v);
  };

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') continue;
    const auto fields = split_fields(line);
    if (line.front() == '#') {
      if (fields.size() != 2) throw ParseError(module::kCore, line_no, "malformed header");
      if (!mats.empty()) throw ParseError(module::kCore, line_no, "header after edge lines");
      if (fields[0] == "#nodes") {
        nodes = header_value(fields[1], line_no);
      } else if (fields[0] == "#layers") {
        layers = header_value(fields[1], line_no);
      } else {
        throw ParseError(module::kCore, line_no, "unknown header '" + std::string(fields[0]) + "'");
      }
      continue;
    }
    if (!nodes || !layers) throw ParseError(module::kCore, line_no, "edge before #nodes/#layers header");
    if (mats.empty()) {
      const auto n = static_cast<Eigen::Index>(*nodes);
      mats.assign(*layers, Matrix::Zero(n, n));
    }
    if (fields.size() != 4) {
      throw ParseError(module::kCore, line_no, "expected '<layer> <src> <dst> <weight>'");
    }
    const auto layer = parse_integer(fields[0]);
    const auto src = parse_integer(fields[1]);
    const auto dst = parse_integer(fields[2]);
    const auto weight = parse_real(fields[3]);
    if (!layer || !src || !dst || !weight) throw ParseError(module::kCore, line_no, "malformed edge line");
    if (*layer < 0 || static_cast<std::size_t>(*layer) >= *layers) {
      throw ParseError(module::kCore, line_no, "layer index out of range");
    }
    if (*src < 0 || *dst < 0 || static_cast<std::size_t>(*src) >= *nodes ||
        static_cast<std::size_t>(*dst) >= *nodes) {
      throw ParseError(module::kCore, line_no, "node index out of range");
    }
    if (*src == *dst) throw ParseError(module::kCore, line_no, "self-loop");
    if (!std::isfinite(*weight) || *weight < 0.0) {
      throw ParseError(module::kCore, line_no, "weight must be finite and non-negative");
    }
    const auto key = std::make_tuple(static_cast<std::size_t>(*layer), static_cast<std::size_t>(*src),
                                     static_cast<std::size_t>(*dst));
    if (!seen.insert(key).second) throw ParseError(module::kCore, line_no, "duplicate edge");
    mats[static_cast<std::size_t>(*layer)](*dst, *src) = *weight;
  }
  if (!nodes || !layers) throw ParseError(module::kCore, line_no, "missing #nodes/#layers header");
  if (mats.empty()) return MultiplexNetwork::empty(*nodes, *layers);
  return MultiplexNetwork(std::move(mats));
}

MultiplexNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(module::kCore, "cannot open '" + path.string() + "'");
  return parse_network(in);
}

void write_network(const MultiplexNetwork& net, std::ostream& out) {
  out << "#nodes " << net.nodes() << "\n#layers " << net.layer_count() << "\n";
  for (std::size_t a = 0; a < net.layer_count(); ++a) {
    const Matrix& m = net.layer(a);
    for (Eigen::Index src = 0; src < m.cols(); ++src) {
      for (Eigen::Index dst = 0; dst < m.rows(); ++dst) {
        if (m(dst, src) != 0.0) {
          out << a << ' ' << src << ' ' << dst << ' ' << format_real(m(dst, src)) << '\n';
        }
      }
    }
  }
}

void save_network(const MultiplexNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error(module::kCore, "cannot write '" + path.string() + "'");
  write_network(net, out);
  out.flush();
  if (!out) throw Error(module::kCore, "I/O failure writing '" + path.string() + "'");
}

}  // namespace mxspec
