#pragma once

#include <string>
#include <vector>

#include "mxspec/network.hpp"
#include "mxspec/operators.hpp"

namespace mxspec {

/// ±1 indicator of a bipartition: +1 for cluster 0, -1 for cluster 1.
Vector indicator(const Partition& part);

/// Total boundary weight: the sum of adj(p, q) over every ordered pair (p, q)
/// in different clusters. For a symmetric operator each boundary pair
/// contributes adj(p, q) + adj(q, p), the directed weight in both
/// directions, and for a bipartition the result equals s^T L s / 2.
double cut_cost(const Matrix& adjacency, const Partition& part);
double cut_cost(const SupraOperator& op, const Partition& part);

/// s^T L s for the indicator of a bipartition.
double quadratic_form(const Matrix& laplacian, const Partition& part);

struct CutTerm {
  std::string name;
  double value;
};

struct CutReport {
  /// cut_cost by direct summation.
  double total = 0.0;
  /// s^T L s / 2.
  double quadratic_form = 0.0;
  /// Named terms summing to s^T L s.
  std::vector<CutTerm> decomposition;
  /// How the terms are scaled relative to the operator's blocks.
  std::string normalization;

  double decomposition_sum() const;
};

/// Supra model: s^T L s = sum_a s_a^T L_a s_a + k^2 n w - w sum_{a,b} s_a^T s_b,
/// with L_a the Laplacian of the symmetrized layer a. Terms are named
/// `intra[a]`, `clique`, `alignment`.
CutReport decompose_supra(const MultiplexNetwork& net, double w, const Partition& part);

/// Dynamic model with B^{a,b} = C^{a,b} A^b + (C^{b,a} A^a)^T, whose operator
/// blocks are B^{a,b} / 2. Terms: `intra[a]` = s_a^T L_{B^{a,a}/2} s_a and,
/// for each ordered pair a != b, `inter[a,b]` = (M^{a,b} - s_a^T B^{a,b} s_b) / 2
/// where M^{a,b} is the total weight of B^{a,b}.
CutReport decompose_dynamic(const MultiplexNetwork& net, const DynamicCoupling& coupling,
                            const Partition& part);

struct MinCut {
  Partition partition;
  double cost = 0.0;
};

inline constexpr std::size_t kBruteForceLimit = 20;

/// Exhaustive minimum over all non-trivial bipartitions with element 0 in
/// cluster 0. Ties go to the lexicographically smallest label vector.
/// Throws for more than kBruteForceLimit elements.
MinCut brute_force_min_cut(const Matrix& adjacency);
MinCut brute_force_min_cut(const SupraOperator& op);

}  // namespace mxspec
