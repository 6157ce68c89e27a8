#pragma once

#include "expfam/family.hpp"
#include "expfam/partition.hpp"

namespace expfam {

/// Product-space interaction structure. Factors are indexed 0..n-1 internally
/// (the file format and CLI use 1-based factor names). States of the product
/// space are indexed row-major with factor 0 slowest.
struct HierarchicalSpec {
  std::vector<int> cardinalities;
  std::vector<std::vector<int>> generators;  // Delta; an empty generator is the constant row

  int factors() const { return int(cardinalities.size()); }
  long states() const;
};

/// Uniform reference measure, one indicator row per block; dim = #blocks - 1.
ExponentialFamily partition_family(const Partition& part);

/// Hierarchical family of Delta: one indicator row per (generator,
/// configuration) pair, uniform reference measure.
ExponentialFamily hierarchical_family(const HierarchicalSpec& spec);

struct GroupingFamily {
  ExponentialFamily family;
  Partition partition;
};

/// Partition model of the equivalence "equal K-coordinates" on a product
/// space; homogeneous of coarseness prod_{i not in K} N_i.
GroupingFamily grouping_family(const std::vector<int>& K, const std::vector<int>& cardinalities);

/// prod_{i in union(Delta)} N_i.
long marginal_polytope_vertex_count(const HierarchicalSpec& spec);

/// The unique one-dimensional family on three states with normal space R u
/// and maximal divergence log 2: reference measure u+ + u- after normalizing
/// u+ to total mass one.
ExponentialFamily unique_log2_family_n3(const RatVec& u);

/// Family on the disjoint union of two state spaces whose closure is the
/// mixture of the two closures (block statistics plus part indicators).
ExponentialFamily direct_sum(const ExponentialFamily& a, const ExponentialFamily& b);

/// State index <-> per-factor configuration, row-major with factor 0 slowest.
std::vector<int> unrank_product_state(long index, const std::vector<int>& cardinalities);
long rank_product_state(const std::vector<int>& config, const std::vector<int>& cardinalities);

}  // namespace expfam
