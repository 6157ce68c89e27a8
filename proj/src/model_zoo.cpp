#include "expfam/model_zoo.hpp"

#include <algorithm>
#include <numeric>

namespace expfam {

long HierarchicalSpec::states() const {
  long n = 1;
  for (int c : cardinalities) {
    if (c <= 0) throw Error(ErrorCode::SchemaError, "factor cardinality must be positive");
    n *= c;
  }
  return n;
}

std::vector<int> unrank_product_state(long index, const std::vector<int>& cardinalities) {
  std::vector<int> config(cardinalities.size());
  for (int i = int(cardinalities.size()) - 1; i >= 0; --i) {
    config[i] = int(index % cardinalities[i]);
    index /= cardinalities[i];
  }
  return config;
}

long rank_product_state(const std::vector<int>& config, const std::vector<int>& cardinalities) {
  long index = 0;
  for (size_t i = 0; i < cardinalities.size(); ++i) index = index * cardinalities[i] + config[i];
  return index;
}

namespace {

std::vector<std::string> product_labels(const std::vector<int>& cardinalities) {
  long n = 1;
  for (int c : cardinalities) n *= c;
  bool digits = std::all_of(cardinalities.begin(), cardinalities.end(),
                            [](int c) { return c <= 10; });
  std::vector<std::string> labels;
  labels.reserve(n);
  for (long s = 0; s < n; ++s) {
    std::vector<int> config = unrank_product_state(s, cardinalities);
    std::string l;
    for (size_t i = 0; i < config.size(); ++i) {
      if (!digits && i > 0) l += "_";
      l += std::to_string(config[i]);
    }
    labels.push_back(std::move(l));
  }
  return labels;
}

}  // namespace

ExponentialFamily partition_family(const Partition& part) {
  const int n = part.n_states();
  RatMatrix stats(int(part.blocks.size()), n);
  for (size_t b = 0; b < part.blocks.size(); ++b) {
    for (int x : part.blocks[b]) stats.at(int(b), x) = 1;
  }
  return build_family(StateSpace::indexed(n), Vec::Ones(n), SufficientStatistics(stats));
}

ExponentialFamily hierarchical_family(const HierarchicalSpec& spec) {
  const int n_factors = spec.factors();
  const long n = spec.states();
  for (const auto& gen : spec.generators) {
    for (int i : gen) {
      if (i < 0 || i >= n_factors) {
        throw Error(ErrorCode::BadGenerator,
                    "generator factor " + std::to_string(i) + " outside 0.." +
                        std::to_string(n_factors - 1));
      }
    }
  }
  std::vector<RatVec> rows;
  for (const auto& gen : spec.generators) {
    std::vector<int> S = gen;
    std::sort(S.begin(), S.end());
    S.erase(std::unique(S.begin(), S.end()), S.end());
    std::vector<int> sub_cards;
    for (int i : S) sub_cards.push_back(spec.cardinalities[i]);
    long n_configs = 1;
    for (int c : sub_cards) n_configs *= c;
    for (long cfg = 0; cfg < n_configs; ++cfg) {
      std::vector<int> sub = unrank_product_state(cfg, sub_cards);
      RatVec row(n, Rat(0));
      for (long x = 0; x < n; ++x) {
        std::vector<int> full = unrank_product_state(x, spec.cardinalities);
        bool match = true;
        for (size_t k = 0; k < S.size(); ++k) {
          if (full[S[k]] != sub[k]) {
            match = false;
            break;
          }
        }
        if (match) row[x] = 1;
      }
      rows.push_back(std::move(row));
    }
  }
  RatMatrix stats =
      rows.empty() ? RatMatrix(0, int(n)) : RatMatrix::from_rows(rows);
  return build_family(StateSpace(product_labels(spec.cardinalities)), Vec::Ones(n),
                      SufficientStatistics(stats));
}

GroupingFamily grouping_family(const std::vector<int>& K, const std::vector<int>& cardinalities) {
  const int n_factors = int(cardinalities.size());
  for (int i : K) {
    if (i < 0 || i >= n_factors)
      throw Error(ErrorCode::BadGenerator, "grouping factor outside the product space");
  }
  long n = 1;
  for (int c : cardinalities) n *= c;
  std::vector<int> K_sorted = K;
  std::sort(K_sorted.begin(), K_sorted.end());
  K_sorted.erase(std::unique(K_sorted.begin(), K_sorted.end()), K_sorted.end());

  // blocks = fibers of the K-coordinates
  std::map<std::vector<int>, std::vector<int>> fibers;
  for (long x = 0; x < n; ++x) {
    std::vector<int> full = unrank_product_state(x, cardinalities);
    std::vector<int> key;
    for (int i : K_sorted) key.push_back(full[i]);
    fibers[key].push_back(int(x));
  }
  std::vector<std::vector<int>> blocks;
  for (auto& [key, states] : fibers) blocks.push_back(states);
  Partition part = Partition::from_blocks(std::move(blocks), int(n));

  ExponentialFamily fam = partition_family(part);
  // keep the product labels rather than the generic indexed ones
  fam = build_family(StateSpace(product_labels(cardinalities)), fam.nu, fam.stats);
  return GroupingFamily{std::move(fam), std::move(part)};
}

long marginal_polytope_vertex_count(const HierarchicalSpec& spec) {
  std::vector<bool> used(spec.factors(), false);
  for (const auto& gen : spec.generators) {
    for (int i : gen) {
      if (i < 0 || i >= spec.factors())
        throw Error(ErrorCode::BadGenerator, "generator factor outside the product space");
      used[i] = true;
    }
  }
  long count = 1;
  for (int i = 0; i < spec.factors(); ++i) {
    if (used[i]) count *= spec.cardinalities[i];
  }
  return count;
}

ExponentialFamily unique_log2_family_n3(const RatVec& u) {
  if (u.size() != 3) throw Error(ErrorCode::DimensionMismatch, "u must live on three states");
  Rat sum(0), plus(0);
  bool all_zero = true;
  for (const Rat& q : u) {
    sum += q;
    if (sgn(q) > 0) plus += q;
    if (sgn(q) != 0) all_zero = false;
  }
  if (all_zero) throw Error(ErrorCode::ZeroVector, "u = 0");
  if (sgn(sum) != 0) throw Error(ErrorCode::NotSumZero, "u does not sum to zero");
  RatVec w(3);
  for (int i = 0; i < 3; ++i) {
    w[i] = u[i] / plus;  // now w+ has total mass one
    if (sgn(w[i]) == 0) {
      throw Error(ErrorCode::DegenerateSupport,
                  "u vanishes at a state, so u+ + u- is not strictly positive");
    }
  }
  Vec nu(3);
  for (int i = 0; i < 3; ++i) nu[i] = std::abs(rat_to_double(w[i]));

  // statistics: exact basis of the orthogonal complement of u
  RatMatrix u_row(1, 3);
  for (int i = 0; i < 3; ++i) u_row.at(0, i) = w[i];
  std::vector<RatVec> complement = u_row.kernel_basis();
  RatMatrix stats = RatMatrix::from_rows(complement);
  return build_family(StateSpace::indexed(3), nu, SufficientStatistics(stats));
}

ExponentialFamily direct_sum(const ExponentialFamily& a, const ExponentialFamily& b) {
  const int na = a.size(), nb = b.size();
  const int n = na + nb;
  Vec nu(n);
  nu.head(na) = a.nu;
  nu.tail(nb) = b.nu;
  RatMatrix stats(a.extended_stats.rows() + b.extended_stats.rows(), n);
  for (int i = 0; i < a.extended_stats.rows(); ++i)
    for (int j = 0; j < na; ++j) stats.at(i, j) = a.extended_stats.at(i, j);
  for (int i = 0; i < b.extended_stats.rows(); ++i)
    for (int j = 0; j < nb; ++j) stats.at(a.extended_stats.rows() + i, na + j) =
        b.extended_stats.at(i, j);
  return build_family(StateSpace::indexed(n), nu, SufficientStatistics(stats));
}

}  // namespace expfam
