#include "expfam/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace expfam {

Vec CircuitVector::to_double() const {
  Vec v(entries.size());
  for (size_t i = 0; i < entries.size(); ++i) v[long(i)] = rat_to_double(entries[i]);
  return v;
}

namespace {

CircuitVector make_circuit(const std::vector<int>& support, const RatVec& kernel_on_support,
                           int n) {
  RatVec full(n, Rat(0));
  for (size_t k = 0; k < support.size(); ++k) full[support[k]] = kernel_on_support[k];
  full = primitive_normalize(full);
  CircuitVector c;
  c.support = support;
  c.entries = std::move(full);
  return c;
}

// next k-combination of {0..n-1} in lexicographic order
bool next_combination(std::vector<int>& idx, int n) {
  int k = int(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

}  // namespace

CircuitBasis circuit_basis(const ExponentialFamily& fam, const CircuitScanOptions& opts) {
  const int n = fam.size();
  const int rank = fam.dim + 1;
  CircuitBasis basis;
  if (fam.normal_dim() == 0) return basis;

  std::vector<unsigned long long> found_masks;
  long long visited = 0;
  const int max_size = std::min(n, rank + 1);
  for (int s = 2; s <= max_size; ++s) {
    std::vector<int> idx(s);
    std::iota(idx.begin(), idx.end(), 0);
    do {
      if (++visited > opts.max_subsets) {
        throw Error(ErrorCode::StateSpaceTooLarge,
                    "circuit scan exceeded budget of " + std::to_string(opts.max_subsets) +
                        " subsets");
      }
      unsigned long long mask = 0;
      for (int x : idx) mask |= 1ULL << x;
      bool contains_found = false;
      for (unsigned long long fm : found_masks) {
        if ((fm & mask) == fm) {
          contains_found = true;
          break;
        }
      }
      if (contains_found) continue;
      auto kernel = fam.extended_stats.select_columns(idx).kernel_basis();
      if (kernel.size() != 1) continue;
      bool full_support = true;
      for (const Rat& q : kernel[0]) {
        if (sgn(q) == 0) {
          full_support = false;
          break;
        }
      }
      if (!full_support) continue;
      basis.circuits.push_back(make_circuit(idx, kernel[0], n));
      found_masks.push_back(mask);
    } while (next_combination(idx, n));
  }
  std::sort(basis.circuits.begin(), basis.circuits.end(),
            [](const CircuitVector& a, const CircuitVector& b) { return a.support < b.support; });
  return basis;
}

CircuitVector circuit_through(const ExponentialFamily& fam, const RatVec& u, int x) {
  const int n = fam.size();
  if (int(u.size()) != n) throw Error(ErrorCode::DimensionMismatch, "u has wrong length");
  for (const Rat& r : fam.extended_stats.multiply(u)) {
    if (sgn(r) != 0) throw Error(ErrorCode::NotInNormalSpace, "u is not in the normal space");
  }
  if (x < 0 || x >= n || sgn(u[x]) == 0) {
    throw Error(ErrorCode::ZeroAtState, "u vanishes at the requested state");
  }
  std::vector<int> supp;
  for (int y = 0; y < n; ++y)
    if (sgn(u[y]) != 0) supp.push_back(y);

  // smallest subset of supp(u) through x that is a circuit
  std::vector<int> others;
  for (int y : supp)
    if (y != x) others.push_back(y);
  for (int s = 2; s <= int(supp.size()); ++s) {
    std::vector<int> pick(s - 1);
    std::iota(pick.begin(), pick.end(), 0);
    bool more = s - 1 <= int(others.size());
    while (more) {
      std::vector<int> subset{x};
      for (int k : pick) subset.push_back(others[k]);
      std::sort(subset.begin(), subset.end());
      auto kernel = fam.extended_stats.select_columns(subset).kernel_basis();
      if (kernel.size() == 1) {
        bool full = true;
        for (const Rat& q : kernel[0])
          if (sgn(q) == 0) full = false;
        if (full) return make_circuit(subset, kernel[0], n);
      }
      more = next_combination(pick, int(others.size()));
    }
  }
  // unreachable: u itself witnesses a dependency through x
  throw Error(ErrorCode::NotInNormalSpace, "no circuit through state found");
}

MembershipReport closure_membership(const ExponentialFamily& fam, const CircuitBasis& basis,
                                    const Vec& P, double tol) {
  validate_probability_vector(P, 1e-9);
  MembershipReport report;
  report.member = true;
  for (const CircuitVector& c : basis.circuits) {
    double log_lhs = 0.0, log_rhs = 0.0;
    bool lhs_zero = false, rhs_zero = false, zero_seen = false;
    for (int x : c.support) {
      double coeff = rat_to_double(c.entries[x]);
      bool positive_part = coeff > 0;
      double& acc = positive_part ? log_lhs : log_rhs;
      bool& side_zero = positive_part ? lhs_zero : rhs_zero;
      if (P[x] == 0.0) {
        side_zero = true;
        zero_seen = true;
      } else {
        acc += std::abs(coeff) * (std::log(P[x]) - std::log(fam.nu[x]));
      }
    }
    CircuitResidual res;
    res.support = c.support;
    res.used_zero_rule = zero_seen;
    if (lhs_zero || rhs_zero) {
      res.zero_mismatch = (lhs_zero != rhs_zero);
      res.log_residual = res.zero_mismatch ? std::numeric_limits<double>::infinity() : 0.0;
    } else {
      res.zero_mismatch = false;
      res.log_residual = std::abs(log_lhs - log_rhs);
    }
    if (res.zero_mismatch || res.log_residual > tol) report.member = false;
    report.max_residual = std::max(report.max_residual, res.log_residual);
    report.residuals.push_back(std::move(res));
  }
  return report;
}

CoparallelPartition coparallel_classes(const ExponentialFamily& fam, const CircuitBasis& basis) {
  const int n = fam.size();
  std::vector<std::vector<int>> incidence(n);
  for (int ci = 0; ci < basis.size(); ++ci) {
    for (int x : basis.circuits[ci].support) incidence[x].push_back(ci);
  }
  CoparallelPartition part;
  std::vector<bool> assigned(n, false);
  for (int x = 0; x < n; ++x) {
    if (assigned[x]) continue;
    if (incidence[x].empty()) {
      part.loops.push_back(x);
      assigned[x] = true;
      continue;
    }
    std::vector<int> cls;
    for (int y = x; y < n; ++y) {
      if (!assigned[y] && incidence[y] == incidence[x]) {
        cls.push_back(y);
        assigned[y] = true;
      }
    }
    part.classes.push_back(std::move(cls));
  }
  return part;
}

std::vector<MixtureComponent> mixture_decomposition(const ExponentialFamily& fam,
                                                    const CircuitBasis& basis) {
  const int n = fam.size();
  std::vector<int> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  };
  for (const CircuitVector& c : basis.circuits) {
    for (size_t k = 1; k < c.support.size(); ++k) {
      int a = find(c.support[0]), b = find(c.support[k]);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<std::vector<int>> comps(n);
  for (int x = 0; x < n; ++x) comps[find(x)].push_back(x);
  std::vector<MixtureComponent> result;
  for (int r = 0; r < n; ++r) {
    if (comps[r].empty()) continue;
    result.push_back(MixtureComponent{comps[r], restrict_family(fam, comps[r])});
  }
  return result;
}

int rank_of_class(const ExponentialFamily& fam, const CircuitBasis& basis,
                  const std::vector<int>& cls) {
  CoparallelPartition part = coparallel_classes(fam, basis);
  std::vector<int> sorted = cls;
  std::sort(sorted.begin(), sorted.end());
  bool is_class = false;
  for (const auto& c : part.classes)
    if (c == sorted) is_class = true;
  if (!is_class) {
    throw Error(ErrorCode::NotACoparallelClass, "given state set is not a coparallel class");
  }
  RatMatrix c_matrix(basis.size(), fam.size());
  for (int i = 0; i < basis.size(); ++i) c_matrix.set_row(i, basis.circuits[i].entries);
  return c_matrix.rank_of_columns(sorted);
}

}  // namespace expfam
