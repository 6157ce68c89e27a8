#pragma once

#include <vector>

#include "expfam/family.hpp"

namespace expfam {

/// Minimal-support vector of the normal space, in primitive integer form with
/// the first nonzero entry (in state order) positive.
struct CircuitVector {
  std::vector<int> support;  // sorted
  RatVec entries;            // length N, exactly zero off support

  Vec to_double() const;
};

struct CircuitBasis {
  std::vector<CircuitVector> circuits;  // sorted lexicographically by support

  int size() const { return int(circuits.size()); }
};

struct CoparallelPartition {
  std::vector<std::vector<int>> classes;  // sorted by smallest element
  std::vector<int> loops;                 // states outside every circuit
};

struct CircuitScanOptions {
  long long max_subsets = 10000000;  // enumeration budget
};

/// All circuits of the family's normal space, by subset scan in increasing
/// support size with exact rank tests.
CircuitBasis circuit_basis(const ExponentialFamily& fam, const CircuitScanOptions& opts = {});

/// Circuit vector c with supp(c) inside supp(u) and c(x) != 0 (u must lie in
/// the normal space, exactly).
CircuitVector circuit_through(const ExponentialFamily& fam, const RatVec& u, int x);

struct CircuitResidual {
  std::vector<int> support;
  double log_residual;  // |log lhs - log rhs| when both sides positive
  bool zero_mismatch;   // one side vanished and the other did not
  bool used_zero_rule;  // some P(x) = 0 entered a monomial
};

struct MembershipReport {
  bool member = false;
  double max_residual = 0.0;
  std::vector<CircuitResidual> residuals;
};

/// Binomial closure test: P is in the closure iff every basis circuit
/// satisfies prod (P/nu)^{u+} = prod (P/nu)^{u-}, with 0^a = 0 for a > 0 and
/// empty product = 1.
MembershipReport closure_membership(const ExponentialFamily& fam, const CircuitBasis& basis,
                                    const Vec& P, double tol = 1e-9);

/// x ~ y iff the basis circuits containing x are exactly those containing y
/// (and there is at least one).
CoparallelPartition coparallel_classes(const ExponentialFamily& fam, const CircuitBasis& basis);

struct MixtureComponent {
  std::vector<int> states;
  ExponentialFamily subfamily;
};

/// Connected components of the circuit hypergraph; loops become singleton
/// 0-dimensional components. The closure of the family is the mixture of the
/// component families.
std::vector<MixtureComponent> mixture_decomposition(const ExponentialFamily& fam,
                                                    const CircuitBasis& basis);

/// Rank of the circuit-basis submatrix on the columns of a coparallel class
/// (always 1; throws NotACoparallelClass on other inputs).
int rank_of_class(const ExponentialFamily& fam, const CircuitBasis& basis,
                  const std::vector<int>& cls);

}  // namespace expfam
