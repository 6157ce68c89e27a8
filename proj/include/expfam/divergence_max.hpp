#pragma once

#include "expfam/circuits.hpp"
#include "expfam/family.hpp"
#include "expfam/partition.hpp"
#include "expfam/projection.hpp"

namespace expfam {

/// A point of the boundary set: u in the normal space with u+ and u- each of
/// total mass one. Coordinates in the orthonormal normal basis are the
/// primary representation; u is their expansion with sub-1e-14 entries
/// snapped to exact zero.
struct KernelDirection {
  Vec coeffs;
  Vec u;

  Vec u_plus() const;
  Vec u_minus() const;
};

/// Validates membership in the normal space (tol on the projection residual)
/// and rescales so that u+ has total mass one.
KernelDirection make_kernel_direction(const ExponentialFamily& fam, const Vec& u_raw,
                                      double tol = 1e-10);

/// Dbar(u) = sum_x u(x) log(|u(x)| / nu(x)), with 0 log 0 = 0.
double dbar(const ExponentialFamily& fam, const Vec& u, double tol = 1e-8);

inline Vec psi_plus(const KernelDirection& k) { return k.u_plus(); }

/// Psi_E(P) = (P - P_E) / (P - P_E)+(X); defined off the closure only.
KernelDirection psi_family(const ExponentialFamily& fam, const Vec& P, double tol = 1e-9);

struct LocalMaximizer {
  Vec point;           // u+ = the maximizer of D_E
  KernelDirection u;   // Psi_E(point)
  double d_value;      // D_E(point), recomputed via ri_project
  double dbar_value;   // Dbar(u)
  double duality_gap;  // |d_value - log(1 + exp(dbar_value))|
  double roundtrip;    // max-norm of u - Psi_E(Psi+(u))
};

struct MaximizerOptions {
  int n_starts = 64;
  unsigned long long seed = 0;
  double tol = 1e-9;
  int max_ascent_iter = 400;
  double duality_tol = 1e-7;
  double merge_tv = 1e-6;        // duplicate merging distance on u+
  bool exact_boundary = true;    // exact faces in validation projections
};

struct MaximizerReport {
  std::vector<LocalMaximizer> local_maxima;  // sorted by d_value descending
  double global_estimate = 0.0;
  int starts = 0;
  unsigned long long seed = 0;
  long long total_iterations = 0;
};

/// Multistart projected ascent of Dbar over the boundary set in normal-basis
/// coordinates, with stratum-snapped Newton polish; candidates are validated
/// through the primal (ri_project) and the duality relation
/// D_E(u+) = log(1 + exp(Dbar(u))).
MaximizerReport local_maximizers(const ExponentialFamily& fam, const MaximizerOptions& opts = {});

struct OracleOptions {
  double grid_step = 0.05;
  long long budget = 20000000;  // grid evaluations
  int refine_rounds = 8;
};

/// Brute-force verification oracle: enumerate supports of size <= dim+1 with
/// independent extended columns, grid-search D_E on each support simplex,
/// refine the best cells by shrinking local search.
double max_divergence_oracle(const ExponentialFamily& fam, const OracleOptions& opts = {});

struct CriticalityReport {
  double max_violation = 0.0;       // max_v |v(supp u)| over the normal basis
  std::vector<double> basis_sums;   // v(supp u) per basis vector
  bool pass = false;
  double tol = 0.0;
};

/// First-order criticality: v(supp u) = 0 for every v in the normal space.
CriticalityReport criticality_check(const ExponentialFamily& fam, const KernelDirection& u,
                                    double tol = 1e-7);

/// Lemma conditions for partition-model maximizers: mass only on largest
/// blocks, point measure within each charged block.
bool partition_maximizer_predicate(const Partition& part, const Vec& P, double tol = 1e-9);

/// Given Q in the partition model supported on the union of largest blocks,
/// a distribution P with projection Q and divergence log(coarseness).
Vec partition_maximizer_from_target(const Partition& part, const Vec& Q, double tol = 1e-12);

/// log(1 + exp(x)) without overflow.
double log1p_exp(double x);

}  // namespace expfam
