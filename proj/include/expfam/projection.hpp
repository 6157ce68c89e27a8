#pragma once

#include "expfam/family.hpp"
#include "expfam/partition.hpp"

namespace expfam {

struct ProjectionOptions {
  double tol = 1e-10;            // max-norm moment residual target
  int max_iter = 250;            // Newton budget per stage
  double theta_threshold = 1e3;  // facial-reduction trigger on ||theta||_inf
  double armijo = 1e-4;
  double jitter = 1e-12;
  // When false, a converged Newton answer is accepted even if some entries
  // are merely numerically zero, skipping the exact face LP. Fast path for
  // bulk scans; the default keeps boundary supports exact.
  bool exact_boundary = true;
};

struct ProjectionResult {
  Vec point;                      // P_E, embedded on the full state space
  double divergence = 0.0;        // D(P || P_E)
  std::vector<int> face_support;  // states where P_E > 0
  int iterations = 0;
  double residual = 0.0;  // max component of |A P - A P_E|
  ProjectionOptions options;
};

/// Information divergence sum P log(P/Q) with 0 log 0 = 0; +infinity iff
/// supp(P) is not contained in supp(Q). Q may be any nonnegative measure.
double divergence(const Vec& P, const Vec& Q);

/// Shannon entropy with 0 log 0 = 0.
double entropy(const Vec& P);

struct TruncationResult {
  Vec on_subset;        // distribution on Y, in the order given
  bool arbitrary;       // true when P(Y) = 0 and the uniform convention fired
};

TruncationResult truncate(const Vec& P, const std::vector<int>& Y);

/// Generalized rI-projection: the unique P_E in the closure with
/// A P_E = A P. Safeguarded Newton on the dual; on divergence the minimal
/// face of the convex support containing A P is computed by exact LP and the
/// problem is re-solved on that face.
ProjectionResult ri_project(const ExponentialFamily& fam, const Vec& P,
                            const ProjectionOptions& opts = {});

/// States of the minimal face of the convex support containing A P,
/// by exact rational LP.
std::vector<int> minimal_face_states(const ExponentialFamily& fam, const Vec& P);

/// Float-LP variant (tolerance 1e-9); used where many faces are probed and
/// the caller's own tolerance is loose.
std::vector<int> minimal_face_states_float(const ExponentialFamily& fam, const Vec& P);

/// Projection restricted to a known face (no LP); used by the brute-force
/// oracle which precomputes faces per support.
ProjectionResult project_on_face(const ExponentialFamily& fam, const Vec& P,
                                 const std::vector<int>& face, const ProjectionOptions& opts = {});

/// Closed form for partition models: average P over each block.
Vec partition_project(const Partition& part, const Vec& P);

/// sum_i P(X^i) (log|X^i| - H(P^{X^i})); equals divergence(P, partition_project(P)).
double partition_divergence(const Partition& part, const Vec& P);

}  // namespace expfam
