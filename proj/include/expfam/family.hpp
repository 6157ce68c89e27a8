#pragma once

#include <Eigen/Dense>

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "expfam/partition.hpp"
#include "expfam/rational_matrix.hpp"

namespace expfam {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

struct StateSpace {
  std::vector<std::string> labels;

  explicit StateSpace(std::vector<std::string> labels_);
  static StateSpace indexed(int n);

  int size() const { return int(labels.size()); }
};

/// h x N matrix of exact rationals; column x holds the statistics A_x of
/// state x. Duplicate columns are allowed (they define partition fibers).
struct SufficientStatistics {
  RatMatrix entries;

  SufficientStatistics() = default;
  explicit SufficientStatistics(RatMatrix m) : entries(std::move(m)) {}
  static SufficientStatistics from_doubles(const Mat& m);
  static SufficientStatistics from_int_rows(const std::vector<std::vector<long>>& rows);

  int rows() const { return entries.rows(); }
  int states() const { return entries.cols(); }
  RatVec column(int x) const { return entries.col(x); }
};

struct NaturalParameters {
  Vec theta;
};

/// An exponential family on a finite state space: reference measure nu,
/// sufficient statistics A, and the derived exact normal space
/// N = {u : A u = 0, sum(u) = 0}.
struct ExponentialFamily {
  StateSpace space;
  Vec nu;
  SufficientStatistics stats;

  // derived, fixed at construction
  RatMatrix extended_stats;          // stats with an all-ones row appended
  int dim = 0;                       // rank(extended_stats) - 1
  std::vector<RatVec> normal_basis;  // exact kernel basis of extended_stats
  Mat stats_float;                   // h x N
  Mat normal_basis_float;            // N x d, orthonormal columns

  int size() const { return space.size(); }
  int normal_dim() const { return int(normal_basis.size()); }

  /// Exact check u in N; tol applies to the float residual for double input.
  bool contains_in_normal_space(const Vec& u, double tol = 1e-10) const;

  /// Orthogonal projection of u onto the normal space (float).
  Vec project_to_normal_space(const Vec& u) const;
};

ExponentialFamily build_family(StateSpace space, Vec nu, SufficientStatistics stats);

/// Family with the same states/statistics but nu and columns restricted to a
/// subset of states (used for faces and mixture components).
ExponentialFamily restrict_family(const ExponentialFamily& fam, const std::vector<int>& states);

/// P_theta(x) = nu(x) exp(theta . A_x) / Z_theta, log-sum-exp stabilized.
Vec density(const ExponentialFamily& fam, const Vec& theta);

/// A . P
Vec moment_map(const ExponentialFamily& fam, const Vec& P);

struct VertexReport {
  std::set<int> states;  // states whose column is a vertex of the convex support
  std::string method;    // "exact-lp" or "float-lp"
};

/// States x such that A_x is not a convex combination of the other distinct
/// columns. Exact rational LP when denominators are small, float LP with
/// tolerance 1e-9 otherwise.
VertexReport convex_support_vertices(const ExponentialFamily& fam);

/// The partition whose blocks are the fibers of x -> A_x, when nu is uniform
/// and the distinct columns are affinely independent; absent otherwise.
std::optional<Partition> is_partition_family(const ExponentialFamily& fam);

/// Families are equal as sets iff reference measures match up to scale and
/// the extended statistics have equal row span.
bool same_tangent_span(const ExponentialFamily& a, const ExponentialFamily& b);

void validate_probability_vector(const Vec& p, double tol = 1e-12);

inline Vec uniform_distribution(int n) { return Vec::Constant(n, 1.0 / n); }
Vec point_mass(int n, int x);

}  // namespace expfam
