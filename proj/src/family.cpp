#include "expfam/family.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "expfam/simplex_lp.hpp"

namespace expfam {

StateSpace::StateSpace(std::vector<std::string> labels_) : labels(std::move(labels_)) {
  if (labels.empty()) throw Error(ErrorCode::SchemaError, "state space must be nonempty");
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (!seen.insert(l).second) {
      throw Error(ErrorCode::SchemaError, "duplicate state label '" + l + "'");
    }
  }
}

StateSpace StateSpace::indexed(int n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (int i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i));
  return StateSpace(std::move(labels));
}

SufficientStatistics SufficientStatistics::from_doubles(const Mat& m) {
  RatMatrix r(int(m.rows()), int(m.cols()));
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r.at(i, j) = rat_from_double(m(i, j));
  return SufficientStatistics(std::move(r));
}

SufficientStatistics SufficientStatistics::from_int_rows(
    const std::vector<std::vector<long>>& rows) {
  if (rows.empty()) return SufficientStatistics(RatMatrix(0, 0));
  RatMatrix r(int(rows.size()), int(rows[0].size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows[0].size())
      throw Error(ErrorCode::DimensionMismatch, "ragged statistics rows");
    for (size_t j = 0; j < rows[i].size(); ++j) r.at(int(i), int(j)) = Rat(long(rows[i][j]));
  }
  return SufficientStatistics(std::move(r));
}

bool ExponentialFamily::contains_in_normal_space(const Vec& u, double tol) const {
  Vec residual = u - project_to_normal_space(u);
  double scale = std::max(1.0, u.template lpNorm<Eigen::Infinity>());
  return residual.template lpNorm<Eigen::Infinity>() <= tol * scale;
}

Vec ExponentialFamily::project_to_normal_space(const Vec& u) const {
  if (normal_basis_float.cols() == 0) return Vec::Zero(size());
  return normal_basis_float * (normal_basis_float.transpose() * u);
}

ExponentialFamily build_family(StateSpace space, Vec nu, SufficientStatistics stats) {
  const int n = space.size();
  if (int(nu.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "nu has " + std::to_string(nu.size()) +
                                                  " entries for " + std::to_string(n) + " states");
  }
  if (stats.states() != n) {
    throw Error(ErrorCode::DimensionMismatch,
                "statistics have " + std::to_string(stats.states()) + " columns for " +
                    std::to_string(n) + " states");
  }
  for (int x = 0; x < n; ++x) {
    if (!(nu[x] > 0.0) || !std::isfinite(nu[x])) {
      throw Error(ErrorCode::NonPositiveReference,
                  "nu(" + space.labels[x] + ") = " + std::to_string(nu[x]));
    }
  }

  ExponentialFamily fam{std::move(space), std::move(nu), std::move(stats)};
  fam.extended_stats = fam.stats.entries;
  fam.extended_stats.append_row(RatVec(n, Rat(1)));
  fam.normal_basis = fam.extended_stats.kernel_basis();
  fam.dim = n - int(fam.normal_basis.size()) - 1;

  fam.stats_float.resize(fam.stats.rows(), n);
  for (int i = 0; i < fam.stats.rows(); ++i)
    for (int j = 0; j < n; ++j) fam.stats_float(i, j) = rat_to_double(fam.stats.entries.at(i, j));

  const int d = fam.normal_dim();
  Mat basis(n, d);
  for (int k = 0; k < d; ++k)
    for (int x = 0; x < n; ++x) basis(x, k) = rat_to_double(fam.normal_basis[k][x]);
  if (d > 0) {
    Eigen::HouseholderQR<Mat> qr(basis);
    fam.normal_basis_float = qr.householderQ() * Mat::Identity(n, d);
  } else {
    fam.normal_basis_float = Mat(n, 0);
  }
  return fam;
}

ExponentialFamily restrict_family(const ExponentialFamily& fam, const std::vector<int>& states) {
  if (states.empty()) throw Error(ErrorCode::EmptySet, "restriction to empty state set");
  std::vector<std::string> labels;
  Vec nu(states.size());
  for (size_t k = 0; k < states.size(); ++k) {
    labels.push_back(fam.space.labels[states[k]]);
    nu[long(k)] = fam.nu[states[k]];
  }
  RatMatrix sub = fam.stats.entries.select_columns(states);
  return build_family(StateSpace(std::move(labels)), std::move(nu), SufficientStatistics(sub));
}

Vec density(const ExponentialFamily& fam, const Vec& theta) {
  if (int(theta.size()) != fam.stats.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "theta length " + std::to_string(theta.size()) +
                                                  " != " + std::to_string(fam.stats.rows()));
  }
  const int n = fam.size();
  Vec score(n);
  for (int x = 0; x < n; ++x) {
    score[x] = std::log(fam.nu[x]);
    for (int i = 0; i < fam.stats.rows(); ++i) score[x] += theta[i] * fam.stats_float(i, x);
  }
  double shift = score.maxCoeff();
  Vec p = (score.array() - shift).exp();
  return p / p.sum();
}

Vec moment_map(const ExponentialFamily& fam, const Vec& P) {
  validate_probability_vector(P);
  return fam.stats_float * P;
}

namespace {

// distinct columns of the extended statistics, each with its list of states
struct ColumnGroups {
  std::vector<RatVec> values;             // distinct extended columns
  std::vector<std::vector<int>> members;  // states carrying each value
  std::vector<int> group_of;              // state -> group
};

ColumnGroups group_columns(const RatMatrix& ext) {
  ColumnGroups g;
  std::map<RatVec, int> seen;
  g.group_of.resize(ext.cols());
  for (int x = 0; x < ext.cols(); ++x) {
    RatVec c = ext.col(x);
    auto [it, inserted] = seen.try_emplace(c, int(g.values.size()));
    if (inserted) {
      g.values.push_back(c);
      g.members.emplace_back();
    }
    g.members[it->second].push_back(x);
    g.group_of[x] = it->second;
  }
  return g;
}

bool denominators_small(const RatMatrix& m, unsigned long bound) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) {
      if (mpz_cmp_ui(m.at(i, j).get_den().get_mpz_t(), bound) > 0) return false;
    }
  return true;
}

}  // namespace

VertexReport convex_support_vertices(const ExponentialFamily& fam) {
  // Work with the row-space basis of the extended matrix: smaller LPs, same
  // affine geometry.
  RatMatrix rows = fam.extended_stats.row_space_basis();
  ColumnGroups groups = group_columns(rows);
  const int g = int(groups.values.size());

  VertexReport report;
  bool exact = denominators_small(fam.stats.entries, 1000000UL);
  report.method = exact ? "exact-lp" : "float-lp";

  for (int v = 0; v < g; ++v) {
    bool is_vertex;
    if (g == 1) {
      is_vertex = true;  // single point: not a combination of others
    } else if (exact) {
      std::vector<std::vector<Rat>> A(rows.rows(), std::vector<Rat>(g - 1));
      std::vector<Rat> b(rows.rows());
      for (int i = 0; i < rows.rows(); ++i) {
        int k = 0;
        for (int w = 0; w < g; ++w) {
          if (w == v) continue;
          A[i][k++] = groups.values[w][i];
        }
        b[i] = groups.values[v][i];
      }
      is_vertex = !lp_feasible_point<Rat>(A, b, Rat(0)).has_value();
    } else {
      std::vector<std::vector<double>> A(rows.rows(), std::vector<double>(g - 1));
      std::vector<double> b(rows.rows());
      for (int i = 0; i < rows.rows(); ++i) {
        int k = 0;
        for (int w = 0; w < g; ++w) {
          if (w == v) continue;
          A[i][k++] = rat_to_double(groups.values[w][i]);
        }
        b[i] = rat_to_double(groups.values[v][i]);
      }
      is_vertex = !lp_feasible_point<double>(A, b, 1e-9).has_value();
    }
    if (is_vertex) {
      for (int x : groups.members[v]) report.states.insert(x);
    }
  }
  return report;
}

std::optional<Partition> is_partition_family(const ExponentialFamily& fam) {
  const int n = fam.size();
  double lo = fam.nu.minCoeff(), hi = fam.nu.maxCoeff();
  if (hi - lo > 1e-12 * std::max(1.0, hi)) return std::nullopt;  // nu not uniform

  ColumnGroups groups = group_columns(fam.extended_stats);
  // distinct extended columns affinely independent <=> their matrix has full
  // column rank (the affine row is already included)
  RatMatrix cols(fam.extended_stats.rows(), int(groups.values.size()));
  for (int j = 0; j < int(groups.values.size()); ++j)
    for (int i = 0; i < fam.extended_stats.rows(); ++i) cols.at(i, j) = groups.values[j][i];
  if (cols.rank() != int(groups.values.size())) return std::nullopt;

  return Partition::from_blocks(groups.members, n);
}

bool same_tangent_span(const ExponentialFamily& a, const ExponentialFamily& b) {
  return same_row_span(a.extended_stats, b.extended_stats);
}

void validate_probability_vector(const Vec& p, double tol) {
  if (p.minCoeff() < -tol) {
    throw Error(ErrorCode::SchemaError, "probability vector has a negative entry");
  }
  if (std::abs(p.sum() - 1.0) > std::max(tol, 1e-12 * p.size())) {
    throw Error(ErrorCode::SchemaError,
                "probability vector sums to " + std::to_string(p.sum()));
  }
}

Vec point_mass(int n, int x) {
  Vec p = Vec::Zero(n);
  p[x] = 1.0;
  return p;
}

Partition Partition::from_blocks(std::vector<std::vector<int>> blocks_, int n_states) {
  std::vector<bool> seen(n_states, false);
  for (auto& b : blocks_) {
    if (b.empty()) throw Error(ErrorCode::InvalidPartition, "empty block");
    std::sort(b.begin(), b.end());
    for (int x : b) {
      if (x < 0 || x >= n_states) throw Error(ErrorCode::InvalidPartition, "state out of range");
      if (seen[x]) throw Error(ErrorCode::InvalidPartition, "state in two blocks");
      seen[x] = true;
    }
  }
  for (int x = 0; x < n_states; ++x) {
    if (!seen[x])
      throw Error(ErrorCode::InvalidPartition, "state " + std::to_string(x) + " not covered");
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  Partition p;
  p.blocks = std::move(blocks_);
  return p;
}

int Partition::n_states() const {
  int n = 0;
  for (const auto& b : blocks) n += int(b.size());
  return n;
}

int Partition::coarseness() const {
  size_t c = 0;
  for (const auto& b : blocks) c = std::max(c, b.size());
  return int(c);
}

bool Partition::homogeneous() const {
  for (const auto& b : blocks)
    if (int(b.size()) != coarseness()) return false;
  return true;
}

int Partition::block_of(int x) const {
  for (size_t i = 0; i < blocks.size(); ++i)
    for (int y : blocks[i])
      if (y == x) return int(i);
  throw Error(ErrorCode::InvalidPartition, "state not in partition");
}

}  // namespace expfam
