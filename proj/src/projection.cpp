#include "expfam/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "expfam/simplex_lp.hpp"

namespace expfam {

double divergence(const Vec& P, const Vec& Q) {
  if (P.size() != Q.size()) throw Error(ErrorCode::DimensionMismatch, "divergence: length mismatch");
  double d = 0.0;
  for (int x = 0; x < P.size(); ++x) {
    if (P[x] == 0.0) continue;
    if (Q[x] == 0.0) return std::numeric_limits<double>::infinity();
    d += P[x] * std::log(P[x] / Q[x]);
  }
  return d;
}

double entropy(const Vec& P) {
  double h = 0.0;
  for (int x = 0; x < P.size(); ++x) {
    if (P[x] > 0.0) h -= P[x] * std::log(P[x]);
  }
  return h;
}

TruncationResult truncate(const Vec& P, const std::vector<int>& Y) {
  if (Y.empty()) throw Error(ErrorCode::EmptySet, "truncation to empty set");
  double mass = 0.0;
  for (int x : Y) mass += P[x];
  TruncationResult r;
  r.on_subset.resize(long(Y.size()));
  if (mass > 0.0) {
    r.arbitrary = false;
    for (size_t k = 0; k < Y.size(); ++k) r.on_subset[long(k)] = P[Y[k]] / mass;
  } else {
    r.arbitrary = true;
    r.on_subset.setConstant(1.0 / double(Y.size()));
  }
  return r;
}

namespace {

struct NewtonOutcome {
  Vec theta;
  Vec p;  // density at theta, on the active states
  double residual = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
  bool diverging = false;  // theta ran away while the residual stalled
};

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

double log_partition(const Vec& log_nu, const Mat& A_act, const Vec& theta, Vec* p_out) {
  Vec score = log_nu + A_act.transpose() * theta;
  double shift = score.maxCoeff();
  Vec w = (score.array() - shift).exp();
  double total = w.sum();
  if (p_out) *p_out = w / total;
  return shift + std::log(total);
}

// Maximize theta . m - log Z(theta) over theta, Newton with backtracking.
NewtonOutcome newton_moment_match(const ExponentialFamily& fam, const std::vector<int>& active,
                                  const Vec& m, const ProjectionOptions& opts,
                                  bool early_divergence_exit) {
  const int h = fam.stats.rows();
  Mat A_act(h, active.size());
  Vec log_nu(active.size());
  for (size_t k = 0; k < active.size(); ++k) {
    A_act.col(long(k)) = fam.stats_float.col(active[k]);
    log_nu[long(k)] = std::log(fam.nu[active[k]]);
  }
  NewtonOutcome out;
  out.theta = Vec::Zero(h);
  double objective = -log_partition(log_nu, A_act, out.theta, &out.p);
  double stall_best = std::numeric_limits<double>::infinity();
  int stall_count = 0;
  for (int it = 0; it < opts.max_iter; ++it) {
    Vec mean = A_act * out.p;
    Vec grad = m - mean;
    out.residual = inf_norm(grad);
    out.iterations = it;
    if (out.residual <= opts.tol) {
      out.converged = true;
      return out;
    }
    if (out.residual < stall_best * 0.9) {
      stall_best = out.residual;
      stall_count = 0;
    } else {
      ++stall_count;
    }
    if (early_divergence_exit && inf_norm(out.theta) > opts.theta_threshold &&
        stall_count >= 10) {
      out.diverging = true;
      return out;
    }
    Mat fisher = A_act * out.p.asDiagonal() * A_act.transpose() - mean * mean.transpose();
    fisher.diagonal().array() += opts.jitter;
    Vec dir = fisher.ldlt().solve(grad);
    double slope = grad.dot(dir);
    if (!(slope > 0) || !dir.allFinite()) {
      dir = grad;  // fallback to steepest ascent
      slope = grad.squaredNorm();
    }
    double step = 1.0;
    for (int ls = 0; ls < 60; ++ls) {
      Vec cand = out.theta + step * dir;
      Vec p_cand;
      double obj_cand = cand.dot(m) - log_partition(log_nu, A_act, cand, &p_cand);
      if (obj_cand >= objective + opts.armijo * step * slope) {
        out.theta = cand;
        out.p = p_cand;
        objective = obj_cand;
        break;
      }
      step *= 0.5;
      if (ls == 59) {
        // no acceptable step: treat as stalled
        out.iterations = it + 1;
        out.diverging = out.theta.lpNorm<Eigen::Infinity>() > opts.theta_threshold;
        return out;
      }
    }
  }
  out.iterations = opts.max_iter;
  return out;
}

ProjectionResult finish(const ExponentialFamily& fam, const Vec& P, const std::vector<int>& active,
                        const NewtonOutcome& newton, int total_iterations,
                        const ProjectionOptions& opts) {
  ProjectionResult res;
  res.options = opts;
  res.point = Vec::Zero(fam.size());
  for (size_t k = 0; k < active.size(); ++k) res.point[active[k]] = newton.p[long(k)];
  res.face_support = active;
  res.iterations = total_iterations;
  res.divergence = divergence(P, res.point);
  res.residual = inf_norm(fam.stats_float * P - fam.stats_float * res.point);
  return res;
}

}  // namespace

std::vector<int> minimal_face_states(const ExponentialFamily& fam, const Vec& P) {
  const int n = fam.size();
  // exact moment of the clamped, renormalized input
  RatVec p_rat(n, Rat(0));
  Rat total(0);
  for (int x = 0; x < n; ++x) {
    if (P[x] > 0.0) {
      p_rat[x] = rat_from_double(P[x]);
      total += p_rat[x];
    }
  }
  if (sgn(total) == 0) throw Error(ErrorCode::SchemaError, "distribution with empty support");
  for (Rat& q : p_rat) q /= total;

  RatMatrix rows = fam.extended_stats.row_space_basis();
  RatVec m = rows.multiply(p_rat);
  const int r = rows.rows();

  std::vector<bool> in_face(n, false);
  for (int x = 0; x < n; ++x) in_face[x] = sgn(p_rat[x]) > 0;

  std::vector<std::vector<Rat>> A(r, std::vector<Rat>(n));
  for (int i = 0; i < r; ++i)
    for (int x = 0; x < n; ++x) A[i][x] = rows.at(i, x);
  std::vector<Rat> b(m.begin(), m.end());

  // grow the face: maximize total mass outside it until nothing can be added
  while (true) {
    std::vector<Rat> c(n, Rat(0));
    bool all_inside = true;
    for (int x = 0; x < n; ++x) {
      if (!in_face[x]) {
        c[x] = Rat(-1);
        all_inside = false;
      }
    }
    if (all_inside) break;
    LpResult<Rat> lp = lp_minimize<Rat>(A, b, c, Rat(0));
    if (lp.status != LpStatus::Optimal) {
      throw Error(ErrorCode::NoConvergence, "face detection LP failed");
    }
    if (sgn(lp.objective) == 0) break;
    for (int x = 0; x < n; ++x) {
      if (sgn(lp.x[x]) > 0) in_face[x] = true;
    }
  }
  std::vector<int> face;
  for (int x = 0; x < n; ++x)
    if (in_face[x]) face.push_back(x);
  return face;
}

std::vector<int> minimal_face_states_float(const ExponentialFamily& fam, const Vec& P) {
  const int n = fam.size();
  const double eps = 1e-9;
  Mat A_full = fam.stats_float;
  const int h = int(A_full.rows());
  Vec m = A_full * P;

  std::vector<std::vector<double>> A(h + 1, std::vector<double>(n));
  for (int i = 0; i < h; ++i)
    for (int x = 0; x < n; ++x) A[i][x] = A_full(i, x);
  for (int x = 0; x < n; ++x) A[h][x] = 1.0;
  std::vector<double> b(h + 1);
  for (int i = 0; i < h; ++i) b[i] = m[i];
  b[h] = 1.0;

  std::vector<bool> in_face(n, false);
  for (int x = 0; x < n; ++x) in_face[x] = P[x] > eps;
  while (true) {
    std::vector<double> c(n, 0.0);
    bool all_inside = true;
    for (int x = 0; x < n; ++x) {
      if (!in_face[x]) {
        c[x] = -1.0;
        all_inside = false;
      }
    }
    if (all_inside) break;
    LpResult<double> lp = lp_minimize<double>(A, b, c, eps);
    if (lp.status != LpStatus::Optimal || lp.objective > -1e-7) break;
    for (int x = 0; x < n; ++x) {
      if (lp.x[x] > 1e-7) in_face[x] = true;
    }
  }
  std::vector<int> face;
  for (int x = 0; x < n; ++x)
    if (in_face[x]) face.push_back(x);
  return face;
}

ProjectionResult ri_project(const ExponentialFamily& fam, const Vec& P,
                            const ProjectionOptions& opts) {
  validate_probability_vector(P, 1e-9);
  Vec m = fam.stats_float * P;
  std::vector<int> active(fam.size());
  std::iota(active.begin(), active.end(), 0);

  NewtonOutcome first = newton_moment_match(fam, active, m, opts, true);
  // A converged interior solution with no near-zero entries needs no face
  // analysis. Near-zero dirt means the true projection may live on a proper
  // face (moment reachable only in the limit), so consult the exact face.
  if (first.converged && (!opts.exact_boundary || first.p.minCoeff() >= 1e-9)) {
    return finish(fam, P, active, first, first.iterations, opts);
  }

  std::vector<int> face = minimal_face_states(fam, P);
  if (face.size() == size_t(fam.size())) {
    if (first.converged) return finish(fam, P, active, first, first.iterations, opts);
    // interior moment after all; give Newton the full budget once more
    NewtonOutcome retry = newton_moment_match(fam, active, m, opts, false);
    if (retry.converged)
      return finish(fam, P, active, retry, first.iterations + retry.iterations, opts);
    throw Error(ErrorCode::NoConvergence,
                "interior projection stalled: residual " + std::to_string(retry.residual) +
                    " after " + std::to_string(first.iterations + retry.iterations) +
                    " iterations");
  }
  NewtonOutcome reduced = newton_moment_match(fam, face, m, opts, false);
  if (reduced.converged)
    return finish(fam, P, face, reduced, first.iterations + reduced.iterations, opts);
  if (first.converged) return finish(fam, P, active, first, first.iterations, opts);
  throw Error(ErrorCode::NoConvergence,
              "projection on face stalled: residual " + std::to_string(reduced.residual) +
                  ", face size " + std::to_string(face.size()));
}

ProjectionResult project_on_face(const ExponentialFamily& fam, const Vec& P,
                                 const std::vector<int>& face, const ProjectionOptions& opts) {
  Vec m = fam.stats_float * P;
  NewtonOutcome out = newton_moment_match(fam, face, m, opts, false);
  if (!out.converged) {
    throw Error(ErrorCode::NoConvergence,
                "projection on given face stalled: residual " + std::to_string(out.residual));
  }
  return finish(fam, P, face, out, out.iterations, opts);
}

Vec partition_project(const Partition& part, const Vec& P) {
  const int n = int(P.size());
  if (part.n_states() != n) throw Error(ErrorCode::InvalidPartition, "partition does not cover P");
  Vec out(n);
  for (const auto& block : part.blocks) {
    double mass = 0.0;
    for (int x : block) mass += P[x];
    double share = mass / double(block.size());
    for (int x : block) out[x] = share;
  }
  return out;
}

double partition_divergence(const Partition& part, const Vec& P) {
  if (part.n_states() != int(P.size()))
    throw Error(ErrorCode::InvalidPartition, "partition does not cover P");
  double total = 0.0;
  for (const auto& block : part.blocks) {
    double mass = 0.0;
    for (int x : block) mass += P[x];
    if (mass <= 0.0) continue;
    double h = 0.0;
    for (int x : block) {
      if (P[x] > 0.0) h -= (P[x] / mass) * std::log(P[x] / mass);
    }
    total += mass * (std::log(double(block.size())) - h);
  }
  return total;
}

}  // namespace expfam
