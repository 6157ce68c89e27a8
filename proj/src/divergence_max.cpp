#include "expfam/divergence_max.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

namespace expfam {

double log1p_exp(double x) {
  if (x > 36.0) return x + std::exp(-x);
  return std::log1p(std::exp(x));
}

Vec KernelDirection::u_plus() const { return u.cwiseMax(0.0); }
Vec KernelDirection::u_minus() const { return (-u).cwiseMax(0.0); }

namespace {

double inf_norm(const Vec& v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

double positive_mass(const Vec& u) {
  double s = 0.0;
  for (int x = 0; x < u.size(); ++x)
    if (u[x] > 0.0) s += u[x];
  return s;
}

double dbar_raw(const ExponentialFamily& fam, const Vec& u) {
  double v = 0.0;
  for (int x = 0; x < u.size(); ++x) {
    if (u[x] != 0.0) v += u[x] * std::log(std::abs(u[x]) / fam.nu[x]);
  }
  return v;
}

}  // namespace

KernelDirection make_kernelDirection_unchecked(const ExponentialFamily& fam, const Vec& coeffs) {
  KernelDirection k;
  k.coeffs = coeffs;
  k.u = fam.normal_basis_float * coeffs;
  double m = inf_norm(k.u);
  if (m == 0.0) throw Error(ErrorCode::ZeroVector, "zero kernel direction");
  for (int x = 0; x < k.u.size(); ++x) {
    if (std::abs(k.u[x]) <= 1e-14 * m) k.u[x] = 0.0;
  }
  double s = positive_mass(k.u);
  if (s <= 0.0) throw Error(ErrorCode::ZeroVector, "kernel direction has no positive part");
  k.u /= s;
  k.coeffs /= s;
  return k;
}

KernelDirection make_kernel_direction(const ExponentialFamily& fam, const Vec& u_raw, double tol) {
  if (fam.normal_dim() == 0) {
    throw Error(ErrorCode::ZeroNormalSpace, "family has trivial normal space");
  }
  if (int(u_raw.size()) != fam.size()) {
    throw Error(ErrorCode::DimensionMismatch, "kernel direction has wrong length");
  }
  Vec projected = fam.project_to_normal_space(u_raw);
  double scale = std::max(1.0, inf_norm(u_raw));
  if (inf_norm(u_raw - projected) > tol * scale) {
    throw Error(ErrorCode::NotInNormalSpace, "vector is not in the normal space");
  }
  return make_kernelDirection_unchecked(fam, fam.normal_basis_float.transpose() * u_raw);
}

double dbar(const ExponentialFamily& fam, const Vec& u, double tol) {
  if (int(u.size()) != fam.size()) {
    throw Error(ErrorCode::DimensionMismatch, "dbar: wrong length");
  }
  Vec projected = fam.project_to_normal_space(u);
  double scale = std::max(1.0, inf_norm(u));
  if (inf_norm(u - projected) > tol * scale) {
    throw Error(ErrorCode::NotInNormalSpace, "dbar: vector is not in the normal space");
  }
  return dbar_raw(fam, u);
}

KernelDirection psi_family(const ExponentialFamily& fam, const Vec& P, double tol) {
  ProjectionResult proj = ri_project(fam, P);
  if (proj.divergence <= tol) {
    throw Error(ErrorCode::PointInClosure, "point is in the closure of the family");
  }
  return make_kernel_direction(fam, P - proj.point, 1e-7);
}

namespace {

// --- ascent machinery -------------------------------------------------------

// Basis (orthonormal columns) of {v in N : v|_Z = 0}.
Mat stratum_basis(const ExponentialFamily& fam, const std::vector<int>& zero_set) {
  const Mat& B = fam.normal_basis_float;
  if (zero_set.empty()) return B;
  Mat B_z(zero_set.size(), B.cols());
  for (size_t i = 0; i < zero_set.size(); ++i) B_z.row(long(i)) = B.row(zero_set[i]);
  Eigen::JacobiSVD<Mat> svd(B_z, Eigen::ComputeFullV);
  double smax = svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > 1e-10 * std::max(1.0, smax)) ++rank;
  }
  int d_prime = int(B.cols()) - rank;
  if (d_prime <= 0) return Mat(B.rows(), 0);
  Mat K = svd.matrixV().rightCols(d_prime);
  Mat W_raw = B * K;
  Eigen::HouseholderQR<Mat> qr(W_raw);
  return qr.householderQ() * Mat::Identity(B.rows(), d_prime);
}

Vec expand_and_zero(const Mat& W, const Vec& c, const std::vector<int>& zero_set) {
  Vec u = W * c;
  for (int x : zero_set) u[x] = 0.0;
  return u;
}

struct PolishOutcome {
  bool ok = false;
  Vec u;
  int iterations = 0;
};

// Newton on the stationarity system of Dbar restricted to a stratum with a
// fixed sign pattern, constrained by u+(X) = 1.
PolishOutcome newton_polish(const ExponentialFamily& fam, const Mat& W,
                            const std::vector<int>& zero_set, const Vec& u0, int max_iter) {
  PolishOutcome out;
  const int n = fam.size();
  const int d = int(W.cols());
  if (d == 0) return out;

  std::vector<int> sign(n, 0);
  Vec a_u = Vec::Zero(n);
  for (int x = 0; x < n; ++x) {
    if (u0[x] > 0.0) {
      sign[x] = 1;
      a_u[x] = 1.0;
    } else if (u0[x] < 0.0) {
      sign[x] = -1;
    }
  }
  Vec a_c = W.transpose() * a_u;
  if (inf_norm(a_c) < 1e-12) return out;

  auto grad_u = [&](const Vec& u) {
    Vec g = Vec::Zero(n);
    for (int x = 0; x < n; ++x) {
      if (sign[x] != 0) g[x] = std::log(std::abs(u[x]) / fam.nu[x]) + 1.0;
    }
    return g;
  };
  auto pattern_ok = [&](const Vec& u) {
    for (int x = 0; x < n; ++x) {
      if (sign[x] != 0 && !(u[x] * sign[x] > 0.0)) return false;
    }
    return true;
  };
  auto residual = [&](const Vec& c, double lambda, const Vec& u) {
    Vec F(d + 1);
    F.head(d) = W.transpose() * grad_u(u) - lambda * a_c;
    F[d] = a_c.dot(c) - 1.0;
    return F;
  };

  Vec c = W.transpose() * u0;
  Vec u = expand_and_zero(W, c, zero_set);
  if (!pattern_ok(u)) return out;
  Vec g_c = W.transpose() * grad_u(u);
  double lambda = g_c.dot(a_c) / a_c.squaredNorm();
  Vec F = residual(c, lambda, u);

  for (int it = 0; it < max_iter; ++it) {
    out.iterations = it;
    if (inf_norm(F) <= 1e-11) {
      double s = positive_mass(u);
      if (s <= 0.0) return out;
      out.u = u / s;
      out.ok = true;
      return out;
    }
    Mat J = Mat::Zero(d + 1, d + 1);
    Vec dvec = Vec::Zero(n);
    for (int x = 0; x < n; ++x) {
      if (sign[x] != 0) dvec[x] = 1.0 / u[x];
    }
    J.topLeftCorner(d, d) = W.transpose() * dvec.asDiagonal() * W;
    J.topRightCorner(d, 1) = -a_c;
    J.bottomLeftCorner(1, d) = a_c.transpose();
    Vec step = Eigen::FullPivLU<Mat>(J).solve(-F);
    if (!step.allFinite()) return out;
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls) {
      Vec c_new = c + t * step.head(d);
      double lambda_new = lambda + t * step[d];
      Vec u_new = expand_and_zero(W, c_new, zero_set);
      if (pattern_ok(u_new)) {
        Vec F_new = residual(c_new, lambda_new, u_new);
        if (F_new.template lpNorm<Eigen::Infinity>() < inf_norm(F)) {
          c = c_new;
          lambda = lambda_new;
          u = u_new;
          F = F_new;
          accepted = true;
          break;
        }
      }
      t *= 0.5;
    }
    if (!accepted) return out;
  }
  return out;
}

// max eigenvalue of the Hessian of Dbar restricted to the tangent of the
// normalization constraint within the stratum spanned by W
bool second_order_ok(const ExponentialFamily& fam, const Mat& W, const Vec& u) {
  const int n = fam.size();
  const int d = int(W.cols());
  if (d <= 1) return true;  // no tangent directions
  Vec a_u = Vec::Zero(n);
  Vec dvec = Vec::Zero(n);
  for (int x = 0; x < n; ++x) {
    if (u[x] > 0.0) a_u[x] = 1.0;
    if (u[x] != 0.0) dvec[x] = 1.0 / u[x];
  }
  Vec a_c = W.transpose() * a_u;
  if (inf_norm(a_c) < 1e-12) return true;
  Eigen::HouseholderQR<Mat> qr(Mat(a_c));
  Mat Q = qr.householderQ() * Mat::Identity(d, d);
  Mat tangent = Q.rightCols(d - 1);
  Mat H = W.transpose() * dvec.asDiagonal() * W;
  Mat T = tangent.transpose() * H * tangent;
  Eigen::SelfAdjointEigenSolver<Mat> es(T);
  double scale = std::max(1.0, T.cwiseAbs().maxCoeff());
  return es.eigenvalues().maxCoeff() <= 1e-6 * scale;
}

struct Validator {
  const ExponentialFamily& fam;
  const MaximizerOptions& opts;
  std::vector<LocalMaximizer>& accepted;
  std::map<std::vector<long long>, bool> seen;  // quantized u+ -> validated?
  long long projection_calls = 0;

  std::vector<long long> key(const Vec& plus) const {
    std::vector<long long> k(plus.size());
    for (int x = 0; x < plus.size(); ++x) k[x] = llround(plus[x] * 1e7);
    return k;
  }

  bool near_duplicate(const Vec& plus) const {
    for (const LocalMaximizer& m : accepted) {
      if (0.5 * (m.point - plus).lpNorm<1>() <= opts.merge_tv) return true;
    }
    return false;
  }

  void consider(const Vec& u_candidate, const std::vector<int>& zero_set) {
    KernelDirection kd;
    try {
      kd = make_kernelDirection_unchecked(fam, fam.normal_basis_float.transpose() * u_candidate);
    } catch (const Error&) {
      return;
    }
    Vec plus = kd.u_plus();
    if (near_duplicate(plus)) return;
    auto k = key(plus);
    if (seen.count(k)) return;
    seen[k] = false;

    Mat W = stratum_basis(fam, zero_set);
    if (W.cols() == 0) return;
    if (!second_order_ok(fam, W, kd.u)) return;

    ProjectionOptions popts;
    popts.exact_boundary = opts.exact_boundary;
    ProjectionResult proj;
    try {
      proj = ri_project(fam, plus, popts);
      ++projection_calls;
    } catch (const Error&) {
      return;
    }
    if (proj.divergence <= 1e-8) return;  // u+ is in the closure
    Vec diff = plus - proj.point;
    double s = positive_mass(diff);
    if (s <= 0.0) return;
    KernelDirection rt;
    try {
      rt = make_kernel_direction(fam, diff, 1e-6);
    } catch (const Error&) {
      return;
    }
    double dbar_v = dbar_raw(fam, rt.u);
    double gap = std::abs(proj.divergence - log1p_exp(dbar_v));
    double roundtrip = inf_norm(kd.u - rt.u);
    if (gap > opts.duality_tol || roundtrip > 1e-6) return;

    LocalMaximizer m;
    m.point = plus;
    m.u = rt;
    m.d_value = proj.divergence;
    m.dbar_value = dbar_v;
    m.duality_gap = gap;
    m.roundtrip = roundtrip;
    accepted.push_back(std::move(m));
    seen[k] = true;
  }
};

}  // namespace

MaximizerReport local_maximizers(const ExponentialFamily& fam, const MaximizerOptions& opts) {
  const int n = fam.size();
  const int d = fam.normal_dim();
  if (d == 0) {
    throw Error(ErrorCode::ZeroNormalSpace, "normal space is zero: closure is the whole simplex");
  }
  const Mat& B = fam.normal_basis_float;

  MaximizerReport report;
  report.starts = opts.n_starts;
  report.seed = opts.seed;

  Validator validator{fam, opts, report.local_maxima};

  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  for (int start = 0; start < opts.n_starts; ++start) {
    Vec c(d);
    for (int i = 0; i < d; ++i) c[i] = gauss(rng);
    if (inf_norm(c) == 0.0) continue;
    Vec u = B * c;
    double s = positive_mass(u);
    if (s <= 0.0) {
      u = -u;
      s = positive_mass(u);
      if (s <= 0.0) continue;
    }
    u /= s;
    c = B.transpose() * u;
    double f = dbar_raw(fam, u);

    // projected subgradient ascent on the boundary set
    double step0 = 0.5;
    for (int it = 0; it < opts.max_ascent_iter; ++it) {
      ++report.total_iterations;
      Vec g_u = Vec::Zero(n);
      Vec a_u = Vec::Zero(n);
      for (int x = 0; x < n; ++x) {
        if (u[x] != 0.0) g_u[x] = std::log(std::abs(u[x]) / fam.nu[x]) + 1.0;
        if (u[x] > 0.0) a_u[x] = 1.0;
      }
      Vec g_c = B.transpose() * g_u;
      Vec a_c = B.transpose() * a_u;
      Vec dir = g_c;
      double a_norm2 = a_c.squaredNorm();
      if (a_norm2 > 1e-14) dir -= (g_c.dot(a_c) / a_norm2) * a_c;
      double slope = dir.squaredNorm();
      if (std::sqrt(slope) <= 1e-10 * (1.0 + std::abs(f))) break;

      double alpha = step0;
      bool accepted = false;
      for (int ls = 0; ls < 45; ++ls) {
        Vec u_try = B * (c + alpha * dir);
        double s_try = positive_mass(u_try);
        if (s_try > 0.0) {
          u_try /= s_try;
          double f_try = dbar_raw(fam, u_try);
          if (f_try >= f + 1e-4 * alpha * slope) {
            u = u_try;
            c = B.transpose() * u;
            f = f_try;
            step0 = std::min(1.0, alpha * 2.0);
            accepted = true;
            break;
          }
        }
        alpha *= 0.5;
      }
      if (!accepted) break;
    }

    // stratum sweep: snap the k smallest coordinates to zero and polish
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return std::abs(u[a]) < std::abs(u[b]); });
    double u_max = inf_norm(u);
    for (int k = 0; k <= n - 2; ++k) {
      if (k > 0 && std::abs(u[order[k - 1]]) >= 0.5 * u_max) break;
      std::vector<int> zero_set(order.begin(), order.begin() + k);
      std::sort(zero_set.begin(), zero_set.end());
      Mat W = stratum_basis(fam, zero_set);
      if (W.cols() == 0) continue;
      Vec u_proj = expand_and_zero(W, W.transpose() * u, zero_set);
      double s_proj = positive_mass(u_proj);
      if (s_proj <= 0.0) continue;
      u_proj /= s_proj;
      PolishOutcome polish = newton_polish(fam, W, zero_set, u_proj, 40);
      report.total_iterations += polish.iterations;
      if (!polish.ok) continue;
      std::vector<int> exact_zeros;
      for (int x = 0; x < n; ++x) {
        if (polish.u[x] == 0.0) exact_zeros.push_back(x);
      }
      validator.consider(polish.u, exact_zeros);
    }
  }

  std::sort(report.local_maxima.begin(), report.local_maxima.end(),
            [](const LocalMaximizer& a, const LocalMaximizer& b) {
              if (a.d_value != b.d_value) return a.d_value > b.d_value;
              return std::lexicographical_compare(a.point.data(), a.point.data() + a.point.size(),
                                                  b.point.data(), b.point.data() + b.point.size());
            });
  report.global_estimate = report.local_maxima.empty() ? 0.0 : report.local_maxima[0].d_value;
  return report;
}

double max_divergence_oracle(const ExponentialFamily& fam, const OracleOptions& opts) {
  const int n = fam.size();
  if (fam.normal_dim() == 0) return 0.0;
  const int max_support = std::min(n, fam.dim + 1);
  const int g = std::max(2, int(std::lround(1.0 / opts.grid_step)));

  ProjectionOptions popts;
  popts.tol = 1e-9;
  popts.max_iter = 160;
  popts.exact_boundary = false;

  long long evals = 0;
  auto evaluate = [&](const Vec& P, const std::vector<int>& face) -> double {
    if (++evals > opts.budget) {
      throw Error(ErrorCode::BudgetExceeded, "oracle grid budget exhausted");
    }
    try {
      return project_on_face(fam, P, face, popts).divergence;
    } catch (const Error&) {
      try {
        return ri_project(fam, P, popts).divergence;
      } catch (const Error&) {
        return -1.0;
      }
    }
  };

  struct Candidate {
    double value;
    Vec point;
    std::vector<int> support;
    std::vector<int> face;
  };
  std::vector<Candidate> top;

  auto record = [&](double v, const Vec& P, const std::vector<int>& S,
                    const std::vector<int>& face) {
    top.push_back({v, P, S, face});
    std::sort(top.begin(), top.end(),
              [](const Candidate& a, const Candidate& b) { return a.value > b.value; });
    if (top.size() > 5) top.resize(5);
  };

  std::vector<int> idx;
  std::vector<int> comp;
  for (int s = 1; s <= max_support && s <= g; ++s) {
    idx.assign(s, 0);
    std::iota(idx.begin(), idx.end(), 0);
    comp.assign(s, 0);
    bool more = s <= n;
    while (more) {
      if (fam.extended_stats.rank_of_columns(idx) == s) {
        Vec bary = Vec::Zero(n);
        for (int x : idx) bary[x] = 1.0 / s;
        std::vector<int> face = minimal_face_states_float(fam, bary);
        // all compositions of g into s positive parts
        std::function<void(int, int)> scan = [&](int pos, int remaining) {
          if (pos == s - 1) {
            comp[pos] = remaining;
            Vec P = Vec::Zero(n);
            for (int i = 0; i < s; ++i) P[idx[i]] = double(comp[i]) / g;
            double v = evaluate(P, face);
            double best = top.empty() ? -1.0 : top[0].value;
            if (v > best - 0.2) record(v, P, idx, face);
            return;
          }
          for (int k = 1; k <= remaining - (s - 1 - pos); ++k) {
            comp[pos] = k;
            scan(pos + 1, remaining - k);
          }
        };
        scan(0, g);
      }
      more = [&] {
        for (int i = s - 1; i >= 0; --i) {
          if (idx[i] < n - s + i) {
            ++idx[i];
            for (int j = i + 1; j < s; ++j) idx[j] = idx[j - 1] + 1;
            return true;
          }
        }
        return false;
      }();
    }
  }

  // local refinement of the leading cells by shrinking pattern search
  double best = top.empty() ? 0.0 : top[0].value;
  for (Candidate& cand : top) {
    Vec P = cand.point;
    double v = cand.value;
    double h = 1.0 / g;
    for (int round = 0; round < opts.refine_rounds; ++round) {
      h /= 3.0;
      bool improved = true;
      while (improved) {
        improved = false;
        for (int i : cand.support) {
          for (int j : cand.support) {
            if (i == j || P[j] < h) continue;
            Vec Q = P;
            Q[i] += h;
            Q[j] -= h;
            double vq = evaluate(Q, cand.face);
            if (vq > v + 1e-14) {
              v = vq;
              P = Q;
              improved = true;
            }
          }
        }
      }
    }
    best = std::max(best, v);
  }
  return best;
}

CriticalityReport criticality_check(const ExponentialFamily& fam, const KernelDirection& u,
                                    double tol) {
  CriticalityReport report;
  report.tol = tol;
  std::vector<int> support;
  for (int x = 0; x < u.u.size(); ++x) {
    if (u.u[x] != 0.0) support.push_back(x);
  }
  for (const RatVec& v : fam.normal_basis) {
    double scale = 0.0;
    for (const Rat& q : v) scale = std::max(scale, std::abs(rat_to_double(q)));
    double sum = 0.0;
    for (int x : support) sum += rat_to_double(v[x]);
    double normalized = scale > 0.0 ? sum / scale : 0.0;
    report.basis_sums.push_back(normalized);
    report.max_violation = std::max(report.max_violation, std::abs(normalized));
  }
  report.pass = report.max_violation <= tol;
  return report;
}

bool partition_maximizer_predicate(const Partition& part, const Vec& P, double tol) {
  const int c = part.coarseness();
  for (const auto& block : part.blocks) {
    double mass = 0.0, biggest = 0.0;
    for (int x : block) {
      mass += P[x];
      biggest = std::max(biggest, P[x]);
    }
    if (int(block.size()) < c) {
      if (mass > tol) return false;  // condition (i)
    } else if (mass > tol) {
      if (mass - biggest > tol) return false;  // condition (ii): point measure
    }
  }
  return true;
}

Vec partition_maximizer_from_target(const Partition& part, const Vec& Q, double tol) {
  const int c = part.coarseness();
  const int n = part.n_states();
  Vec P = Vec::Zero(n);
  for (const auto& block : part.blocks) {
    double mass = 0.0;
    for (int x : block) mass += Q[x];
    if (mass <= tol) continue;
    if (int(block.size()) < c) {
      throw Error(ErrorCode::UnreachableTarget,
                  "target puts mass on a block smaller than the coarseness");
    }
    for (int x : block) {
      if (std::abs(Q[x] - mass / block.size()) > 1e-9) {
        throw Error(ErrorCode::SchemaError, "target is not in the partition model");
      }
    }
    P[block[0]] = mass;
  }
  return P;
}

}  // namespace expfam
