#include "scfo/smallsolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace scfo {

namespace {

constexpr double kFeasTol = 1e-9;  // feasibility decision tolerance

// Least squares min ||A(:,cols) z - y|| by Householder QR.
// Returns false when the selected columns are numerically rank deficient.
bool lstsq_subset(const Mat& A, const std::vector<int>& cols, const Vec& y, Vec& z) {
  const int m = A.rows;
  const int p = static_cast<int>(cols.size());
  if (p == 0) {
    z.clear();
    return true;
  }
  // Working copies.
  Mat R(m, p);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < p; ++c) R(r, c) = A(r, cols[c]);
  Vec q = y;

  double colscale = 0.0;
  for (int c = 0; c < p; ++c)
    for (int r = 0; r < m; ++r) colscale = std::max(colscale, std::abs(R(r, c)));
  if (colscale == 0.0) return false;
  const double rank_tol = 1e-13 * colscale * std::max(m, p);

  for (int k = 0; k < p; ++k) {
    // Householder vector for column k below row k.
    double alpha = 0.0;
    for (int r = k; r < m; ++r) alpha += R(r, k) * R(r, k);
    alpha = std::sqrt(alpha);
    if (alpha <= rank_tol) return false;
    if (R(k, k) > 0.0) alpha = -alpha;
    Vec v(m - k);
    v[0] = R(k, k) - alpha;
    for (int r = k + 1; r < m; ++r) v[r - k] = R(r, k);
    double vnorm_sq = 0.0;
    for (double t : v) vnorm_sq += t * t;
    R(k, k) = alpha;
    for (int r = k + 1; r < m; ++r) R(r, k) = 0.0;
    if (vnorm_sq > 0.0) {
      for (int c = k + 1; c < p; ++c) {
        double s = 0.0;
        for (int r = k; r < m; ++r) s += v[r - k] * R(r, c);
        s = 2.0 * s / vnorm_sq;
        for (int r = k; r < m; ++r) R(r, c) -= s * v[r - k];
      }
      double s = 0.0;
      for (int r = k; r < m; ++r) s += v[r - k] * q[r];
      s = 2.0 * s / vnorm_sq;
      for (int r = k; r < m; ++r) q[r] -= s * v[r - k];
    }
  }
  // Back substitution.
  z.assign(p, 0.0);
  for (int k = p - 1; k >= 0; --k) {
    double s = q[k];
    for (int c = k + 1; c < p; ++c) s -= R(k, c) * z[c];
    if (std::abs(R(k, k)) <= rank_tol) return false;
    z[k] = s / R(k, k);
  }
  return true;
}

// Symmetric positive definite solve via Cholesky; false when not SPD enough.
bool spd_solve(Mat G, Vec rhs, Vec& out) {
  const int n = G.rows;
  double scale = 0.0;
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(G(i, i)));
  const double tol = 1e-12 * std::max(scale, 1.0);
  for (int k = 0; k < n; ++k) {
    double d = G(k, k);
    for (int j = 0; j < k; ++j) d -= G(k, j) * G(k, j);
    if (d <= tol) return false;
    d = std::sqrt(d);
    G(k, k) = d;
    for (int i = k + 1; i < n; ++i) {
      double s = G(i, k);
      for (int j = 0; j < k; ++j) s -= G(i, j) * G(k, j);
      G(i, k) = s / d;
    }
  }
  for (int i = 0; i < n; ++i) {
    double s = rhs[i];
    for (int j = 0; j < i; ++j) s -= G(i, j) * rhs[j];
    rhs[i] = s / G(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int j = i + 1; j < n; ++j) s -= G(j, i) * rhs[j];
    rhs[i] = s / G(i, i);
  }
  out = rhs;
  return true;
}

}  // namespace

Vec HalfspaceSystem::augmented_row(int r) const {
  const int nn = n();
  Vec row(nn, 0.0);
  if (r < m()) {
    for (int c = 0; c < nn; ++c) row[c] = A(r, c);
  } else if (r < m() + nn) {
    row[r - m()] = 1.0;
  } else {
    row[r - m() - nn] = -1.0;
  }
  return row;
}

double HalfspaceSystem::augmented_rhs(int r) const {
  const int nn = n();
  if (r < m()) return b[r];
  if (r < m() + nn) return box_upper[r - m()];
  return -box_lower[r - m() - nn];
}

double HalfspaceSystem::max_violation(const Vec& u) const {
  double worst = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < augmented_rows(); ++r)
    worst = std::max(worst, dot(augmented_row(r), u) - augmented_rhs(r));
  return worst;
}

NnlsResult nnls_min(const Mat& A, const Vec& y) {
  if (A.rows != static_cast<int>(y.size()))
    throw std::invalid_argument("nnls: row count of A must match y");
  if (A.cols < 1) throw std::invalid_argument("nnls: need at least one column");
  const int m = A.rows;
  const int n = A.cols;

  NnlsResult res;
  res.x.assign(n, 0.0);
  std::vector<char> in_passive(n, 0);
  std::vector<int> passive;

  Vec resid = y;  // y - A x
  double wtol = 0.0;
  {
    Vec w0 = mat_tvec(A, y);
    wtol = 1e-12 * std::max(1.0, norm_inf(w0));
  }

  const int max_outer = 10 * (m + n) + 10;
  int outer = 0;
  res.converged = false;
  while (outer++ < max_outer) {
    // Dual of the active (zero) coordinates.
    Vec w = mat_tvec(A, resid);
    // Candidate entering columns: positive dual, best first, lowest index on ties.
    std::vector<int> cand;
    for (int j = 0; j < n; ++j)
      if (!in_passive[j] && w[j] > wtol) cand.push_back(j);
    std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) { return w[a] > w[b]; });

    int entering = -1;
    Vec z;
    for (int j : cand) {
      std::vector<int> trial = passive;
      trial.push_back(j);
      Vec zt;
      if (!lstsq_subset(A, trial, y, zt)) continue;  // dependent column, reject
      if (zt.back() > 0.0) {
        entering = j;
        z = std::move(zt);
        break;
      }
    }
    if (entering < 0) {
      res.converged = true;
      break;
    }
    passive.push_back(entering);
    in_passive[entering] = 1;

    // Inner loop: restore nonnegativity of the passive coordinates.
    while (true) {
      bool all_pos = true;
      for (size_t i = 0; i < passive.size(); ++i)
        if (z[i] <= 0.0) {
          all_pos = false;
          break;
        }
      if (all_pos) {
        for (size_t i = 0; i < passive.size(); ++i) res.x[passive[i]] = z[i];
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (size_t i = 0; i < passive.size(); ++i) {
        if (z[i] <= 0.0) {
          double xi = res.x[passive[i]];
          double t = xi / (xi - z[i]);
          alpha = std::min(alpha, t);
        }
      }
      for (size_t i = 0; i < passive.size(); ++i) {
        int j = passive[i];
        res.x[j] += alpha * (z[i] - res.x[j]);
      }
      // Drop coordinates pinned at zero.
      std::vector<int> kept;
      for (int j : passive) {
        if (res.x[j] <= 1e-14) {
          res.x[j] = 0.0;
          in_passive[j] = 0;
        } else {
          kept.push_back(j);
        }
      }
      passive = std::move(kept);
      if (passive.empty()) {
        z.clear();
        break;
      }
      if (!lstsq_subset(A, passive, y, z)) {
        // Numerical degeneracy: bail out with the current point.
        res.iterations = outer;
        res.residual_sq = 0.0;
        Vec ax = matvec(A, res.x);
        for (int r = 0; r < m; ++r) {
          double d = ax[r] - y[r];
          res.residual_sq += d * d;
        }
        return res;
      }
    }

    Vec ax = matvec(A, res.x);
    for (int r = 0; r < m; ++r) resid[r] = y[r] - ax[r];
  }

  res.iterations = outer;
  Vec ax = matvec(A, res.x);
  res.residual_sq = 0.0;
  for (int i = 0; i < m; ++i) {
    double d = ax[i] - y[i];
    res.residual_sq += d * d;
  }
  return res;
}

NnlsResult nnls(const Mat& B, const Vec& b) {
  Vec y(b.size());
  for (size_t i = 0; i < b.size(); ++i) y[i] = -b[i];
  return nnls_min(B, y);
}

SolveReport qp_project(const Vec& target, const HalfspaceSystem& sys) {
  const int n = sys.n();
  if (static_cast<int>(target.size()) != n)
    throw std::invalid_argument("qp_project: target length mismatch");
  if (sys.A.rows != static_cast<int>(sys.b.size()) || (sys.A.rows > 0 && sys.A.cols != n))
    throw std::invalid_argument("qp_project: system shape mismatch");
  for (int i = 0; i < n; ++i)
    if (!(sys.box_lower[i] <= sys.box_upper[i]))
      throw std::invalid_argument("qp_project: box bounds inverted");

  const int M = sys.augmented_rows();
  SolveReport rep;

  // Least-distance form in x = u - target: minimize ||x|| s.t. Gx >= h with
  // G = -A_full and h = A_full*target - b_full. Solved through the dual
  // nonnegative least squares on E = [G^T; h^T], f = e_{n+1}.
  Mat E(n + 1, M);
  for (int r = 0; r < M; ++r) {
    Vec a = sys.augmented_row(r);
    for (int i = 0; i < n; ++i) E(i, r) = -a[i];
    E(n, r) = dot(a, target) - sys.augmented_rhs(r);
  }
  Vec f(n + 1, 0.0);
  f[n] = 1.0;

  NnlsResult nn = nnls_min(E, f);
  rep.iterations = nn.iterations;
  if (!nn.converged) {
    rep.status = SolveStatus::degenerate;
    return rep;
  }

  Vec r = matvec(E, nn.x);
  for (int i = 0; i <= n; ++i) r[i] -= f[i];
  double rnorm = norm2(r);

  // A zero residual certifies emptiness. The threshold adapts to the
  // multiplier magnitude: near-degenerate systems only reach a residual of
  // machine precision relative to ||E|| * ||lambda||.
  double lambda_l1 = 0.0;
  for (double v : nn.x) lambda_l1 += v;
  double emax = 0.0;
  for (double v : E.a) emax = std::max(emax, std::abs(v));
  const double infeas_tol = std::max(kFeasTol, 1e-12 * (1.0 + emax * lambda_l1));

  auto make_certificate = [&](const Vec& lambda) {
    Vec cert = lambda;
    double mx = norm_inf(cert);
    if (mx > 0.0)
      for (double& v : cert) v /= mx;
    // The certificate must separate with a visible margin; rescale to
    // nu^T b = -1 when the max-entry normalization squeezes it out.
    double comb_b = 0.0;
    for (int rr = 0; rr < M; ++rr) comb_b += cert[rr] * sys.augmented_rhs(rr);
    if (comb_b > -1e-9) {
      double raw_b = 0.0;
      for (int rr = 0; rr < M; ++rr) raw_b += lambda[rr] * sys.augmented_rhs(rr);
      if (raw_b < 0.0) {
        cert = lambda;
        for (double& v : cert) v /= -raw_b;
      }
    }
    return cert;
  };

  if (rnorm <= infeas_tol) {
    rep.status = SolveStatus::infeasible;
    rep.certificate = make_certificate(nn.x);
    return rep;
  }

  double rn1 = r[n];
  if (!(rn1 < 0.0)) {
    rep.status = SolveStatus::degenerate;
    return rep;
  }
  Vec u(n);
  for (int i = 0; i < n; ++i) u[i] = target[i] - r[i] / rn1;

  // Polish: re-solve the projection on the detected active rows so the
  // stationarity residual is at linear-solve precision.
  std::vector<int> act;
  for (int j = 0; j < M; ++j)
    if (nn.x[j] > 1e-12) act.push_back(j);
  if (!act.empty() && static_cast<int>(act.size()) <= n) {
    const int p = static_cast<int>(act.size());
    Mat G(p, p);
    Vec rhs(p);
    for (int i = 0; i < p; ++i) {
      Vec ai = sys.augmented_row(act[i]);
      rhs[i] = dot(ai, target) - sys.augmented_rhs(act[i]);
      for (int j = 0; j < p; ++j) G(i, j) = dot(ai, sys.augmented_row(act[j]));
    }
    Vec mu;
    if (spd_solve(G, rhs, mu)) {
      Vec u_pol = target;
      bool ok = true;
      for (int i = 0; i < p; ++i) {
        if (mu[i] < -1e-10) {
          ok = false;
          break;
        }
        Vec ai = sys.augmented_row(act[i]);
        for (int c = 0; c < n; ++c) u_pol[c] -= mu[i] * ai[c];
      }
      if (ok && sys.max_violation(u_pol) <= 1e-10) u = u_pol;
    }
  }

  // A claimed projection must actually satisfy the system. When it does not,
  // the cone is empty at the solver's resolution and the multipliers act as
  // the (approximate) certificate of that emptiness.
  if (sys.max_violation(u) > kFeasTol) {
    rep.status = SolveStatus::infeasible;
    rep.certificate = make_certificate(nn.x);
    return rep;
  }

  rep.status = SolveStatus::feasible;
  rep.point = std::move(u);
  return rep;
}

SolveReport lp_feasible(const HalfspaceSystem& sys) {
  Vec mid(sys.n());
  for (int i = 0; i < sys.n(); ++i) mid[i] = 0.5 * (sys.box_lower[i] + sys.box_upper[i]);
  return qp_project(mid, sys);
}

SolveReport lp_minimize(const Vec& c, const HalfspaceSystem& sys) {
  const int n = sys.n();
  if (static_cast<int>(c.size()) != n)
    throw std::invalid_argument("lp_minimize: objective length mismatch");
  const int M = sys.augmented_rows();
  SolveReport rep;

  std::vector<int> comb(n);
  Vec best;
  double best_obj = std::numeric_limits<double>::infinity();

  // All n-subsets of the augmented rows, lexicographic.
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  auto advance = [&]() -> bool {
    int i = n - 1;
    while (i >= 0 && idx[i] == M - n + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };

  if (M >= n) {
    do {
      // Solve the n x n vertex system by Gaussian elimination.
      Mat S(n, n);
      Vec rhs(n);
      for (int r = 0; r < n; ++r) {
        Vec a = sys.augmented_row(idx[r]);
        for (int cidx = 0; cidx < n; ++cidx) S(r, cidx) = a[cidx];
        rhs[r] = sys.augmented_rhs(idx[r]);
      }
      bool singular = false;
      for (int k = 0; k < n && !singular; ++k) {
        int piv = k;
        for (int r = k + 1; r < n; ++r)
          if (std::abs(S(r, k)) > std::abs(S(piv, k))) piv = r;
        if (std::abs(S(piv, k)) < 1e-12) {
          singular = true;
          break;
        }
        if (piv != k) {
          for (int cidx = 0; cidx < n; ++cidx) std::swap(S(piv, cidx), S(k, cidx));
          std::swap(rhs[piv], rhs[k]);
        }
        for (int r = k + 1; r < n; ++r) {
          double fmul = S(r, k) / S(k, k);
          for (int cidx = k; cidx < n; ++cidx) S(r, cidx) -= fmul * S(k, cidx);
          rhs[r] -= fmul * rhs[k];
        }
      }
      if (singular) continue;
      Vec v(n);
      for (int k = n - 1; k >= 0; --k) {
        double s = rhs[k];
        for (int cidx = k + 1; cidx < n; ++cidx) s -= S(k, cidx) * v[cidx];
        v[k] = s / S(k, k);
      }
      if (sys.max_violation(v) > kFeasTol) continue;
      double obj = dot(c, v);
      bool better = obj < best_obj - 1e-12;
      if (!better && std::abs(obj - best_obj) <= 1e-12 && !best.empty()) {
        for (int i = 0; i < n; ++i) {
          if (v[i] < best[i] - 1e-12) {
            better = true;
            break;
          }
          if (v[i] > best[i] + 1e-12) break;
        }
      }
      if (better) {
        best_obj = obj;
        best = v;
      }
    } while (advance());
  }

  if (best.empty()) {
    // No feasible vertex: certify emptiness through the projection dual.
    SolveReport probe = lp_feasible(sys);
    rep.status = SolveStatus::infeasible;
    rep.certificate = probe.certificate;
    rep.iterations = probe.iterations;
    return rep;
  }
  rep.status = SolveStatus::feasible;
  rep.point = std::move(best);
  return rep;
}

}  // namespace scfo
