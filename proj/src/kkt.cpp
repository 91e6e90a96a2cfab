#include "scfo/kkt.hpp"

#include <cmath>
#include <stdexcept>

#include "scfo/smallsolve.hpp"

namespace scfo {

KKTReport kkt_error(const ProblemSpec& problem, const Vec& u) {
  Evaluation ev = evaluate(problem, u);  // also enforces the box domain
  const int n_u = problem.n_u;
  const int n_g = problem.n_g;
  const int n_mult = n_g + 2 * n_u;
  const int n_rows = n_u + n_g + 2 * n_u;

  // Stationarity block: grad(cost) + sum mu_j grad(g_j) - zl + zu, plus one
  // penalty row per multiplier carrying its complementary-slackness product.
  Mat B(n_rows, n_mult);
  Vec offset(n_rows, 0.0);
  for (int i = 0; i < n_u; ++i) offset[i] = ev.cost_gradient[i];
  for (int j = 0; j < n_g; ++j)
    for (int i = 0; i < n_u; ++i) B(i, j) = ev.g_gradients(j, i);
  for (int i = 0; i < n_u; ++i) {
    B(i, n_g + i) = -1.0;        // zeta_lower column
    B(i, n_g + n_u + i) = 1.0;   // zeta_upper column
  }
  for (int j = 0; j < n_g; ++j) B(n_u + j, j) = ev.g[j];
  for (int i = 0; i < n_u; ++i) {
    B(n_u + n_g + i, n_g + i) = problem.u_lower[i] - u[i];
    B(n_u + n_g + n_u + i, n_g + n_u + i) = u[i] - problem.u_upper[i];
  }

  NnlsResult nn = nnls(B, offset);

  KKTReport rep;
  rep.multipliers = nn.x;
  rep.error = nn.residual_sq;
  Vec resid = matvec(B, nn.x);
  for (int r = 0; r < n_rows; ++r) resid[r] += offset[r];
  rep.stationarity_norm_sq = 0.0;
  for (int i = 0; i < n_u; ++i) rep.stationarity_norm_sq += resid[i] * resid[i];
  rep.slackness_sq = 0.0;
  for (int r = n_u; r < n_rows; ++r) rep.slackness_sq += resid[r] * resid[r];
  return rep;
}

SpanningReport negative_spanning(const Mat& rows) {
  if (rows.rows < 1) throw std::invalid_argument("negative_spanning: need at least one row");
  const int m = rows.rows;
  const int d = rows.cols;

  // Feasibility of { nu >= 0, sum_i nu_i row_i = 0, 1^T nu = 1 } expressed as
  // paired inequalities over the unit box.
  HalfspaceSystem sys;
  sys.box_lower.assign(m, 0.0);
  sys.box_upper.assign(m, 1.0);
  sys.A = Mat(2 * d + 2, m);
  sys.b.assign(2 * d + 2, 0.0);
  for (int c = 0; c < d; ++c)
    for (int i = 0; i < m; ++i) {
      sys.A(2 * c, i) = rows(i, c);
      sys.A(2 * c + 1, i) = -rows(i, c);
    }
  for (int i = 0; i < m; ++i) {
    sys.A(2 * d, i) = 1.0;
    sys.A(2 * d + 1, i) = -1.0;
  }
  sys.b[2 * d] = 1.0;
  sys.b[2 * d + 1] = -1.0;

  SolveReport rep = lp_feasible(sys);
  SpanningReport out;
  out.spanned = rep.status == SolveStatus::feasible;
  if (out.spanned) {
    Vec nu = *rep.point;
    double mx = norm_inf(nu);
    for (double& v : nu) v = std::max(v, 0.0) / mx;
    out.certificate = std::move(nu);
  }
  return out;
}

}  // namespace scfo
