#include "scfo/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace scfo {

double linear_growth_bound(const Vec& kappa_row, const Vec& u_from, const Vec& u_to) {
  if (kappa_row.size() != u_from.size() || u_from.size() != u_to.size())
    throw std::invalid_argument("linear_growth_bound: dimension mismatch");
  double s = 0.0;
  for (size_t i = 0; i < kappa_row.size(); ++i) s += kappa_row[i] * std::abs(u_to[i] - u_from[i]);
  return s;
}

QuadBound qbound_from_hessian_limits(const Mat& M) {
  if (M.rows != M.cols || M.rows == 0)
    throw std::invalid_argument("qbound_from_hessian_limits: M must be square and nonempty");
  QuadBound qb;
  qb.diag.assign(M.rows, 0.0);
  for (int i = 0; i < M.rows; ++i) {
    double s = 0.0;
    for (int j = 0; j < M.cols; ++j) {
      if (!(M(i, j) > 0.0))
        throw std::invalid_argument("qbound_from_hessian_limits: entries must be > 0");
      s += M(i, j);
    }
    qb.diag[i] = s;
  }
  return qb;
}

double quadratic_growth_bound(const Vec& grad, const QuadBound& qb, const Vec& u_from,
                              const Vec& u_to) {
  if (grad.size() != u_from.size() || u_from.size() != u_to.size() ||
      qb.diag.size() != grad.size())
    throw std::invalid_argument("quadratic_growth_bound: dimension mismatch");
  Vec d = sub(u_to, u_from);
  return dot(grad, d) + 0.5 * qb.quad_form(d);
}

double descent_gain_upper(const Vec& grad, const QuadBound& qb, const Vec& u_k,
                          const Vec& u_star) {
  if (grad.size() != u_k.size() || u_k.size() != u_star.size() || qb.diag.size() != grad.size())
    throw std::invalid_argument("descent_gain_upper: dimension mismatch");
  Vec d = sub(u_star, u_k);
  if (norm_inf(d) == 0.0)
    throw std::invalid_argument("descent_gain_upper: zero displacement");
  double slope = dot(grad, d);
  if (!(slope < 0.0))
    throw std::invalid_argument("descent_gain_upper: target not in the descent halfspace");
  double curv = qb.quad_form(d);
  return -2.0 * slope / curv;
}

}  // namespace scfo
