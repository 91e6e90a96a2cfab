#pragma once

#include "scfo/linalg.hpp"

namespace scfo {

/// Diagonal quadratic growth bound: the matrix Q with Q(i,i) = diag[i].
/// All entries must be strictly positive.
struct QuadBound {
  Vec diag;

  bool valid() const {
    if (diag.empty()) return false;
    for (double d : diag)
      if (!(d > 0.0)) return false;
    return true;
  }

  double quad_form(const Vec& v) const {
    double s = 0.0;
    for (size_t i = 0; i < diag.size(); ++i) s += diag[i] * v[i] * v[i];
    return s;
  }
};

/// Worst-case growth of a function between two points given per-coordinate
/// Lipschitz constants: sum_i kappa_i * |u_to_i - u_from_i|.
/// For strict constants and u_to != u_from the true evolution is strictly
/// below the returned value; at zero displacement the bound degenerates to 0.
double linear_growth_bound(const Vec& kappa_row, const Vec& u_from, const Vec& u_to);

/// Builds the diagonal quadratic bound from entrywise limits M on the second
/// derivatives: diag_i = sum_j M(i,j). Throws std::invalid_argument unless
/// every entry of M is strictly positive.
QuadBound qbound_from_hessian_limits(const Mat& M);

/// First-order term plus half the diagonal quadratic form:
/// grad(u_from)^T d + 0.5 d^T Q d with d = u_to - u_from.
double quadratic_growth_bound(const Vec& grad, const QuadBound& qb, const Vec& u_from,
                              const Vec& u_to);

/// Largest step-gain interval endpoint for guaranteed descent along a
/// direction in the descent halfspace: -2 grad^T d / (d^T Q d).
/// Requires grad^T d < 0 and d != 0; throws std::invalid_argument otherwise.
double descent_gain_upper(const Vec& grad, const QuadBound& qb, const Vec& u_k,
                          const Vec& u_star);

}  // namespace scfo
