#pragma once

#include <optional>

#include "scfo/linalg.hpp"

namespace scfo {

/// Inequality system { u : A u <= b, box_lower <= u <= box_upper }.
/// Solvers treat the box as additional halfspace rows appended after A in the
/// order: A rows, then +e_i u <= upper_i (i = 0..n-1), then -e_i u <= -lower_i.
/// Infeasibility certificates index that augmented row list.
struct HalfspaceSystem {
  Mat A;   // m x n
  Vec b;   // m
  Vec box_lower, box_upper;  // n each

  int n() const { return static_cast<int>(box_lower.size()); }
  int m() const { return A.rows; }
  int augmented_rows() const { return m() + 2 * n(); }

  Vec augmented_row(int r) const;
  double augmented_rhs(int r) const;

  /// max_r (a_r^T u - b_r) over the augmented rows; <= 0 means u satisfies
  /// the system.
  double max_violation(const Vec& u) const;
};

enum class SolveStatus { feasible, infeasible, degenerate };

struct SolveReport {
  SolveStatus status = SolveStatus::degenerate;
  std::optional<Vec> point;
  /// Nonnegative multipliers nu over the augmented rows with nu^T A ~ 0 and
  /// nu^T b < 0, scaled so the largest entry is 1. Present when infeasible.
  std::optional<Vec> certificate;
  int iterations = 0;
};

struct NnlsResult {
  Vec x;
  double residual_sq = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// min ||A x - y||^2 over x >= 0 (active-set method; lowest-index tie-break).
NnlsResult nnls_min(const Mat& A, const Vec& y);

/// min ||B m + b||^2 over m >= 0.
NnlsResult nnls(const Mat& B, const Vec& b);

/// Euclidean projection of target onto the system (unique when feasible).
/// Infeasibility of the system is a valid outcome and yields a certificate.
SolveReport qp_project(const Vec& target, const HalfspaceSystem& sys);

/// Feasibility probe: returns some strictly valid point of the system or an
/// infeasibility certificate. Decision tolerance 1e-9.
SolveReport lp_feasible(const HalfspaceSystem& sys);

/// min c^T u over the system by vertex enumeration (the box keeps the
/// polytope bounded). Ties on the objective resolve to the lexicographically
/// smallest vertex.
SolveReport lp_minimize(const Vec& c, const HalfspaceSystem& sys);

}  // namespace scfo
