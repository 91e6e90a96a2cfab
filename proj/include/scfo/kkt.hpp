#pragma once

#include <optional>

#include "scfo/problem.hpp"

namespace scfo {

/// First-order optimality residual at a point: the minimal sum of squared
/// stationarity and complementary-slackness errors over nonnegative
/// multipliers.
struct KKTReport {
  double error = 0.0;
  Vec multipliers;  // mu (n_g), then zeta_lower (n_u), then zeta_upper (n_u)
  double stationarity_norm_sq = 0.0;
  double slackness_sq = 0.0;
};

/// Computes the optimality residual by nonnegative least squares over the
/// multipliers. Every constraint enters, not only the nearly active ones.
/// Throws std::domain_error when u is outside the box.
KKTReport kkt_error(const ProblemSpec& problem, const Vec& u);

struct SpanningReport {
  bool spanned = false;
  std::optional<Vec> certificate;  // nonnegative, nonzero, max entry 1
};

/// Decides whether some nonnegative nonzero combination of the rows sums to
/// zero (the only obstruction to a feasible descent-cone projection).
/// Requires at least one row.
SpanningReport negative_spanning(const Mat& rows);

}  // namespace scfo
