#pragma once

#include <functional>
#include <string>
#include <vector>

#include "scfo/bounds.hpp"
#include "scfo/linalg.hpp"

namespace scfo {

/// Exact values of the plant at one input point.
struct Evaluation {
  double cost = 0.0;
  Vec g;             // n_g constraint values
  Vec cost_gradient; // n_u
  Mat g_gradients;   // n_g x n_u, row j holds grad g_j
};

/// A plant: cost and constraint evaluators with their gradients, input box,
/// strict Lipschitz constants for the constraints, and quadratic growth
/// bounds. Immutable after construction; evaluators are pure functions.
struct ProblemSpec {
  std::string id;
  int n_u = 0;
  int n_g = 0;
  Vec u_lower, u_upper;

  std::function<double(const Vec&)> cost;
  std::function<Vec(const Vec&)> cost_grad;
  std::vector<std::function<double(const Vec&)>> constraints;
  std::vector<std::function<Vec(const Vec&)>> constraint_grads;

  Mat lipschitz;                        // n_g x n_u, strictly positive entries
  QuadBound q_cost;                     // diagonal bound for the cost
  std::vector<QuadBound> q_constraints; // per-constraint bounds (may be empty)
  Vec scaling;                          // n_g + 1 positive factors: g_1..g_ng then cost

  double cost_scale() const { return scaling[static_cast<size_t>(n_g)]; }

  bool in_box(const Vec& u, double tol = 1e-12) const;
  Vec clip_to_box(const Vec& u) const;
  Vec box_midpoint() const;

  /// Throws std::invalid_argument when a structural invariant is broken.
  void validate() const;
};

/// Evaluates cost, constraints, and all gradients at u.
/// Throws std::domain_error naming the violated bound when u leaves the box
/// by more than 1e-12.
Evaluation evaluate(const ProblemSpec& problem, const Vec& u);

/// Two-input plant "ex2": linear cost -u2 with two convex quadratic
/// constraints. The strict Lipschitz matrix is strictness_factor times the
/// componentwise-maximal Jacobian magnitudes; requires strictness_factor > 1.
ProblemSpec make_ex2(double strictness_factor = 1.1);

/// Two-input plant "ex4": quadratic bowl cost with one convex and two concave
/// constraints, function scaling 4:2:1:1.5.
ProblemSpec make_ex4();

/// Lookup by id ("ex2", "ex4"); throws std::invalid_argument on unknown id.
ProblemSpec problem_by_id(const std::string& id);

/// Largest observed ratio |dg_j/du_i| / lipschitz(j,i) over a dense grid.
/// Strict constants keep this strictly below 1.
double strictness_degree(const ProblemSpec& problem, double grid_step = 1e-3);

}  // namespace scfo
