#pragma once

#include <optional>
#include <stdexcept>
#include <vector>

#include "scfo/problem.hpp"
#include "scfo/smallsolve.hpp"

namespace scfo {

enum class Mode { none, feasibility_only, full };

const char* mode_name(Mode m);

/// Thrown when a hard-constraint invariant is found broken (a measured
/// constraint value at or above zero). This is a bug trap: the filter is
/// built so this cannot happen from a strictly feasible start.
struct SafetyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Projection parameters with their bracket ranges. eps decides which
/// constraints count as nearly active, delta_g / delta_phi how deep into the
/// local descent halfspaces the projected target must sit. All values live in
/// the scaled space defined by ProblemSpec::scaling.
struct SCFOParams {
  Vec eps, delta_g;
  double delta_phi = 1.0;
  Vec eps_hi, delta_g_hi;
  double delta_phi_hi = 1.0;
  Vec eps_lo, delta_g_lo;
  double delta_phi_lo = 1e-8;
  Mode mode = Mode::none;
  /// Safety factor applied to the cost descent-gain bound (strictly below 2).
  double descent_factor = 1.99;

  static SCFOParams defaults(const ProblemSpec& problem, Mode mode);
  void validate(int n_g) const;

  double eps_min() const;
  double delta_g_min() const;
};

enum class GainLimiter { constraint, cost, clip_one, stationary };

/// The terms entering the adaptive filter gain and which one decided it.
struct GainBreakdown {
  Vec per_constraint;               // -g_j / sum_i kappa_ji |target_i - u_ki|
  std::optional<double> cost_term;  // descent-factor bound, full mode only
  double chosen = 0.0;              // in [0, 1]
  GainLimiter limiter = GainLimiter::stationary;
  int limiting_index = -1;          // constraint index when limiter==constraint
};

/// Indices j with g_j >= -eps_j. Values at or above zero are included as
/// well, so boundary contact under floating point still registers as active.
std::vector<int> epsilon_active_set(const Vec& g_values, const Vec& eps);

/// Largest filter gain that keeps every constraint strictly negative after
/// the step, taken with equality and clipped to [0, 1]. Requires g ≺ 0
/// (SafetyError otherwise); a target equal to u_k yields gain 0.
GainBreakdown feasibility_gain(const ProblemSpec& problem, const Vec& u_k, const Vec& g_values,
                               const Vec& target);

/// feasibility_gain further capped by the cost descent term
/// descent_factor * (-grad^T d) / (d^T Q_cost d). Requires grad_cost^T
/// (target - u_k) < 0; throws std::invalid_argument otherwise.
GainBreakdown full_gain(const ProblemSpec& problem, const Vec& u_k, const Vec& g_values,
                        const Vec& grad_cost, const Vec& target, double descent_factor = 1.99);

struct ProjectionOutcome {
  bool feasible = false;
  Vec projected;                   // valid when feasible
  std::optional<Vec> certificate;  // Gale multipliers when infeasible
  SolveStatus solver_status = SolveStatus::degenerate;
};

/// The halfspace system of the target projection at u_k: scaled descent rows
/// for the eps-active constraints (and the cost in full mode) plus the box.
HalfspaceSystem descent_cone_system(const ProblemSpec& problem, const Vec& u_k,
                                    const Evaluation& eval, const SCFOParams& params);

/// Projects target onto the descent cone at u_k. params.mode must not be
/// none. Propagates a degenerate solver status unchanged.
ProjectionOutcome build_projection(const ProblemSpec& problem, const Vec& u_k,
                                   const Evaluation& eval, const SCFOParams& params,
                                   const Vec& target);

struct AutotuneResult {
  ProjectionOutcome outcome;  // valid when !converged
  SCFOParams params;          // the triple actually used (or the final one)
  bool converged = false;
};

/// Resets eps, delta_g, delta_phi to their upper brackets, then probes the
/// cone for feasibility, relaxing the parameters on failure: the descent
/// depths delta_g and delta_phi halve every failure, the activity width eps
/// every second failure. Keeping eps on the slower schedule means a
/// constraint the iterate is sliding along stays in the row set while the
/// depths search for a workable cone, yet a strictly inactive constraint
/// still leaves the set once eps passes its depth. Declares convergence once
/// every family has dropped below its lower bracket; otherwise solves the
/// projection at the first feasible triple.
AutotuneResult autotune_and_project(const ProblemSpec& problem, const Vec& u_k,
                                    const Evaluation& eval, const SCFOParams& params,
                                    const Vec& target);

/// One filtered update step: the record of input u_k, its measured values,
/// and the decision (target, gain, parameters) that produced it.
struct Iterate {
  int k = 0;
  Vec u;
  double cost_value = 0.0;
  Vec g_values;
  Vec cost_gradient;
  Mat g_gradients;
  double gain = 0.0;
  Vec raw_target;
  std::optional<Vec> projected_target;
  SCFOParams params_used;
  bool converged_flag = false;
};

/// Builds iterate 0 from a strictly feasible start (throws
/// std::invalid_argument when u0 is out of the box or any g >= 0).
Iterate make_initial_iterate(const ProblemSpec& problem, const Vec& u0,
                             const SCFOParams& params);

/// Applies one full filtered iteration to the state and returns the next
/// iterate, re-evaluated on the plant. Mode none applies the gain rule to the
/// raw target; feasibility_only projects with fixed parameters first; full
/// auto-tunes the parameters, projects, and uses the cost-capped gain.
/// Throws SafetyError if the current or resulting values break g ≺ 0.
Iterate scfo_step(const ProblemSpec& problem, const Iterate& state, const SCFOParams& params,
                  const Vec& raw_target);

}  // namespace scfo
