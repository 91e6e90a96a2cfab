#include "scfo/filter.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace scfo {

namespace {
constexpr double kStationaryTol = 1e-12;
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::none: return "none";
    case Mode::feasibility_only: return "feasibility_only";
    case Mode::full: return "full";
  }
  return "?";
}

SCFOParams SCFOParams::defaults(const ProblemSpec& problem, Mode mode) {
  SCFOParams p;
  const int n_g = problem.n_g;
  p.eps_hi.assign(n_g, 1.0);
  p.delta_g_hi.assign(n_g, 1.0);
  p.delta_phi_hi = 1.0;
  p.eps_lo.assign(n_g, 1e-8);
  p.delta_g_lo.assign(n_g, 1e-8);
  p.delta_phi_lo = 1e-8;
  p.mode = mode;
  switch (mode) {
    case Mode::none:
    case Mode::full:
      p.eps = p.eps_hi;
      p.delta_g = p.delta_g_hi;
      p.delta_phi = p.delta_phi_hi;
      break;
    case Mode::feasibility_only:
      // Fixed fraction of the upper brackets; no auto-tuning in this mode.
      p.eps = scaled(p.eps_hi, 0.01);
      p.delta_g = scaled(p.delta_g_hi, 0.01);
      p.delta_phi = 0.01;
      break;
  }
  return p;
}

void SCFOParams::validate(int n_g) const {
  auto check_vec = [n_g](const Vec& v, const char* name) {
    if (static_cast<int>(v.size()) != n_g)
      throw std::invalid_argument(std::string("params: ") + name + " length mismatch");
    for (double x : v)
      if (!(x > 0.0))
        throw std::invalid_argument(std::string("params: ") + name + " must be positive");
  };
  check_vec(eps, "eps");
  check_vec(delta_g, "delta_g");
  check_vec(eps_hi, "eps_hi");
  check_vec(delta_g_hi, "delta_g_hi");
  check_vec(eps_lo, "eps_lo");
  check_vec(delta_g_lo, "delta_g_lo");
  if (!(delta_phi > 0.0) || !(delta_phi_hi > 0.0) || !(delta_phi_lo > 0.0))
    throw std::invalid_argument("params: delta_phi values must be positive");
  for (int j = 0; j < n_g; ++j) {
    if (eps_lo[j] > eps_hi[j] || delta_g_lo[j] > delta_g_hi[j])
      throw std::invalid_argument("params: lower bracket above upper bracket");
    if (eps[j] > eps_hi[j] || delta_g[j] > delta_g_hi[j])
      throw std::invalid_argument("params: current value above upper bracket");
  }
  if (delta_phi_lo > delta_phi_hi || delta_phi > delta_phi_hi)
    throw std::invalid_argument("params: delta_phi bracket ordering broken");
  if (!(descent_factor > 0.0) || !(descent_factor < 2.0))
    throw std::invalid_argument("params: descent_factor must lie in (0, 2)");
}

double SCFOParams::eps_min() const {
  double m = eps.empty() ? 0.0 : eps[0];
  for (double v : eps) m = std::min(m, v);
  return m;
}

double SCFOParams::delta_g_min() const {
  double m = delta_g.empty() ? 0.0 : delta_g[0];
  for (double v : delta_g) m = std::min(m, v);
  return m;
}

std::vector<int> epsilon_active_set(const Vec& g_values, const Vec& eps) {
  if (g_values.size() != eps.size())
    throw std::invalid_argument("epsilon_active_set: length mismatch");
  std::vector<int> out;
  for (size_t j = 0; j < g_values.size(); ++j)
    if (g_values[j] >= -eps[j]) out.push_back(static_cast<int>(j));
  return out;
}

GainBreakdown feasibility_gain(const ProblemSpec& problem, const Vec& u_k, const Vec& g_values,
                               const Vec& target) {
  GainBreakdown gb;
  for (int j = 0; j < problem.n_g; ++j) {
    if (g_values[j] >= 0.0) {
      std::ostringstream os;
      os << "feasibility_gain: constraint " << j << " is at " << g_values[j]
         << " (feasibility already lost)";
      throw SafetyError(os.str());
    }
  }
  Vec d = sub(target, u_k);
  if (norm_inf(d) <= kStationaryTol) {
    gb.chosen = 0.0;
    gb.limiter = GainLimiter::stationary;
    return gb;
  }
  gb.per_constraint.resize(problem.n_g);
  double best = std::numeric_limits<double>::infinity();
  int best_j = -1;
  for (int j = 0; j < problem.n_g; ++j) {
    double denom = 0.0;
    for (int i = 0; i < problem.n_u; ++i) denom += problem.lipschitz(j, i) * std::abs(d[i]);
    gb.per_constraint[j] = -g_values[j] / denom;
    if (gb.per_constraint[j] < best) {
      best = gb.per_constraint[j];
      best_j = j;
    }
  }
  if (best_j < 0 || best >= 1.0) {
    gb.chosen = 1.0;
    gb.limiter = GainLimiter::clip_one;
    gb.limiting_index = -1;
  } else {
    gb.chosen = best;
    gb.limiter = GainLimiter::constraint;
    gb.limiting_index = best_j;
  }
  return gb;
}

GainBreakdown full_gain(const ProblemSpec& problem, const Vec& u_k, const Vec& g_values,
                        const Vec& grad_cost, const Vec& target, double descent_factor) {
  GainBreakdown gb = feasibility_gain(problem, u_k, g_values, target);
  if (gb.limiter == GainLimiter::stationary) return gb;
  Vec d = sub(target, u_k);
  double slope = dot(grad_cost, d);
  if (!(slope < 0.0))
    throw std::invalid_argument("full_gain: target not in the cost descent halfspace");
  double curv = problem.q_cost.quad_form(d);
  double cost_term = -descent_factor * slope / curv;
  gb.cost_term = cost_term;
  if (cost_term < gb.chosen) {
    gb.chosen = cost_term;
    gb.limiter = GainLimiter::cost;
    gb.limiting_index = -1;
  }
  if (gb.chosen >= 1.0) {
    gb.chosen = 1.0;
    gb.limiter = GainLimiter::clip_one;
    gb.limiting_index = -1;
  }
  return gb;
}

namespace {

HalfspaceSystem cone_system_with_activity(const ProblemSpec& problem, const Vec& u_k,
                                          const Evaluation& eval, const SCFOParams& params,
                                          const Vec& eps_test) {
  // Constraint activity and all descent rows are formed in the scaled space.
  Vec g_scaled(problem.n_g);
  for (int j = 0; j < problem.n_g; ++j) g_scaled[j] = problem.scaling[j] * eval.g[j];
  std::vector<int> active = epsilon_active_set(g_scaled, eps_test);

  const bool cost_row = params.mode == Mode::full;
  HalfspaceSystem sys;
  sys.box_lower = problem.u_lower;
  sys.box_upper = problem.u_upper;
  sys.A = Mat(static_cast<int>(active.size()) + (cost_row ? 1 : 0), problem.n_u);
  sys.b.assign(sys.A.rows, 0.0);
  int r = 0;
  for (int j : active) {
    double s = problem.scaling[j];
    double row_dot_uk = 0.0;
    for (int i = 0; i < problem.n_u; ++i) {
      sys.A(r, i) = s * eval.g_gradients(j, i);
      row_dot_uk += sys.A(r, i) * u_k[i];
    }
    sys.b[r] = row_dot_uk - params.delta_g[j];
    ++r;
  }
  if (cost_row) {
    double s = problem.cost_scale();
    double row_dot_uk = 0.0;
    for (int i = 0; i < problem.n_u; ++i) {
      sys.A(r, i) = s * eval.cost_gradient[i];
      row_dot_uk += sys.A(r, i) * u_k[i];
    }
    sys.b[r] = row_dot_uk - params.delta_phi;
  }
  return sys;
}

}  // namespace

HalfspaceSystem descent_cone_system(const ProblemSpec& problem, const Vec& u_k,
                                    const Evaluation& eval, const SCFOParams& params) {
  return cone_system_with_activity(problem, u_k, eval, params, params.eps);
}

ProjectionOutcome build_projection(const ProblemSpec& problem, const Vec& u_k,
                                   const Evaluation& eval, const SCFOParams& params,
                                   const Vec& target) {
  if (params.mode == Mode::none)
    throw std::invalid_argument("build_projection: mode none has no projection");
  HalfspaceSystem sys = descent_cone_system(problem, u_k, eval, params);
  SolveReport rep = qp_project(target, sys);
  ProjectionOutcome out;
  out.solver_status = rep.status;
  if (rep.status == SolveStatus::feasible) {
    out.feasible = true;
    out.projected = *rep.point;
  } else if (rep.status == SolveStatus::infeasible) {
    out.feasible = false;
    out.certificate = rep.certificate;
  }
  return out;
}

AutotuneResult autotune_and_project(const ProblemSpec& problem, const Vec& u_k,
                                    const Evaluation& eval, const SCFOParams& params,
                                    const Vec& target) {
  if (params.mode != Mode::full)
    throw std::invalid_argument("autotune_and_project: requires full mode");
  AutotuneResult res;
  SCFOParams p = params;
  p.eps = p.eps_hi;
  p.delta_g = p.delta_g_hi;
  p.delta_phi = p.delta_phi_hi;

  auto all_below_lo = [&]() {
    for (size_t j = 0; j < p.eps.size(); ++j)
      if (p.eps[j] >= p.eps_lo[j]) return false;
    for (size_t j = 0; j < p.delta_g.size(); ++j)
      if (p.delta_g[j] >= p.delta_g_lo[j]) return false;
    return p.delta_phi < p.delta_phi_lo;
  };

  int failures = 0;
  while (true) {
    HalfspaceSystem sys = cone_system_with_activity(problem, u_k, eval, p, p.eps);
    SolveReport probe = lp_feasible(sys);
    if (probe.status == SolveStatus::feasible) {
      SolveReport qp = qp_project(target, sys);
      if (qp.status == SolveStatus::feasible) {
        res.outcome.solver_status = qp.status;
        res.outcome.feasible = true;
        res.outcome.projected = *qp.point;
        res.params = p;
        res.converged = false;
        return res;
      }
      // The probe passed but the projection could not be certified at this
      // resolution; treat the level as infeasible and keep relaxing.
    }
    ++failures;
    for (double& v : p.delta_g) v *= 0.5;
    p.delta_phi *= 0.5;
    if (failures % 2 == 1)
      for (double& v : p.eps) v *= 0.5;
    if (all_below_lo()) {
      res.params = p;
      res.converged = true;
      res.outcome.feasible = false;
      res.outcome.solver_status = SolveStatus::infeasible;
      return res;
    }
  }
}

Iterate make_initial_iterate(const ProblemSpec& problem, const Vec& u0,
                             const SCFOParams& params) {
  if (!problem.in_box(u0))
    throw std::invalid_argument("initial point lies outside the box");
  Evaluation ev = evaluate(problem, u0);
  for (int j = 0; j < problem.n_g; ++j)
    if (!(ev.g[j] < 0.0)) {
      std::ostringstream os;
      os << "initial point is not strictly feasible: g[" << j << "] = " << ev.g[j];
      throw std::invalid_argument(os.str());
    }
  Iterate it;
  it.k = 0;
  it.u = u0;
  it.cost_value = ev.cost;
  it.g_values = ev.g;
  it.cost_gradient = ev.cost_gradient;
  it.g_gradients = ev.g_gradients;
  it.gain = 0.0;
  it.raw_target = u0;
  it.params_used = params;
  it.converged_flag = false;
  return it;
}

Iterate scfo_step(const ProblemSpec& problem, const Iterate& state, const SCFOParams& params,
                  const Vec& raw_target) {
  if (!problem.in_box(raw_target))
    throw std::invalid_argument("scfo_step: target outside the box");
  for (int j = 0; j < problem.n_g; ++j)
    if (state.g_values[j] >= 0.0) {
      std::ostringstream os;
      os << "scfo_step: iterate " << state.k << " has g[" << j << "] = " << state.g_values[j];
      throw SafetyError(os.str());
    }

  Evaluation eval{state.cost_value, state.g_values, state.cost_gradient, state.g_gradients};
  GainBreakdown gb;
  std::optional<Vec> projected;
  SCFOParams used = params;
  bool converged = false;
  Vec step_target = raw_target;

  switch (params.mode) {
    case Mode::none:
      gb = feasibility_gain(problem, state.u, state.g_values, raw_target);
      break;
    case Mode::feasibility_only: {
      ProjectionOutcome po = build_projection(problem, state.u, eval, params, raw_target);
      if (po.feasible) {
        projected = po.projected;
        step_target = po.projected;
        gb = feasibility_gain(problem, state.u, state.g_values, po.projected);
      } else {
        // Negatively spanned descent cone: hold the current input.
        projected = state.u;
        step_target = state.u;
        gb.chosen = 0.0;
        gb.limiter = GainLimiter::stationary;
      }
      break;
    }
    case Mode::full: {
      AutotuneResult ar = autotune_and_project(problem, state.u, eval, params, raw_target);
      used = ar.params;
      if (ar.converged) {
        converged = true;
        projected = state.u;
        step_target = state.u;
        gb.chosen = 0.0;
        gb.limiter = GainLimiter::stationary;
      } else if (ar.outcome.feasible) {
        projected = ar.outcome.projected;
        step_target = ar.outcome.projected;
        gb = full_gain(problem, state.u, state.g_values, state.cost_gradient,
                       ar.outcome.projected, params.descent_factor);
      } else {
        // The probe succeeded but the projection solver degenerated; hold.
        projected = state.u;
        step_target = state.u;
        gb.chosen = 0.0;
        gb.limiter = GainLimiter::stationary;
      }
      break;
    }
  }

  Vec u_next = axpy(gb.chosen, sub(step_target, state.u), state.u);
  u_next = problem.clip_to_box(u_next);
  Evaluation next_ev = evaluate(problem, u_next);
  for (int j = 0; j < problem.n_g; ++j)
    if (next_ev.g[j] >= 0.0) {
      std::ostringstream os;
      os << "scfo_step: step from iterate " << state.k << " produced g[" << j
         << "] = " << next_ev.g[j] << " (safety invariant broken)";
      throw SafetyError(os.str());
    }

  Iterate next;
  next.k = state.k + 1;
  next.u = std::move(u_next);
  next.cost_value = next_ev.cost;
  next.g_values = next_ev.g;
  next.cost_gradient = next_ev.cost_gradient;
  next.g_gradients = next_ev.g_gradients;
  next.gain = gb.chosen;
  next.raw_target = raw_target;
  next.projected_target = projected;
  next.params_used = used;
  next.converged_flag = converged;
  return next;
}

}  // namespace scfo
