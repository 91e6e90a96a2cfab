#include "scfo/problem.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace scfo {

bool ProblemSpec::in_box(const Vec& u, double tol) const {
  if (static_cast<int>(u.size()) != n_u) return false;
  for (int i = 0; i < n_u; ++i)
    if (u[i] < u_lower[i] - tol || u[i] > u_upper[i] + tol) return false;
  return true;
}

Vec ProblemSpec::clip_to_box(const Vec& u) const {
  Vec out(u);
  for (int i = 0; i < n_u; ++i) out[i] = std::min(std::max(out[i], u_lower[i]), u_upper[i]);
  return out;
}

Vec ProblemSpec::box_midpoint() const {
  Vec out(n_u);
  for (int i = 0; i < n_u; ++i) out[i] = 0.5 * (u_lower[i] + u_upper[i]);
  return out;
}

void ProblemSpec::validate() const {
  if (n_u <= 0) throw std::invalid_argument("problem: n_u must be positive");
  if (n_g < 0) throw std::invalid_argument("problem: n_g must be nonnegative");
  if (static_cast<int>(u_lower.size()) != n_u || static_cast<int>(u_upper.size()) != n_u)
    throw std::invalid_argument("problem: box bound length mismatch");
  for (int i = 0; i < n_u; ++i)
    if (!(u_lower[i] < u_upper[i]))
      throw std::invalid_argument("problem: u_lower must be strictly below u_upper");
  if (static_cast<int>(constraints.size()) != n_g ||
      static_cast<int>(constraint_grads.size()) != n_g)
    throw std::invalid_argument("problem: constraint evaluator count mismatch");
  if (lipschitz.rows != n_g || (n_g > 0 && lipschitz.cols != n_u))
    throw std::invalid_argument("problem: lipschitz matrix shape mismatch");
  for (int j = 0; j < n_g; ++j)
    for (int i = 0; i < n_u; ++i)
      if (!(lipschitz(j, i) > 0.0))
        throw std::invalid_argument("problem: lipschitz entries must be strictly positive");
  if (static_cast<int>(q_cost.diag.size()) != n_u || !q_cost.valid())
    throw std::invalid_argument("problem: q_cost must be a positive diagonal of length n_u");
  if (!q_constraints.empty() && static_cast<int>(q_constraints.size()) != n_g)
    throw std::invalid_argument("problem: q_constraints must be empty or one per constraint");
  for (const auto& qb : q_constraints)
    if (static_cast<int>(qb.diag.size()) != n_u || !qb.valid())
      throw std::invalid_argument("problem: q_constraints entries must be positive diagonals");
  if (static_cast<int>(scaling.size()) != n_g + 1)
    throw std::invalid_argument("problem: scaling must have n_g + 1 entries");
  for (double s : scaling)
    if (!(s > 0.0)) throw std::invalid_argument("problem: scaling must be strictly positive");
}

Evaluation evaluate(const ProblemSpec& problem, const Vec& u) {
  if (static_cast<int>(u.size()) != problem.n_u)
    throw std::domain_error("evaluate: input length mismatch");
  constexpr double tol = 1e-12;
  for (int i = 0; i < problem.n_u; ++i) {
    if (u[i] < problem.u_lower[i] - tol) {
      std::ostringstream os;
      os << "evaluate: u[" << i << "] = " << u[i] << " below lower bound "
         << problem.u_lower[i];
      throw std::domain_error(os.str());
    }
    if (u[i] > problem.u_upper[i] + tol) {
      std::ostringstream os;
      os << "evaluate: u[" << i << "] = " << u[i] << " above upper bound "
         << problem.u_upper[i];
      throw std::domain_error(os.str());
    }
  }
  Evaluation ev;
  ev.cost = problem.cost(u);
  ev.cost_gradient = problem.cost_grad(u);
  ev.g.resize(problem.n_g);
  ev.g_gradients = Mat(problem.n_g, problem.n_u);
  for (int j = 0; j < problem.n_g; ++j) {
    ev.g[j] = problem.constraints[j](u);
    Vec gr = problem.constraint_grads[j](u);
    for (int i = 0; i < problem.n_u; ++i) ev.g_gradients(j, i) = gr[i];
  }
  return ev;
}

ProblemSpec make_ex2(double strictness_factor) {
  if (!(strictness_factor > 1.0))
    throw std::invalid_argument("make_ex2: strictness_factor must exceed 1");
  ProblemSpec p;
  p.id = "ex2";
  p.n_u = 2;
  p.n_g = 2;
  p.u_lower = {-0.5, 0.0};
  p.u_upper = {0.5, 0.8};
  // The original objective maximizes u2; stored as minimization of -u2.
  p.cost = [](const Vec& u) { return -u[1]; };
  p.cost_grad = [](const Vec&) { return Vec{0.0, -1.0}; };
  p.constraints = {
      [](const Vec& u) { return u[0] * u[0] - 0.5 * u[0] + u[1] - 0.7; },
      [](const Vec& u) { return 2.0 * u[0] * u[0] + 0.5 * u[0] + u[1] - 0.75; },
  };
  p.constraint_grads = {
      [](const Vec& u) { return Vec{2.0 * u[0] - 0.5, 1.0}; },
      [](const Vec& u) { return Vec{4.0 * u[0] + 0.5, 1.0}; },
  };
  p.lipschitz = Mat(2, 2);
  const double base[2][2] = {{1.5, 1.0}, {2.5, 1.0}};
  for (int j = 0; j < 2; ++j)
    for (int i = 0; i < 2; ++i) p.lipschitz(j, i) = strictness_factor * base[j][i];
  // The cost is linear; any positive diagonal is a valid growth bound.
  p.q_cost = QuadBound{{0.01, 0.01}};
  // Entrywise limits strictly above the constant constraint Hessians
  // |H1| = [[2,0],[0,0]], |H2| = [[4,0],[0,0]].
  p.q_constraints = {
      qbound_from_hessian_limits(Mat::from_rows({{2.2, 0.01}, {0.01, 0.01}})),
      qbound_from_hessian_limits(Mat::from_rows({{4.4, 0.01}, {0.01, 0.01}})),
  };
  p.scaling = {1.0, 1.0, 1.0};
  p.validate();
  return p;
}

ProblemSpec make_ex4() {
  ProblemSpec p;
  p.id = "ex4";
  p.n_u = 2;
  p.n_g = 3;
  p.u_lower = {-0.5, 0.0};
  p.u_upper = {0.5, 0.8};
  p.cost = [](const Vec& u) {
    return (u[0] - 0.5) * (u[0] - 0.5) + (u[1] - 0.4) * (u[1] - 0.4);
  };
  p.cost_grad = [](const Vec& u) { return Vec{2.0 * (u[0] - 0.5), 2.0 * (u[1] - 0.4)}; };
  p.constraints = {
      [](const Vec& u) { return -6.0 * u[0] * u[0] - 3.5 * u[0] + u[1] - 0.6; },
      [](const Vec& u) { return 2.0 * u[0] * u[0] + 0.5 * u[0] + u[1] - 0.75; },
      [](const Vec& u) {
        return -u[0] * u[0] - (u[1] - 0.15) * (u[1] - 0.15) + 0.01;
      },
  };
  p.constraint_grads = {
      [](const Vec& u) { return Vec{-12.0 * u[0] - 3.5, 1.0}; },
      [](const Vec& u) { return Vec{4.0 * u[0] + 0.5, 1.0}; },
      [](const Vec& u) { return Vec{-2.0 * u[0], -2.0 * (u[1] - 0.15)}; },
  };
  p.lipschitz = Mat(3, 2);
  const double base[3][2] = {{9.5, 1.0}, {2.5, 1.0}, {1.0, 1.3}};
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 2; ++i) p.lipschitz(j, i) = 1.1 * base[j][i];
  p.q_cost = QuadBound{{2.0, 2.0}};  // Hessian of the cost
  // |H1| = [[12,0],[0,0]], |H2| = [[4,0],[0,0]], |H3| = [[2,0],[0,2]].
  p.q_constraints = {
      qbound_from_hessian_limits(Mat::from_rows({{13.2, 0.01}, {0.01, 0.01}})),
      qbound_from_hessian_limits(Mat::from_rows({{4.4, 0.01}, {0.01, 0.01}})),
      qbound_from_hessian_limits(Mat::from_rows({{2.2, 0.01}, {0.01, 2.2}})),
  };
  p.scaling = {4.0, 2.0, 1.0, 1.5};
  p.validate();
  return p;
}

ProblemSpec problem_by_id(const std::string& id) {
  if (id == "ex2") return make_ex2();
  if (id == "ex4") return make_ex4();
  throw std::invalid_argument("unknown plant id: " + id);
}

double strictness_degree(const ProblemSpec& problem, double grid_step) {
  double worst = 0.0;
  // Walk a regular grid over the box, including both ends of each axis.
  std::vector<int> steps(problem.n_u);
  for (int i = 0; i < problem.n_u; ++i)
    steps[i] = static_cast<int>(std::floor((problem.u_upper[i] - problem.u_lower[i]) / grid_step + 0.5));
  if (problem.n_u != 2)
    throw std::invalid_argument("strictness_degree: only 2-input plants are shipped");
  Vec u(2);
  for (int a = 0; a <= steps[0]; ++a) {
    u[0] = std::min(problem.u_lower[0] + a * grid_step, problem.u_upper[0]);
    for (int b = 0; b <= steps[1]; ++b) {
      u[1] = std::min(problem.u_lower[1] + b * grid_step, problem.u_upper[1]);
      for (int j = 0; j < problem.n_g; ++j) {
        Vec gr = problem.constraint_grads[j](u);
        for (int i = 0; i < problem.n_u; ++i)
          worst = std::max(worst, std::abs(gr[i]) / problem.lipschitz(j, i));
      }
    }
  }
  return worst;
}

}  // namespace scfo
