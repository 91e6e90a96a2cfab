#include "scfo/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "scfo/smallsolve.hpp"

namespace scfo {

namespace {

void check_in_box(const Vec& u, const ProblemSpec& problem, const char* who) {
  if (!problem.in_box(u))
    throw std::logic_error(std::string(who) + ": produced a target outside the box");
}

void require_two_inputs(const ProblemSpec& problem, const char* who) {
  if (problem.n_u != 2)
    throw std::invalid_argument(std::string(who) + ": needs a 2-input plant");
}

// Least squares for at most two parameters with a rank guard.
// Returns false when the normal equations are rank deficient.
bool fit_block(const std::vector<Vec>& designs, const Vec& targets, Vec& theta_block) {
  const int p = static_cast<int>(theta_block.size());
  const int n = static_cast<int>(designs.size());
  if (p == 1) {
    double g = 0.0, r = 0.0;
    for (int s = 0; s < n; ++s) {
      g += designs[s][0] * designs[s][0];
      r += designs[s][0] * targets[s];
    }
    if (g <= 1e-14) return false;
    theta_block[0] = r / g;
    return true;
  }
  double g11 = 0.0, g12 = 0.0, g22 = 0.0, r1 = 0.0, r2 = 0.0;
  for (int s = 0; s < n; ++s) {
    g11 += designs[s][0] * designs[s][0];
    g12 += designs[s][0] * designs[s][1];
    g22 += designs[s][1] * designs[s][1];
    r1 += designs[s][0] * targets[s];
    r2 += designs[s][1] * targets[s];
  }
  double det = g11 * g22 - g12 * g12;
  if (det <= 1e-12 * std::max(g11 * g22, 1e-30)) return false;
  theta_block[0] = (g22 * r1 - g12 * r2) / det;
  theta_block[1] = (g11 * r2 - g12 * r1) / det;
  return true;
}

struct ModelEval {
  double cost;
  double violation;  // max over model constraints of g_m, <= 0 when feasible
};

ModelEval eval_model(const Vec& theta, const Vec& u) {
  double c = theta[0] * (u[0] - 0.3) * (u[0] - 0.3) + theta[1] * (u[1] - 0.3) * (u[1] - 0.3);
  double m1 = -theta[2] * u[0] * u[0] - 3.5 * u[0] + u[1] * u[1] - 0.6;
  double m2 = theta[3] * u[0] + u[1] + theta[4];
  double m3 = -u[0] * u[0] - (u[1] - 0.15) * (u[1] - 0.15) + 0.01;
  return {c, std::max(m1, std::max(m2, m3))};
}

// Lexicographic comparison used for deterministic candidates: feasible points
// order by cost, infeasible ones by violation.
bool model_better(const ModelEval& a, const ModelEval& b) {
  bool fa = a.violation <= 0.0, fb = b.violation <= 0.0;
  if (fa != fb) return fa;
  if (fa) return a.cost < b.cost;
  return a.violation < b.violation;
}

}  // namespace

Vec FixedTarget::next(const History&, const Evaluation&, const ProblemSpec& problem) {
  check_in_box(target_, problem, "fixed");
  return target_;
}

Vec DiminishingGradient::next(const History& history, const Evaluation& current,
                              const ProblemSpec& problem) {
  const int k = history.iterations();
  const double step = (k == 0) ? 1.0 : 1.0 / static_cast<double>(k);
  Vec u = history.latest().u;
  for (int i = 0; i < problem.n_u; ++i) u[i] -= step * current.cost_gradient[i];
  u = problem.clip_to_box(u);
  check_in_box(u, problem, "graddim");
  return u;
}

Vec ConstraintAdaptation::next(const History& history, const Evaluation& current,
                               const ProblemSpec& problem) {
  require_two_inputs(problem, "conadapt");
  const Vec& u_k = history.latest().u;
  // Affine constraint model fixed at identification time; measured bias terms
  // shift each row so the model matches the plant at the current input.
  const double rows[2][2] = {{-1.3, 1.0}, {-1.1, 1.0}};
  const double offs[2] = {-1.02, -1.39};
  HalfspaceSystem sys;
  sys.box_lower = problem.u_lower;
  sys.box_upper = problem.u_upper;
  sys.A = Mat(2, 2);
  sys.b.assign(2, 0.0);
  for (int j = 0; j < 2; ++j) {
    double model_at_uk = rows[j][0] * u_k[0] + rows[j][1] * u_k[1] + offs[j];
    double bias = 0.0;
    if (j < problem.n_g) bias = current.g[j] - model_at_uk;
    sys.A(j, 0) = rows[j][0];
    sys.A(j, 1) = rows[j][1];
    sys.b[j] = -offs[j] - bias;
  }
  SolveReport rep = lp_minimize(Vec{0.0, -1.0}, sys);  // maximize u2
  if (rep.status != SolveStatus::feasible)
    throw std::runtime_error("conadapt: bias-corrected model optimization is infeasible");
  Vec u = *rep.point;
  u = problem.clip_to_box(u);
  check_in_box(u, problem, "conadapt");
  return u;
}

Vec TwoStep::optimize_model(const Vec& theta, const ProblemSpec& problem) {
  // Coarse grid pass, then pattern refinement of the leading candidates. The
  // refinement recovers the 1e-6 resolution a dense fine grid would give at a
  // fraction of the evaluations.
  const double coarse = 1e-2;
  const int nx = static_cast<int>(std::floor((problem.u_upper[0] - problem.u_lower[0]) / coarse + 0.5));
  const int ny = static_cast<int>(std::floor((problem.u_upper[1] - problem.u_lower[1]) / coarse + 0.5));

  constexpr int kKeep = 8;
  std::vector<std::pair<ModelEval, Vec>> best;  // ordered best-first
  Vec u(2);
  for (int a = 0; a <= nx; ++a) {
    u[0] = std::min(problem.u_lower[0] + a * coarse, problem.u_upper[0]);
    for (int b = 0; b <= ny; ++b) {
      u[1] = std::min(problem.u_lower[1] + b * coarse, problem.u_upper[1]);
      ModelEval me = eval_model(theta, u);
      if (static_cast<int>(best.size()) < kKeep || model_better(me, best.back().first)) {
        auto pos = std::find_if(best.begin(), best.end(),
                                [&](const auto& e) { return model_better(me, e.first); });
        best.insert(pos, {me, u});
        if (static_cast<int>(best.size()) > kKeep) best.pop_back();
      }
    }
  }

  std::pair<ModelEval, Vec> winner = best.front();
  for (auto& cand : best) {
    Vec p = cand.second;
    ModelEval cur = cand.first;
    double h = coarse;
    while (h >= 1e-6) {
      bool moved = false;
      for (int i = 0; i < 2; ++i) {
        for (double sgn : {+1.0, -1.0}) {
          Vec q = p;
          q[i] = std::min(std::max(q[i] + sgn * h, problem.u_lower[i]), problem.u_upper[i]);
          ModelEval me = eval_model(theta, q);
          if (model_better(me, cur)) {
            p = q;
            cur = me;
            moved = true;
          }
        }
      }
      if (!moved) h *= 0.5;
    }
    if (model_better(cur, winner.first)) winner = {cur, p};
  }
  return winner.second;
}

Vec TwoStep::next(const History& history, const Evaluation&, const ProblemSpec& problem) {
  require_two_inputs(problem, "twostep");
  const int n = static_cast<int>(history.samples.size());

  // Re-estimate each linear parameter block over the full history; blocks
  // whose normal equations are rank deficient keep their previous values.
  {
    std::vector<Vec> d;
    Vec t;
    for (int s = 0; s < n; ++s) {
      const Vec& u = history.samples[s].u;
      d.push_back({(u[0] - 0.3) * (u[0] - 0.3), (u[1] - 0.3) * (u[1] - 0.3)});
      t.push_back(history.samples[s].cost);
    }
    Vec block = {theta_[0], theta_[1]};
    if (fit_block(d, t, block)) {
      theta_[0] = block[0];
      theta_[1] = block[1];
    }
  }
  if (problem.n_g >= 1) {
    std::vector<Vec> d;
    Vec t;
    for (int s = 0; s < n; ++s) {
      const Vec& u = history.samples[s].u;
      d.push_back({-u[0] * u[0]});
      t.push_back(history.samples[s].g[0] + 3.5 * u[0] - u[1] * u[1] + 0.6);
    }
    Vec block = {theta_[2]};
    if (fit_block(d, t, block)) theta_[2] = block[0];
  }
  if (problem.n_g >= 2) {
    std::vector<Vec> d;
    Vec t;
    for (int s = 0; s < n; ++s) {
      const Vec& u = history.samples[s].u;
      d.push_back({u[0], 1.0});
      t.push_back(history.samples[s].g[1] - u[1]);
    }
    Vec block = {theta_[3], theta_[4]};
    if (fit_block(d, t, block)) {
      theta_[3] = block[0];
      theta_[4] = block[1];
    }
  }

  Vec u = optimize_model(theta_, problem);
  check_in_box(u, problem, "twostep");
  return u;
}

Vec RandomStep::next(const History&, const Evaluation&, const ProblemSpec& problem) {
  Vec u(problem.n_u);
  for (int i = 0; i < problem.n_u; ++i)
    u[i] = rng_.uniform(problem.u_lower[i], problem.u_upper[i]);
  check_in_box(u, problem, "random");
  return u;
}

std::unique_ptr<TargetGenerator> make_algorithm(const std::string& id,
                                                const ProblemSpec& problem, uint64_t seed) {
  if (id == "fixed") {
    Vec target{-0.2, 0.7};
    if (!problem.in_box(target))
      throw std::invalid_argument("fixed: default target outside this plant's box");
    return std::make_unique<FixedTarget>(target);
  }
  if (id == "graddim") return std::make_unique<DiminishingGradient>();
  if (id == "conadapt") return std::make_unique<ConstraintAdaptation>();
  if (id == "twostep") return std::make_unique<TwoStep>();
  if (id == "random") return std::make_unique<RandomStep>(seed);
  throw std::invalid_argument("unknown algorithm id: " + id);
}

const std::vector<std::string>& algorithm_ids() {
  static const std::vector<std::string> ids = {"fixed", "graddim", "conadapt", "twostep",
                                               "random"};
  return ids;
}

}  // namespace scfo
