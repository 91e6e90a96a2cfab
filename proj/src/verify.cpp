#include "scfo/verify.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "scfo/algorithms.hpp"
#include "scfo/csv.hpp"
#include "scfo/filter.hpp"
#include "scfo/harness.hpp"
#include "scfo/kkt.hpp"
#include "scfo/smallsolve.hpp"

namespace scfo {

namespace {

struct Check {
  std::ostream& log;
  bool all_ok = true;

  void report(const std::string& name, bool ok, const std::string& detail = "") {
    log << (ok ? "[ok]   " : "[FAIL] ") << name;
    if (!detail.empty()) log << " (" << detail << ")";
    log << "\n";
    all_ok = all_ok && ok;
  }
};

double gauss(SplitMix64& rng) {
  // Box-Muller on the counter-based generator keeps the suites deterministic.
  double u1 = std::max(rng.uniform(), 1e-300);
  double u2 = rng.uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
}

// Random quadratic f(u) = 0.5 u^T H u + c^T u over a box, with entrywise
// Hessian limits available by construction.
struct RandomQuadratic {
  Mat H;
  Vec c;
  Vec lo, hi;

  double value(const Vec& u) const {
    double s = dot(c, u);
    for (int i = 0; i < H.rows; ++i)
      for (int j = 0; j < H.cols; ++j) s += 0.5 * H(i, j) * u[i] * u[j];
    return s;
  }
  Vec grad(const Vec& u) const {
    Vec g = c;
    for (int i = 0; i < H.rows; ++i)
      for (int j = 0; j < H.cols; ++j) g[i] += H(i, j) * u[j];
    return g;
  }
  Vec sample(SplitMix64& rng) const {
    Vec u(lo.size());
    for (size_t i = 0; i < u.size(); ++i) u[i] = rng.uniform(lo[i], hi[i]);
    return u;
  }
};

RandomQuadratic random_quadratic(SplitMix64& rng, int n) {
  RandomQuadratic q;
  q.H = Mat(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j <= i; ++j) {
      double v = 2.0 * gauss(rng);
      q.H(i, j) = v;
      q.H(j, i) = v;
    }
  q.c.resize(n);
  for (int i = 0; i < n; ++i) q.c[i] = gauss(rng);
  q.lo.assign(n, -1.0);
  q.hi.assign(n, 1.0);
  return q;
}

// Per-coordinate derivative bound of a quadratic over its box.
Vec derivative_bounds(const RandomQuadratic& q) {
  Vec b(q.c.size());
  for (size_t i = 0; i < b.size(); ++i) {
    double s = std::abs(q.c[i]);
    for (size_t j = 0; j < b.size(); ++j)
      s += std::abs(q.H(static_cast<int>(i), static_cast<int>(j))) *
           std::max(std::abs(q.lo[j]), std::abs(q.hi[j]));
    b[i] = s;
  }
  return b;
}

bool plant_gradient_check(const ProblemSpec& p, SplitMix64& rng) {
  const double h = 1e-6;
  for (int trial = 0; trial < 100; ++trial) {
    Vec u(p.n_u);
    for (int i = 0; i < p.n_u; ++i) {
      double margin = 0.05 * (p.u_upper[i] - p.u_lower[i]);
      u[i] = rng.uniform(p.u_lower[i] + margin, p.u_upper[i] - margin);
    }
    auto fd_check = [&](const std::function<double(const Vec&)>& f, const Vec& g) {
      for (int i = 0; i < p.n_u; ++i) {
        Vec up = u, dn = u;
        up[i] += h;
        dn[i] -= h;
        double fd = (f(up) - f(dn)) / (2.0 * h);
        double denom = std::max(1.0, std::abs(g[i]));
        if (std::abs(fd - g[i]) / denom > 1e-6) return false;
      }
      return true;
    };
    if (!fd_check(p.cost, p.cost_grad(u))) return false;
    for (int j = 0; j < p.n_g; ++j)
      if (!fd_check(p.constraints[j], p.constraint_grads[j](u))) return false;
  }
  return true;
}

bool gale_certificate_valid(const HalfspaceSystem& sys, const Vec& nu) {
  const int M = sys.augmented_rows();
  if (static_cast<int>(nu.size()) != M) return false;
  double comb_b = 0.0;
  Vec comb_a(sys.n(), 0.0);
  double mx = 0.0;
  for (int r = 0; r < M; ++r) {
    if (nu[r] < 0.0) return false;
    mx = std::max(mx, nu[r]);
    Vec a = sys.augmented_row(r);
    for (int i = 0; i < sys.n(); ++i) comb_a[i] += nu[r] * a[i];
    comb_b += nu[r] * sys.augmented_rhs(r);
  }
  if (mx <= 0.0) return false;
  return norm_inf(comb_a) <= 1e-7 && comb_b <= -1e-9;
}

// Exact feasibility oracle: a nonempty box-bounded polyhedron has a feasible
// vertex, so enumerate every n-subset of the augmented rows.
struct VertexOracle {
  bool feasible = false;
  double best_violation = std::numeric_limits<double>::infinity();
  Vec centroid;  // of feasible vertices
  int feasible_count = 0;
};

VertexOracle vertex_oracle(const HalfspaceSystem& sys) {
  VertexOracle out;
  const int n = sys.n();
  const int M = sys.augmented_rows();
  std::vector<int> idx(n);
  for (int i = 0; i < n; ++i) idx[i] = i;
  out.centroid.assign(n, 0.0);
  auto advance = [&]() -> bool {
    int i = n - 1;
    while (i >= 0 && idx[i] == M - n + i) --i;
    if (i < 0) return false;
    ++idx[i];
    for (int j = i + 1; j < n; ++j) idx[j] = idx[j - 1] + 1;
    return true;
  };
  do {
    Mat S(n, n);
    Vec rhs(n);
    for (int r = 0; r < n; ++r) {
      Vec a = sys.augmented_row(idx[r]);
      for (int c = 0; c < n; ++c) S(r, c) = a[c];
      rhs[r] = sys.augmented_rhs(idx[r]);
    }
    bool singular = false;
    for (int k = 0; k < n && !singular; ++k) {
      int piv = k;
      for (int r = k + 1; r < n; ++r)
        if (std::abs(S(r, k)) > std::abs(S(piv, k))) piv = r;
      if (std::abs(S(piv, k)) < 1e-11) {
        singular = true;
        break;
      }
      if (piv != k) {
        for (int c = 0; c < n; ++c) std::swap(S(piv, c), S(k, c));
        std::swap(rhs[piv], rhs[k]);
      }
      for (int r = k + 1; r < n; ++r) {
        double f = S(r, k) / S(k, k);
        for (int c = k; c < n; ++c) S(r, c) -= f * S(k, c);
        rhs[r] -= f * rhs[k];
      }
    }
    if (singular) continue;
    Vec v(n);
    for (int k = n - 1; k >= 0; --k) {
      double s = rhs[k];
      for (int c = k + 1; c < n; ++c) s -= S(k, c) * v[c];
      v[k] = s / S(k, k);
    }
    double viol = sys.max_violation(v);
    out.best_violation = std::min(out.best_violation, viol);
    if (viol <= 1e-9) {
      out.feasible = true;
      ++out.feasible_count;
      for (int i = 0; i < n; ++i) out.centroid[i] += v[i];
    }
  } while (advance());
  if (out.feasible_count > 0)
    for (double& c : out.centroid) c /= out.feasible_count;
  return out;
}

HalfspaceSystem random_system(SplitMix64& rng, int n) {
  HalfspaceSystem sys;
  sys.box_lower.assign(n, -1.0);
  sys.box_upper.assign(n, 1.0);
  int m = 1 + static_cast<int>(rng.next() % 4);
  sys.A = Mat(m, n);
  sys.b.assign(m, 0.0);
  for (int r = 0; r < m; ++r) {
    double nrm = 0.0;
    for (int c = 0; c < n; ++c) {
      sys.A(r, c) = gauss(rng);
      nrm += sys.A(r, c) * sys.A(r, c);
    }
    nrm = std::sqrt(std::max(nrm, 1e-12));
    for (int c = 0; c < n; ++c) sys.A(r, c) /= nrm;
    sys.b[r] = rng.uniform(-0.9, 0.5);
  }
  return sys;
}

}  // namespace

bool run_verification(std::ostream& log) {
  Check chk{log};

  // Plant gradients against central differences.
  {
    SplitMix64 rng(101);
    bool ok = plant_gradient_check(make_ex2(), rng) && plant_gradient_check(make_ex4(), rng);
    chk.report("plant gradients match finite differences", ok);
  }

  // Strict Lipschitz constants: no sampled slope reaches its constant.
  {
    double s2 = strictness_degree(make_ex2(), 1e-3);
    double s4 = strictness_degree(make_ex4(), 1e-3);
    std::ostringstream os;
    os << "max ratios " << s2 << ", " << s4;
    chk.report("lipschitz constants strictly dominate sampled slopes", s2 < 1.0 && s4 < 1.0,
               os.str());
  }

  // Evaluation is pure: repeated calls agree bitwise.
  {
    ProblemSpec p = make_ex4();
    Vec u{0.123, 0.456};
    Evaluation a = evaluate(p, u), b = evaluate(p, u);
    bool ok = a.cost == b.cost && a.g == b.g && a.cost_gradient == b.cost_gradient;
    chk.report("evaluation is deterministic", ok);
  }

  // Linear evolution bound on random quadratics with strict constants.
  {
    SplitMix64 rng(202);
    bool ok = true;
    int trials = 0;
    while (trials < 10000 && ok) {
      RandomQuadratic q = random_quadratic(rng, 2 + static_cast<int>(rng.next() % 2));
      Vec bounds = derivative_bounds(q);
      Vec kappa(bounds.size());
      for (size_t i = 0; i < bounds.size(); ++i) kappa[i] = 1.1 * bounds[i] + 0.01;
      for (int rep = 0; rep < 50 && ok; ++rep, ++trials) {
        Vec a = q.sample(rng), b = q.sample(rng);
        if (norm_inf(sub(a, b)) == 0.0) continue;
        double lhs = q.value(b) - q.value(a);
        ok = lhs < linear_growth_bound(kappa, a, b);
      }
    }
    chk.report("linear growth bound sound over random quadratics", ok);
  }

  // Quadratic evolution bound with entrywise Hessian limits.
  {
    SplitMix64 rng(303);
    bool ok = true;
    int trials = 0;
    while (trials < 10000 && ok) {
      RandomQuadratic q = random_quadratic(rng, 2 + static_cast<int>(rng.next() % 2));
      const int n = static_cast<int>(q.c.size());
      Mat M(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = 1.1 * std::abs(q.H(i, j)) + 0.01;
      QuadBound qb = qbound_from_hessian_limits(M);
      for (int rep = 0; rep < 50 && ok; ++rep, ++trials) {
        Vec a = q.sample(rng), b = q.sample(rng);
        double lhs = q.value(b) - q.value(a);
        ok = lhs <= quadratic_growth_bound(q.grad(a), qb, a, b) + 1e-12;
      }
    }
    chk.report("quadratic growth bound sound over random quadratics", ok);
  }

  // Guaranteed descent: any gain strictly inside the interval decreases f.
  {
    SplitMix64 rng(404);
    bool ok = true;
    for (int inst = 0; inst < 100 && ok; ++inst) {
      RandomQuadratic q = random_quadratic(rng, 2);
      const int n = 2;
      Mat M(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) M(i, j) = 1.1 * std::abs(q.H(i, j)) + 0.01;
      QuadBound qb = qbound_from_hessian_limits(M);
      Vec a = q.sample(rng);
      Vec b;
      double slope = 0.0;
      do {
        b = q.sample(rng);
        slope = dot(q.grad(a), sub(b, a));
      } while (!(slope < -1e-6));
      double upper = descent_gain_upper(q.grad(a), qb, a, b);
      for (int s = 1; s <= 100 && ok; ++s) {
        double K = upper * s / 101.0;
        Vec u = axpy(K, sub(b, a), a);
        ok = q.value(u) < q.value(a);
      }
    }
    chk.report("descent gain interval always decreases the function", ok);
  }

  // Projection/feasibility duality against the exact vertex oracle.
  {
    SplitMix64 rng(505);
    bool ok = true;
    std::string detail;
    for (int inst = 0; inst < 1000 && ok; ++inst) {
      int n = 2 + static_cast<int>(rng.next() % 2);
      HalfspaceSystem sys = random_system(rng, n);
      SolveReport rep = lp_feasible(sys);
      VertexOracle oracle = vertex_oracle(sys);
      if (rep.status == SolveStatus::feasible) {
        if (sys.max_violation(*rep.point) > 1e-9) {
          ok = false;
          detail = "reported point violates the system";
        } else if (!oracle.feasible && oracle.best_violation > 1e-2) {
          ok = false;
          detail = "solver feasible but oracle clearly infeasible";
        }
      } else if (rep.status == SolveStatus::infeasible) {
        if (!rep.certificate || !gale_certificate_valid(sys, *rep.certificate)) {
          ok = false;
          detail = "missing or invalid infeasibility certificate";
        } else if (oracle.feasible && sys.max_violation(oracle.centroid) < -1e-2) {
          ok = false;
          detail = "solver infeasible but oracle found interior point";
        }
      } else {
        ok = false;
        detail = "solver degenerate on a random instance";
      }
    }
    chk.report("feasibility probe agrees with vertex oracle and emits valid certificates", ok,
               detail);
  }

  // Recursive feasibility under the gain rule alone.
  {
    bool ok = true;
    for (const char* pid : {"ex2", "ex4"}) {
      ProblemSpec p = problem_by_id(pid);
      SCFOParams params = SCFOParams::defaults(p, Mode::none);
      std::vector<Vec> starts = {{-0.4, 0.1}, {0.0, 0.4}, {-0.5, 0.05}, {0.3, 0.1}, {0.45, 0.0}};
      uint64_t seed = 11;
      for (const Vec& u0 : starts) {
        RandomStep rnd(seed++);
        History hist;
        Iterate it = make_initial_iterate(p, u0, params);
        hist.samples.push_back({it.u, it.cost_value, it.g_values});
        for (int k = 0; k < 1000 && ok; ++k) {
          Evaluation ev{it.cost_value, it.g_values, it.cost_gradient, it.g_gradients};
          Vec target = rnd.next(hist, ev, p);
          it = scfo_step(p, it, params, target);
          hist.samples.push_back({it.u, it.cost_value, it.g_values});
          for (double g : it.g_values) ok = ok && g < 0.0;
        }
      }
    }
    chk.report("gain rule preserves strict feasibility under random targets", ok);
  }

  // Projected targets satisfy every assembled row.
  {
    bool ok = true;
    RunConfig rc;
    rc.plant_id = "ex4";
    rc.algorithm_id = "random";
    rc.mode = Mode::full;
    rc.u0 = {0.0, 0.4};
    rc.max_iterations = 300;
    rc.seed = 7;
    Trajectory traj = run(rc);
    for (size_t k = 1; k < traj.iterates.size() && ok; ++k) {
      const Iterate& prev = traj.iterates[k - 1];
      const Iterate& cur = traj.iterates[k];
      if (!cur.projected_target || cur.converged_flag) continue;
      if (norm_inf(sub(*cur.projected_target, prev.u)) <= 1e-12) continue;
      ProblemSpec p = problem_by_id(rc.plant_id);
      Evaluation ev{prev.cost_value, prev.g_values, prev.cost_gradient, prev.g_gradients};
      HalfspaceSystem sys = descent_cone_system(p, prev.u, ev, cur.params_used);
      ok = sys.max_violation(*cur.projected_target) <= 1e-8;
    }
    chk.report("projected targets satisfy the descent-cone rows", ok);
  }

  // Declared convergence leaves an infeasible cone at the final brackets.
  {
    RunConfig rc;
    rc.plant_id = "ex4";
    rc.algorithm_id = "fixed";
    rc.mode = Mode::full;
    rc.u0 = {0.0, 0.4};
    rc.max_iterations = 1000;
    Trajectory traj = run(rc);
    bool ok = traj.summary.converged_at.has_value();
    if (ok) {
      const Iterate& fin = traj.iterates.back();
      ProblemSpec p = problem_by_id(rc.plant_id);
      Evaluation ev{fin.cost_value, fin.g_values, fin.cost_gradient, fin.g_gradients};
      HalfspaceSystem sys = descent_cone_system(p, fin.u, ev, fin.params_used);
      ok = lp_feasible(sys).status == SolveStatus::infeasible;
    }
    chk.report("declared convergence implies an empty cone at the final brackets", ok);
  }

  // Deterministic replay: identical configs give identical CSV bytes.
  {
    RunConfig rc;
    rc.plant_id = "ex4";
    rc.algorithm_id = "random";
    rc.mode = Mode::full;
    rc.u0 = {-0.5, 0.05};
    rc.max_iterations = 200;
    rc.seed = 99;
    std::string a = trajectory_csv(run(rc));
    std::string b = trajectory_csv(run(rc));
    chk.report("replayed runs are bit-identical", a == b);
  }

  // Generators stay inside the box and the model fit is exact on clean data.
  {
    bool ok = true;
    ProblemSpec p4 = make_ex4();
    for (const std::string& id : algorithm_ids()) {
      auto alg = make_algorithm(id, p4, 5);
      History hist;
      Iterate it = make_initial_iterate(p4, Vec{0.0, 0.4}, SCFOParams::defaults(p4, Mode::none));
      hist.samples.push_back({it.u, it.cost_value, it.g_values});
      for (int k = 0; k < 50 && ok; ++k) {
        Evaluation ev{it.cost_value, it.g_values, it.cost_gradient, it.g_gradients};
        Vec t = alg->next(hist, ev, p4);
        ok = p4.in_box(t);
        it = scfo_step(p4, it, SCFOParams::defaults(p4, Mode::none), t);
        hist.samples.push_back({it.u, it.cost_value, it.g_values});
      }
    }
    chk.report("every generator keeps targets inside the box", ok);
  }

  return chk.all_ok;
}

}  // namespace scfo
