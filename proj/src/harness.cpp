#include "scfo/harness.hpp"

#include <atomic>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "scfo/csv.hpp"
#include "scfo/kkt.hpp"

namespace scfo {

std::optional<ReferencePoint> reference_optimum(const std::string& plant_id) {
  if (plant_id == "ex4") {
    // Constrained minimum on the second constraint, recomputed by 1-D
    // root finding on the stationarity equation restricted to its boundary.
    ReferencePoint rp;
    rp.rounded = Vec{0.35, 0.32};
    rp.precise = Vec{0.35344868844837552, 0.32342370504405859};
    return rp;
  }
  if (plant_id == "ex2") {
    // Closest feasible point to the canonical fixed target (-0.2, 0.7).
    ReferencePoint rp;
    rp.precise = Vec{-0.13442811510368100, 0.61471502431783099};
    return rp;
  }
  return std::nullopt;
}

std::optional<int> detect_stall(const std::vector<Iterate>& iterates, double tol, int window) {
  if (tol <= 0.0 || window <= 0) return std::nullopt;
  int consecutive = 0;
  for (size_t k = 1; k < iterates.size(); ++k) {
    double step = norm_inf(sub(iterates[k].u, iterates[k - 1].u));
    if (step < tol) {
      if (++consecutive >= window) return static_cast<int>(k);
    } else {
      consecutive = 0;
    }
  }
  return std::nullopt;
}

Trajectory run(const RunConfig& config) {
  ProblemSpec problem = problem_by_id(config.plant_id);
  if (config.max_iterations < 0)
    throw std::invalid_argument("run: max_iterations must be nonnegative");
  SCFOParams params =
      config.params ? *config.params : SCFOParams::defaults(problem, config.mode);
  params.mode = config.mode;
  params.validate(problem.n_g);

  auto algorithm = make_algorithm(config.algorithm_id, problem, config.seed);

  Trajectory traj;
  traj.config = config;
  traj.iterates.push_back(make_initial_iterate(problem, config.u0, params));

  History history;
  {
    const Iterate& it = traj.iterates.front();
    history.samples.push_back({it.u, it.cost_value, it.g_values});
  }

  const bool stall_applies = config.mode != Mode::full;
  int consecutive_small = 0;

  for (int k = 0; k < config.max_iterations; ++k) {
    const Iterate& cur = traj.iterates.back();
    Evaluation cur_eval{cur.cost_value, cur.g_values, cur.cost_gradient, cur.g_gradients};
    Vec target = algorithm->next(history, cur_eval, problem);
    Iterate next;
    try {
      next = scfo_step(problem, cur, params, target);
    } catch (const SafetyError& e) {
      std::ostringstream os;
      os << e.what() << " [plant " << config.plant_id << ", algorithm "
         << config.algorithm_id << ", mode " << mode_name(config.mode) << "]";
      throw SafetyError(os.str());
    }
    double step = norm_inf(sub(next.u, cur.u));
    traj.iterates.push_back(next);
    history.samples.push_back({next.u, next.cost_value, next.g_values});
    if (next.converged_flag) break;
    if (stall_applies && config.stall_tolerance > 0.0) {
      if (step < config.stall_tolerance) {
        if (++consecutive_small >= config.stall_window) break;
      } else {
        consecutive_small = 0;
      }
    }
  }

  traj.summary = metrics(traj, problem);
  return traj;
}

TrajectorySummary metrics(const Trajectory& traj, const ProblemSpec& problem) {
  TrajectorySummary s;
  const auto& its = traj.iterates;
  if (its.empty()) throw std::invalid_argument("metrics: empty trajectory");

  s.feasible_all = true;
  for (const Iterate& it : its)
    for (double g : it.g_values)
      if (!(g < 0.0)) s.feasible_all = false;

  s.monotone_cost = true;
  for (size_t k = 1; k < its.size(); ++k) {
    bool moved = norm_inf(sub(its[k].u, its[k - 1].u)) > 0.0;
    if (moved ? !(its[k].cost_value < its[k - 1].cost_value)
              : !(its[k].cost_value == its[k - 1].cost_value))
      s.monotone_cost = false;
  }

  for (size_t k = 0; k < its.size(); ++k)
    if (its[k].converged_flag) {
      s.converged_at = static_cast<int>(k);
      break;
    }
  s.stalled_at = detect_stall(its, traj.config.stall_tolerance, traj.config.stall_window);

  for (size_t k = 1; k < its.size(); ++k) {
    const Vec& base = its[k - 1].u;
    const Vec& tgt = its[k].projected_target ? *its[k].projected_target : its[k].raw_target;
    if (norm_inf(sub(tgt, base)) > 1e-12) {
      if (!s.min_gain || its[k].gain < *s.min_gain) s.min_gain = its[k].gain;
    }
  }

  s.final_u = its.back().u;
  s.final_cost = its.back().cost_value;
  s.final_kkt_error = kkt_error(problem, s.final_u).error;
  if (auto ref = reference_optimum(problem.id))
    s.distance_to_reference = norm2(sub(s.final_u, ref->precise));
  return s;
}

std::vector<SweepCase> sweep_grid(const std::string& plant_id,
                                  const std::vector<std::string>& algorithms,
                                  const std::vector<Mode>& modes, int iterations,
                                  uint64_t seed) {
  const std::vector<std::pair<std::string, Vec>> starts = {{"a", {-0.5, 0.05}},
                                                           {"b", {0.0, 0.4}}};
  std::vector<SweepCase> cases;
  for (const std::string& alg : algorithms)
    for (Mode mode : modes)
      for (const auto& [tag, u0] : starts) {
        SweepCase c;
        c.config.plant_id = plant_id;
        c.config.algorithm_id = alg;
        c.config.mode = mode;
        c.config.u0 = u0;
        c.config.max_iterations = iterations;
        c.config.seed = seed;
        c.filename = plant_id + "_" + alg + "_" + mode_name(mode) + "_" + tag + ".csv";
        cases.push_back(std::move(c));
      }
  return cases;
}

void execute_runs(const std::vector<SweepCase>& cases, const std::string& out_dir, int jobs) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  jobs = std::max(1, jobs);
  std::atomic<size_t> next{0};
  std::vector<std::string> errors(cases.size());
  auto worker = [&]() {
    while (true) {
      size_t i = next.fetch_add(1);
      if (i >= cases.size()) break;
      try {
        Trajectory traj = run(cases[i].config);
        write_trajectory_csv(traj, (fs::path(out_dir) / cases[i].filename).string());
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  for (size_t i = 0; i < cases.size(); ++i)
    if (!errors[i].empty())
      throw std::runtime_error("run '" + cases[i].filename + "' failed: " + errors[i]);
}

}  // namespace scfo
