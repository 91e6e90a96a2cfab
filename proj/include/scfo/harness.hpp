#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "scfo/algorithms.hpp"
#include "scfo/filter.hpp"
#include "scfo/problem.hpp"

namespace scfo {

/// One scenario: plant x algorithm x filter mode x initial point.
struct RunConfig {
  std::string plant_id;
  std::string algorithm_id;
  Mode mode = Mode::none;
  Vec u0;
  int max_iterations = 1000;
  uint64_t seed = 0;
  std::optional<SCFOParams> params;  // overrides the per-mode defaults
  /// Step-norm threshold for declaring a stall in modes none and
  /// feasibility_only (full mode terminates through declared convergence
  /// instead). Non-positive disables stall detection.
  double stall_tolerance = 1e-9;
  int stall_window = 20;
};

struct TrajectorySummary {
  bool feasible_all = false;
  bool monotone_cost = false;
  std::optional<int> converged_at;
  std::optional<int> stalled_at;
  Vec final_u;
  double final_cost = 0.0;
  double final_kkt_error = 0.0;
  std::optional<double> min_gain;
  std::optional<double> distance_to_reference;
};

struct Trajectory {
  RunConfig config;
  std::vector<Iterate> iterates;
  TrajectorySummary summary;
};

/// Known best point of a shipped plant: the value printed in the problem
/// write-up (rounded) next to the value recomputed to full precision.
struct ReferencePoint {
  std::optional<Vec> rounded;
  Vec precise;
};

std::optional<ReferencePoint> reference_optimum(const std::string& plant_id);

/// Runs the filtered loop until convergence, a stall, or max_iterations.
/// Validates the config first (strictly feasible u0, known ids); throws
/// std::invalid_argument on a bad config and SafetyError (with the offending
/// iteration in the message) if a constraint invariant breaks mid-run.
Trajectory run(const RunConfig& config);

/// Recomputes every summary field from the iterate list.
TrajectorySummary metrics(const Trajectory& traj, const ProblemSpec& problem);

/// First index at which `window` consecutive steps stayed below tol, if any.
std::optional<int> detect_stall(const std::vector<Iterate>& iterates, double tol, int window);

struct SweepCase {
  RunConfig config;
  std::string filename;
};

/// The canonical scenario grid for a plant: every requested algorithm and
/// mode from each of the two standard initial points (-0.5, 0.05) and
/// (0, 0.4). Filenames are <plant>_<algorithm>_<mode>_<a|b>.csv.
std::vector<SweepCase> sweep_grid(const std::string& plant_id,
                                  const std::vector<std::string>& algorithms,
                                  const std::vector<Mode>& modes, int iterations,
                                  uint64_t seed);

/// Runs every case and writes one CSV per case into out_dir (created when
/// missing), with up to `jobs` cases in flight. Output bytes do not depend
/// on the job count.
void execute_runs(const std::vector<SweepCase>& cases, const std::string& out_dir, int jobs);

}  // namespace scfo
