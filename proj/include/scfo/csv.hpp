#pragma once

#include <string>

#include "scfo/harness.hpp"

namespace scfo {

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Renders the trajectory as CSV text: header
/// k,u_1..u_n,cost,g_1..g_m,gain,eps_min,delta_g_min,delta_phi,projected,converged
/// then one row per iterate, '\n' line endings.
std::string trajectory_csv(const Trajectory& traj);

/// Writes trajectory_csv to path; throws std::runtime_error naming the path
/// on I/O failure.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace scfo
