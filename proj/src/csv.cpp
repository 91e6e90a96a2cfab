#include "scfo/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scfo {

std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  const int n_u = traj.iterates.empty() ? 0 : static_cast<int>(traj.iterates[0].u.size());
  const int n_g = traj.iterates.empty() ? 0 : static_cast<int>(traj.iterates[0].g_values.size());
  os << "k";
  for (int i = 1; i <= n_u; ++i) os << ",u_" << i;
  os << ",cost";
  for (int j = 1; j <= n_g; ++j) os << ",g_" << j;
  os << ",gain,eps_min,delta_g_min,delta_phi,projected,converged\n";
  for (const Iterate& it : traj.iterates) {
    os << it.k;
    for (double u : it.u) os << ',' << format_double(u);
    os << ',' << format_double(it.cost_value);
    for (double g : it.g_values) os << ',' << format_double(g);
    os << ',' << format_double(it.gain);
    os << ',' << format_double(it.params_used.eps_min());
    os << ',' << format_double(it.params_used.delta_g_min());
    os << ',' << format_double(it.params_used.delta_phi);
    os << ',' << (it.projected_target ? 1 : 0);
    os << ',' << (it.converged_flag ? 1 : 0);
    os << '\n';
  }
  return os.str();
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << trajectory_csv(traj);
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace scfo
