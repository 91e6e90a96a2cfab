#include "scfo/scenario.hpp"

#include <fstream>
#include <sstream>

namespace scfo {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_real(const std::string& s, const std::string& field, int line) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "scenario line " << line << ": field '" << field << "' has malformed number '" << s
       << "'";
    throw ScenarioError(os.str());
  }
}

Vec parse_vec(const std::string& s, const std::string& field, int line) {
  Vec out;
  for (const std::string& part : split(s, ',')) out.push_back(parse_real(part, field, line));
  return out;
}

uint64_t parse_uint(const std::string& s, const std::string& field, int line) {
  try {
    size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return static_cast<uint64_t>(v);
  } catch (const std::exception&) {
    std::ostringstream os;
    os << "scenario line " << line << ": field '" << field << "' has malformed integer '" << s
       << "'";
    throw ScenarioError(os.str());
  }
}

}  // namespace

Mode parse_mode(const std::string& s) {
  if (s == "none") return Mode::none;
  if (s == "feas" || s == "feasibility_only") return Mode::feasibility_only;
  if (s == "full") return Mode::full;
  throw ScenarioError("unknown mode '" + s + "' (expected none|feas|full)");
}

ScenarioFile parse_scenario_text(const std::string& text) {
  ScenarioFile sf;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool saw_version = false;
  while (std::getline(is, line)) {
    ++lineno;
    // Strip comments and whitespace-only lines.
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string word;
    if (!(ls >> word)) continue;

    if (word == "version") {
      std::string v;
      if (!(ls >> v))
        throw ScenarioError("scenario line " + std::to_string(lineno) + ": missing version");
      sf.version = static_cast<int>(parse_uint(v, "version", lineno));
      if (sf.version != 1)
        throw ScenarioError("scenario line " + std::to_string(lineno) +
                            ": unsupported version " + v);
      saw_version = true;
      continue;
    }
    if (word == "output") {
      if (!(ls >> sf.output_dir))
        throw ScenarioError("scenario line " + std::to_string(lineno) +
                            ": field 'output' missing value");
      continue;
    }
    if (word != "run")
      throw ScenarioError("scenario line " + std::to_string(lineno) + ": unknown directive '" +
                          word + "'");

    RunConfig rc;
    bool have_plant = false, have_algo = false, have_mode = false, have_u0 = false;
    std::optional<double> lo_override, hi_override;
    std::optional<Vec> eps_ov, delta_g_ov;
    std::optional<double> delta_phi_ov;
    std::string kv;
    while (ls >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw ScenarioError("scenario line " + std::to_string(lineno) +
                            ": expected key=value, got '" + kv + "'");
      std::string key = kv.substr(0, eq), val = kv.substr(eq + 1);
      if (key == "plant") {
        rc.plant_id = val;
        have_plant = true;
      } else if (key == "algorithm") {
        rc.algorithm_id = val;
        have_algo = true;
      } else if (key == "mode") {
        rc.mode = parse_mode(val);
        have_mode = true;
      } else if (key == "u0") {
        rc.u0 = parse_vec(val, key, lineno);
        have_u0 = true;
      } else if (key == "iterations") {
        rc.max_iterations = static_cast<int>(parse_uint(val, key, lineno));
      } else if (key == "seed") {
        rc.seed = parse_uint(val, key, lineno);
      } else if (key == "stall") {
        rc.stall_tolerance = parse_real(val, key, lineno);
      } else if (key == "stall_window") {
        rc.stall_window = static_cast<int>(parse_uint(val, key, lineno));
      } else if (key == "eps") {
        eps_ov = parse_vec(val, key, lineno);
      } else if (key == "delta_g") {
        delta_g_ov = parse_vec(val, key, lineno);
      } else if (key == "delta_phi") {
        delta_phi_ov = parse_real(val, key, lineno);
      } else if (key == "lo") {
        lo_override = parse_real(val, key, lineno);
      } else if (key == "hi") {
        hi_override = parse_real(val, key, lineno);
      } else {
        throw ScenarioError("scenario line " + std::to_string(lineno) + ": unknown field '" +
                            key + "'");
      }
    }
    if (!have_plant)
      throw ScenarioError("scenario line " + std::to_string(lineno) + ": field 'plant' missing");
    if (!have_algo)
      throw ScenarioError("scenario line " + std::to_string(lineno) +
                          ": field 'algorithm' missing");
    if (!have_mode)
      throw ScenarioError("scenario line " + std::to_string(lineno) + ": field 'mode' missing");
    if (!have_u0)
      throw ScenarioError("scenario line " + std::to_string(lineno) + ": field 'u0' missing");

    if (eps_ov || delta_g_ov || delta_phi_ov || lo_override || hi_override) {
      ProblemSpec problem = problem_by_id(rc.plant_id);  // may throw invalid_argument
      SCFOParams p = SCFOParams::defaults(problem, rc.mode);
      if (hi_override) {
        p.eps_hi.assign(problem.n_g, *hi_override);
        p.delta_g_hi.assign(problem.n_g, *hi_override);
        p.delta_phi_hi = *hi_override;
      }
      if (lo_override) {
        p.eps_lo.assign(problem.n_g, *lo_override);
        p.delta_g_lo.assign(problem.n_g, *lo_override);
        p.delta_phi_lo = *lo_override;
      }
      if (eps_ov) {
        if (static_cast<int>(eps_ov->size()) != problem.n_g)
          throw ScenarioError("scenario line " + std::to_string(lineno) +
                              ": field 'eps' needs one entry per constraint");
        p.eps = *eps_ov;
      }
      if (delta_g_ov) {
        if (static_cast<int>(delta_g_ov->size()) != problem.n_g)
          throw ScenarioError("scenario line " + std::to_string(lineno) +
                              ": field 'delta_g' needs one entry per constraint");
        p.delta_g = *delta_g_ov;
      }
      if (delta_phi_ov) p.delta_phi = *delta_phi_ov;
      rc.params = p;
    }
    sf.runs.push_back(std::move(rc));
  }
  (void)saw_version;
  return sf;
}

ScenarioFile parse_scenario_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ScenarioError("cannot open scenario file: " + path);
  std::ostringstream os;
  os << f.rdbuf();
  return parse_scenario_text(os.str());
}

}  // namespace scfo
