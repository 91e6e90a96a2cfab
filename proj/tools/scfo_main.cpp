#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "scfo/csv.hpp"
#include "scfo/filter.hpp"
#include "scfo/harness.hpp"
#include "scfo/kkt.hpp"
#include "scfo/scenario.hpp"
#include "scfo/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitSafety = 2;

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

std::optional<uint64_t> seed_override() {
  const char* env = std::getenv("SCFO_SEED");
  if (!env || !*env) return std::nullopt;
  try {
    return static_cast<uint64_t>(std::stoull(env));
  } catch (const std::exception&) {
    throw scfo::ScenarioError(std::string("SCFO_SEED is not an integer: ") + env);
  }
}

scfo::Vec parse_point(const std::string& s) {
  scfo::Vec out;
  for (const std::string& part : split_list(s)) out.push_back(std::stod(part));
  return out;
}

int cmd_run(const std::string& scenario_path, const std::string& out_override, int jobs) {
  scfo::ScenarioFile sf = scfo::parse_scenario_file(scenario_path);
  if (sf.runs.empty()) throw scfo::ScenarioError("scenario contains no runs");
  std::string out_dir = !out_override.empty() ? out_override
                        : !sf.output_dir.empty() ? sf.output_dir
                                                 : std::string("runs");
  if (auto seed = seed_override())
    for (auto& rc : sf.runs) rc.seed = *seed;

  std::vector<scfo::SweepCase> cases;
  for (size_t i = 0; i < sf.runs.size(); ++i) {
    std::ostringstream name;
    name << "run_" << i << "_" << sf.runs[i].plant_id << "_" << sf.runs[i].algorithm_id << "_"
         << scfo::mode_name(sf.runs[i].mode) << ".csv";
    cases.push_back({sf.runs[i], name.str()});
  }
  scfo::execute_runs(cases, out_dir, jobs);
  std::cout << "wrote " << cases.size() << " trajectories to " << out_dir << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& plant, const std::string& algorithms, const std::string& modes,
              int iterations, uint64_t seed, const std::string& out_dir, int jobs) {
  std::vector<std::string> algs;
  if (algorithms == "all")
    algs = scfo::algorithm_ids();
  else
    algs = split_list(algorithms);
  for (const std::string& a : algs) scfo::make_algorithm(a, scfo::problem_by_id(plant), 0);

  std::vector<scfo::Mode> mode_list;
  for (const std::string& m : split_list(modes)) mode_list.push_back(scfo::parse_mode(m));
  if (mode_list.empty()) throw scfo::ScenarioError("field 'modes' is empty");

  if (auto env_seed = seed_override()) seed = *env_seed;

  auto cases = scfo::sweep_grid(plant, algs, mode_list, iterations, seed);
  scfo::execute_runs(cases, out_dir, jobs);
  std::cout << "wrote " << cases.size() << " trajectories to " << out_dir << "\n";
  return kExitOk;
}

int cmd_kkt(const std::string& plant, const std::string& point) {
  scfo::ProblemSpec problem = scfo::problem_by_id(plant);
  scfo::Vec u = parse_point(point);
  scfo::KKTReport rep = scfo::kkt_error(problem, u);
  std::cout << "kkt_error " << scfo::format_double(rep.error) << "\n";
  std::cout << "stationarity_sq " << scfo::format_double(rep.stationarity_norm_sq) << "\n";
  std::cout << "slackness_sq " << scfo::format_double(rep.slackness_sq) << "\n";
  std::cout << "multipliers";
  for (double m : rep.multipliers) std::cout << ' ' << scfo::format_double(m);
  std::cout << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "scfo: a safeguarding filter for iterative real-time optimization.\n"
      "Wraps any target-proposing algorithm so that hard constraints hold at\n"
      "every applied iterate and, in full mode, the cost decreases until the\n"
      "run converges near a first-order optimal point."};
  app.require_subcommand(1);

  std::string scenario_path, out_dir;
  int jobs = 1;
  auto* run_cmd = app.add_subcommand("run", "Execute the runs listed in a scenario file");
  run_cmd->add_option("--scenario", scenario_path, "Scenario file path")->required();
  run_cmd->add_option("--out", out_dir, "Output directory (overrides the scenario)");
  run_cmd->add_option("--jobs", jobs, "Concurrent runs")->default_val(1);

  std::string plant, algorithms = "all", modes = "none,feas,full", sweep_out = "sweep_out";
  int iterations = 1000;
  uint64_t seed = 0;
  int sweep_jobs = 1;
  auto* sweep_cmd =
      app.add_subcommand("sweep", "Run the standard algorithm x mode x start grid for a plant");
  sweep_cmd->add_option("--plant", plant, "Plant id (ex2|ex4)")->required();
  sweep_cmd->add_option("--algorithms", algorithms, "Comma list or 'all'")->capture_default_str();
  sweep_cmd->add_option("--modes", modes, "Comma list of none|feas|full")->capture_default_str();
  sweep_cmd->add_option("--iterations", iterations, "Iteration budget per run")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", seed, "Seed for seeded algorithms")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->capture_default_str();
  sweep_cmd->add_option("--jobs", sweep_jobs, "Concurrent runs")->default_val(1);

  std::string kkt_plant, kkt_point;
  auto* kkt_cmd = app.add_subcommand("kkt", "Print the first-order optimality error at a point");
  kkt_cmd->add_option("--plant", kkt_plant, "Plant id")->required();
  kkt_cmd->add_option("--point", kkt_point, "Comma-separated input, e.g. 0.35,0.32")->required();

  auto* verify_cmd = app.add_subcommand("verify", "Run the library invariant suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(scenario_path, out_dir, jobs);
    if (sweep_cmd->parsed())
      return cmd_sweep(plant, algorithms, modes, iterations, seed, sweep_out, sweep_jobs);
    if (kkt_cmd->parsed()) return cmd_kkt(kkt_plant, kkt_point);
    if (verify_cmd->parsed()) return scfo::run_verification(std::cout) ? kExitOk : kExitValidation;
  } catch (const scfo::SafetyError& e) {
    std::cerr << "safety error: " << e.what() << "\n";
    return kExitSafety;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  }
  return kExitValidation;
}
