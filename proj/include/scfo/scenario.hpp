#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "scfo/harness.hpp"

namespace scfo {

/// Scenario parse/validation failure; the message names the offending field.
struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A parsed scenario file: format version, output directory, run list.
///
/// Line-oriented text format, one directive per line ('#' comments allowed):
///   version 1
///   output <dir>
///   run plant=<id> algorithm=<id> mode=<none|feas|full> u0=<x,y>
///       [iterations=N] [seed=N] [stall=T] [stall_window=N]
///       [eps=a,b,..] [delta_g=a,b,..] [delta_phi=x] [lo=x] [hi=x]
struct ScenarioFile {
  int version = 1;
  std::string output_dir;
  std::vector<RunConfig> runs;
};

ScenarioFile parse_scenario_text(const std::string& text);
ScenarioFile parse_scenario_file(const std::string& path);

Mode parse_mode(const std::string& s);  // accepts none|feas|feasibility_only|full

}  // namespace scfo
