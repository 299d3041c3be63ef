// SPDX-License-Identifier: Apache-2.0
// Copyright (C) 2026 the cfran authors

#pragma once

#include <string>

#include "cfran/milp.hpp"

namespace cfran {

// Solver selection. The built-in path runs branch-and-bound on the placement
// binaries over the bounded-variable primal simplex: most-fractional
// branching, best-first node order, LP-rounding dives for incumbents and an
// absolute optimality gap target. The external path exports the model in LP
// format, runs a user-supplied command and parses its solution file.
struct SolverConfig {
  enum class Kind { kBuiltin, kExternal };
  Kind kind = Kind::kBuiltin;
  double time_limit_s = 300.0;
  long node_limit = 400;
  double abs_gap = 1e-6;
  std::string command;   // external: placeholders {lp} and {sol}
  std::string work_dir;  // external: scratch directory for the two files
};

MilpSolution solve_milp(const MilpModel& model, const SolverConfig& config);

// Parses an external solver's solution file. Two formats are accepted: plain
// "name value" lines (with optional "status ..." / "objective ..." lines and
// '#' comments) and the CPLEX-style XML <variable name=... value=.../> file.
MilpSolution parse_solution_file(const MilpModel& model,
                                 const std::string& text);

}  // namespace cfran
