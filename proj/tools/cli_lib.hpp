#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "hnc/executor.hpp"

namespace hnc::cli {

// Scenario JSON: {"dim", "radii", "initial", "goal"} plus optional
// {"goal_tree", "alpha", "beta", "dt", "t_max", "goal_tol", "perturb_seed"}.
// Positions are arrays of d-vectors; labels are 1-based by array order.
// Unknown or ill-shaped fields raise ParseError naming the field.
Scenario load_scenario(const std::filesystem::path& file);
Scenario parse_scenario(const std::string& text);

std::string format_double(double v);  // shortest round-trip decimal

// Writers for the run outputs.
void write_trajectory_header(std::ostream& os, int n, int d);
void write_trajectory_row(std::ostream& os, double t,
                          std::span<const double> positions);
void write_event(std::ostream& os, const TraceEvent& ev, int dim);
void write_stats(std::ostream& os, const RunStats& stats);

struct RunPaths {
  std::filesystem::path traj, events, stats;
};

// Executes one scenario and writes the three outputs; returns the process
// exit code (0 goal, 2 stall, 3 timeout).
int run_to_files(const Scenario& scenario, const RunPaths& paths, int stride);

}  // namespace hnc::cli
