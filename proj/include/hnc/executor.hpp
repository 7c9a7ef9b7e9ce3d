#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hnc/configuration.hpp"
#include "hnc/field.hpp"
#include "hnc/hierarchy.hpp"

namespace hnc {

struct Scenario {
  int dim = 2;
  std::vector<double> radii;
  std::vector<double> initial;  // row-major n x d
  std::vector<double> goal;     // row-major n x d
  std::optional<std::string> goal_tree;  // Newick; default hc_2means(goal)
  double alpha = 0.2;
  double beta = 1.0;
  double dt = 5e-3;
  double t_max = 200.0;
  std::optional<double> goal_tol;  // default 1e-3 * diameter(goal)
  std::optional<std::uint64_t> perturb_seed;
};

Configuration initial_config(const Scenario& s);
Configuration goal_config(const Scenario& s);

enum class EventKind {
  kStart,
  kTreeTransition,
  kEnteredGoalStratum,
  kGoalReached,
  kStall,
  kStep,
};
const char* to_string(EventKind kind);

struct TraceEvent {
  double t = 0.0;
  EventKind kind = EventKind::kStart;
  std::string from_tree;  // Newick; empty when absent
  std::string to_tree;
  std::vector<double> local_goal;  // row-major; empty when absent
};

enum class RunOutcome { kGoalReached, kStall, kTimeout };

struct RunStats {
  int deployed_trees = 0;
  int transitions = 0;
  double min_clearance = 0.0;
  double final_error = 0.0;
  long steps = 0;
  double wall_ms = 0.0;
};

struct RunResult {
  RunOutcome outcome = RunOutcome::kGoalReached;
  RunStats stats;
  std::vector<TraceEvent> events;
};

// Receives one row per emitted integration step.
class TrajectorySink {
 public:
  virtual ~TrajectorySink() = default;
  virtual void row(double t, std::span<const double> positions) = 0;
};

// One classical RK4 step of the active stratum field with post-step
// invariant checks (closed-stratum margin and pairwise separation); a
// violated check raises IntegrationError.
std::vector<double> rk4_step(const FieldEvaluator& field,
                             const std::vector<double>& positions, double dt);

// Hybrid automaton state: mode GOAL_STRATUM iff tree equals the goal
// tree; local_goal is y in the base case, a portal target in transit.
struct HybridState {
  double t = 0.0;
  Configuration config;
  BinaryHierarchy tree;
  Configuration local_goal;
  double alpha = 0.2;
  double beta = 1.0;
};

HybridState step(const HybridState& state, double dt);

// Table-driven hybrid loop: stratum navigation toward portals, NNI
// transitions, then convergence in the goal stratum.
RunResult run_hnc(const Scenario& scenario, TrajectorySink* sink = nullptr,
                  int stride = 1);

}  // namespace hnc
