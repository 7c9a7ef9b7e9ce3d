#include "hnc/executor.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <set>

#include "hnc/clustering.hpp"
#include "hnc/kernels.hpp"
#include "hnc/nni.hpp"
#include "hnc/portal.hpp"
#include "hnc/tolerances.hpp"

namespace hnc {

Configuration initial_config(const Scenario& s) {
  return Configuration(s.dim, s.initial, s.radii);
}

Configuration goal_config(const Scenario& s) {
  return Configuration(s.dim, s.goal, s.radii);
}

const char* to_string(EventKind kind) {
  switch (kind) {
    case EventKind::kStart: return "start";
    case EventKind::kTreeTransition: return "tree_transition";
    case EventKind::kEnteredGoalStratum: return "entered_goal_stratum";
    case EventKind::kGoalReached: return "goal_reached";
    case EventKind::kStall: return "stall";
    case EventKind::kStep: return "step";
  }
  return "?";
}

namespace {

double diameter(const Configuration& c) {
  double best = 0.0;
  for (int i = 0; i < c.count(); ++i) {
    auto xi = c.pos(i);
    for (int j = i + 1; j < c.count(); ++j) {
      auto xj = c.pos(j);
      double acc = 0.0;
      for (int k = 0; k < c.dim(); ++k) acc += (xi[k] - xj[k]) * (xi[k] - xj[k]);
      best = std::max(best, acc);
    }
  }
  return std::sqrt(best);
}

double norm(std::span<const double> v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc);
}

double error_to(const std::vector<double>& p, const std::vector<double>& q) {
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) acc += (p[i] - q[i]) * (p[i] - q[i]);
  return std::sqrt(acc);
}

void check_post_step(const FieldEvaluator& field,
                     const std::vector<double>& positions) {
  const Configuration& goal = field.params().goal;
  Configuration x = goal.with_positions(positions);
  double margin = stratum_margin(x, field.params().tree);
  if (margin < -tol::kIntegration)
    throw IntegrationError(
        "post-step closed-stratum margin " + std::to_string(margin) +
        " below -" + std::to_string(tol::kIntegration) +
        " (dt too large or field bug)");
  int vi = -1, vj = -1;
  double clear = min_clearance(x, &vi, &vj);
  if (clear <= -tol::kGeom)
    throw IntegrationError("post-step clearance violation between labels " +
                           std::to_string(vi + 1) + " and " +
                           std::to_string(vj + 1) + ": " +
                           std::to_string(clear));
}

}  // namespace

namespace {

// RK4 with k1 supplied by the caller (it doubles as the stall probe).
std::vector<double> rk4_step_from(const FieldEvaluator& field,
                                  const std::vector<double>& positions,
                                  double dt, const std::vector<double>& k1) {
  const std::size_t m = positions.size();
  std::vector<double> tmp(m);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = positions[i] + 0.5 * dt * k1[i];
  std::vector<double> k2 = field.eval_positions(tmp);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = positions[i] + 0.5 * dt * k2[i];
  std::vector<double> k3 = field.eval_positions(tmp);
  for (std::size_t i = 0; i < m; ++i) tmp[i] = positions[i] + dt * k3[i];
  std::vector<double> k4 = field.eval_positions(tmp);
  std::vector<double> out(m);
  kernels::active().rk4_combine(out.data(), positions.data(), k1.data(),
                                k2.data(), k3.data(), k4.data(), dt, m);
  check_post_step(field, out);
  return out;
}

}  // namespace

std::vector<double> rk4_step(const FieldEvaluator& field,
                             const std::vector<double>& positions, double dt) {
  return rk4_step_from(field, positions, dt, field.eval_positions(positions));
}

HybridState step(const HybridState& state, double dt) {
  FieldEvaluator field(
      FieldParams{state.local_goal, state.tree, state.alpha, state.beta});
  HybridState next = state;
  next.config =
      state.config.with_positions(rk4_step(field, state.config.positions(), dt));
  next.t = state.t + dt;
  return next;
}

RunResult run_hnc(const Scenario& scenario, TrajectorySink* sink, int stride) {
  const auto wall_start = std::chrono::steady_clock::now();
  if (stride < 1) throw DomainError("run: stride must be >= 1");
  if (scenario.dt <= 0.0) throw DomainError("run: dt must be positive");
  if (scenario.t_max <= 0.0) throw DomainError("run: t_max must be positive");

  Configuration x0 = initial_config(scenario);
  Configuration y = goal_config(scenario);
  if (auto v = validate(x0); !v.empty())
    throw DomainError("run: initial configuration invalid, pair {" +
                      std::to_string(v[0].i + 1) + "," +
                      std::to_string(v[0].j + 1) + "} gap " +
                      std::to_string(v[0].gap));
  if (auto v = validate(y); !v.empty())
    throw DomainError("run: goal configuration invalid, pair {" +
                      std::to_string(v[0].i + 1) + "," +
                      std::to_string(v[0].j + 1) + "} gap " +
                      std::to_string(v[0].gap));

  BinaryHierarchy goal_tree = scenario.goal_tree
                                  ? BinaryHierarchy::parse_newick(*scenario.goal_tree)
                                  : hc_2means(y);
  if (!stratum_contains(y, goal_tree, StratumMode::kClosed))
    throw DomainError("run: goal configuration does not support the goal tree");

  const double scale =
      std::max({diameter(x0), diameter(y), 1e-12});
  const double goal_tol = scenario.goal_tol.value_or(1e-3 * diameter(y));
  const double stall_eps = 1e-9 * scale;
  const int stall_window = 1000;

  RunResult result;
  RunStats& stats = result.stats;
  stats.min_clearance = min_clearance(x0);
  std::set<std::string> deployed;

  std::vector<double> p = x0.positions();
  double t = 0.0;
  long emitted_step = 0;
  if (sink) sink->row(0.0, p);

  BinaryHierarchy sigma = hc_2means(x0);
  bool goal_mode = stratum_contains(x0, goal_tree, StratumMode::kClosed);
  if (goal_mode) sigma = goal_tree;

  int stall_count = 0;
  bool perturbed = false;
  std::optional<RunOutcome> outcome;

  auto emit = [&](double tt) {
    ++stats.steps;
    ++emitted_step;
    if (sink && (emitted_step % stride == 0)) sink->row(tt, p);
    stats.min_clearance =
        std::min(stats.min_clearance,
                 kernels::active().min_clearance(p.data(),
                                                 scenario.radii.data(),
                                                 int(scenario.radii.size()),
                                                 scenario.dim, nullptr,
                                                 nullptr));
  };

  // Advances one segment under `field`; returns when `until` fires, on
  // stall, or on timeout.
  auto integrate = [&](const FieldEvaluator& field, const auto& until) {
    while (true) {
      if (until()) return;
      if (t >= scenario.t_max) {
        outcome = RunOutcome::kTimeout;
        return;
      }
      std::vector<double> k1 = field.eval_positions(p);
      double speed = norm(k1);
      if (speed < stall_eps) {
        if (++stall_count >= stall_window) {
          if (scenario.perturb_seed && !perturbed) {
            perturbed = true;
            std::mt19937_64 rng(*scenario.perturb_seed);
            std::uniform_real_distribution<double> kick(-1e-6 * scale,
                                                        1e-6 * scale);
            std::vector<double> saved = p;
            for (double& v : p) v += kick(rng);
            Configuration probe = x0.with_positions(p);
            if (stratum_margin(probe, field.params().tree) <
                -tol::kIntegration) {
              p = std::move(saved);  // kick left the stratum; give up
              outcome = RunOutcome::kStall;
              return;
            }
            stall_count = 0;
            continue;
          }
          outcome = RunOutcome::kStall;
          return;
        }
      } else {
        stall_count = 0;
      }
      p = rk4_step_from(field, p, scenario.dt, k1);
      t += scenario.dt;
      emit(t);
    }
  };

  bool started = false;
  while (!outcome) {
    if (goal_mode) {
      deployed.insert(goal_tree.newick());
      FieldEvaluator field(
          FieldParams{y, goal_tree, scenario.alpha, scenario.beta});
      if (!started) {
        started = true;
        result.events.push_back(
            {0.0, EventKind::kStart, "", goal_tree.newick(), y.positions()});
      }
      integrate(field, [&] {
        if (error_to(p, y.positions()) > goal_tol) return false;
        outcome = RunOutcome::kGoalReached;
        result.events.push_back({t, EventKind::kGoalReached,
                                 goal_tree.newick(), goal_tree.newick(),
                                 y.positions()});
        return true;
      });
      if (outcome == RunOutcome::kStall)
        result.events.push_back({t, EventKind::kStall, goal_tree.newick(),
                                 goal_tree.newick(), y.positions()});
      break;
    }

    // Transit: propose the adjacent tree and its portal target.
    deployed.insert(sigma.newick());
    Cluster g = nni_control(sigma, goal_tree);
    BinaryHierarchy sigma_next = nni_move(sigma, g);
    PortalContext ctx(sigma, sigma_next, scenario.alpha);
    Configuration local_goal = portal_map(x0.with_positions(p), ctx);
    FieldEvaluator field(
        FieldParams{local_goal, sigma, scenario.alpha, scenario.beta});
    if (!started) {
      started = true;
      result.events.push_back({0.0, EventKind::kStart, "", sigma.newick(),
                               local_goal.positions()});
    }

    bool switched = false;
    integrate(field, [&] {
      Configuration here = x0.with_positions(p);
      if (stratum_contains(here, goal_tree, StratumMode::kInterior)) {
        result.events.push_back({t, EventKind::kEnteredGoalStratum,
                                 sigma.newick(), goal_tree.newick(),
                                 y.positions()});
        ++stats.transitions;
        goal_mode = true;
        switched = true;
        return true;
      }
      if (stratum_contains(here, sigma_next, StratumMode::kInterior)) {
        result.events.push_back({t, EventKind::kTreeTransition, sigma.newick(),
                                 sigma_next.newick(),
                                 local_goal.positions()});
        ++stats.transitions;
        sigma = sigma_next;
        switched = true;
        return true;
      }
      return false;
    });
    if (outcome == RunOutcome::kStall)
      result.events.push_back({t, EventKind::kStall, sigma.newick(),
                               sigma.newick(), local_goal.positions()});
    (void)switched;
  }

  stats.deployed_trees = int(deployed.size());
  stats.final_error = error_to(p, y.positions());
  stats.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - wall_start)
                      .count();
  result.outcome = *outcome;
  return result;
}

}  // namespace hnc
