#include "cli_lib.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace hnc::cli {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

[[noreturn]] void bad_field(const std::string& field, const std::string& why) {
  throw ParseError("scenario field '" + field + "': " + why);
}

std::vector<double> parse_points(const json& j, const std::string& field,
                                 int n, int d) {
  if (!j.is_array() || int(j.size()) != n)
    bad_field(field, "expected an array of " + std::to_string(n) +
                         " points");
  std::vector<double> out;
  out.reserve(std::size_t(n) * d);
  for (const auto& p : j) {
    if (!p.is_array() || int(p.size()) != d)
      bad_field(field, "each point must have " + std::to_string(d) +
                           " coordinates");
    for (const auto& v : p) {
      if (!v.is_number()) bad_field(field, "coordinates must be numbers");
      out.push_back(v.get<double>());
    }
  }
  return out;
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("scenario: top level must be an object");

  static const std::set<std::string> known{
      "dim",  "radii", "initial",  "goal",        "goal_tree", "alpha",
      "beta", "dt",    "t_max",    "goal_tol",    "perturb_seed"};
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (!known.count(key)) bad_field(key, "unknown field");
  }
  for (const char* req : {"dim", "radii", "initial", "goal"})
    if (!j.contains(req)) bad_field(req, "missing");

  Scenario s;
  if (!j["dim"].is_number_integer() || j["dim"].get<int>() < 1)
    bad_field("dim", "must be a positive integer");
  s.dim = j["dim"].get<int>();

  if (!j["radii"].is_array() || j["radii"].empty())
    bad_field("radii", "must be a nonempty array");
  for (const auto& r : j["radii"]) {
    if (!r.is_number() || r.get<double>() < 0.0)
      bad_field("radii", "entries must be nonnegative numbers");
    s.radii.push_back(r.get<double>());
  }
  const int n = int(s.radii.size());
  s.initial = parse_points(j["initial"], "initial", n, s.dim);
  s.goal = parse_points(j["goal"], "goal", n, s.dim);

  auto number = [&](const char* field, double lo, double& out) {
    if (!j.contains(field)) return;
    if (!j[field].is_number() || j[field].get<double>() <= lo)
      bad_field(field, "must be a number > " + std::to_string(lo));
    out = j[field].get<double>();
  };
  number("alpha", 0.0, s.alpha);
  number("beta", 0.0, s.beta);
  number("dt", 0.0, s.dt);
  number("t_max", 0.0, s.t_max);
  if (s.beta <= s.alpha) bad_field("beta", "must exceed alpha");

  if (j.contains("goal_tol")) {
    if (!j["goal_tol"].is_number() || j["goal_tol"].get<double>() < 0.0)
      bad_field("goal_tol", "must be a nonnegative number");
    s.goal_tol = j["goal_tol"].get<double>();
  }
  if (j.contains("goal_tree")) {
    if (!j["goal_tree"].is_string()) bad_field("goal_tree", "must be a string");
    s.goal_tree = j["goal_tree"].get<std::string>();
    BinaryHierarchy t = BinaryHierarchy::parse_newick(*s.goal_tree);
    if (t.leaf_count() != n)
      bad_field("goal_tree", "leaf count differs from radii length");
  }
  if (j.contains("perturb_seed")) {
    if (!j["perturb_seed"].is_number_unsigned())
      bad_field("perturb_seed", "must be an unsigned integer");
    s.perturb_seed = j["perturb_seed"].get<std::uint64_t>();
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open scenario file: " + file.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  (void)ec;
  return std::string(buf, ptr);
}

void write_trajectory_header(std::ostream& os, int n, int d) {
  os << 't';
  for (int i = 1; i <= n; ++i)
    for (int k = 1; k <= d; ++k) os << ",x" << i << '_' << k;
  os << '\n';
}

void write_trajectory_row(std::ostream& os, double t,
                          std::span<const double> positions) {
  os << format_double(t);
  for (double v : positions) os << ',' << format_double(v);
  os << '\n';
}

void write_event(std::ostream& os, const TraceEvent& ev, int dim) {
  ordered o;
  o["t"] = ev.t;
  o["kind"] = to_string(ev.kind);
  if (ev.from_tree.empty())
    o["from_tree"] = nullptr;
  else
    o["from_tree"] = ev.from_tree;
  if (ev.to_tree.empty())
    o["to_tree"] = nullptr;
  else
    o["to_tree"] = ev.to_tree;
  if (ev.local_goal.empty()) {
    o["local_goal"] = nullptr;
  } else {
    ordered pts = ordered::array();
    for (std::size_t i = 0; i < ev.local_goal.size(); i += dim) {
      ordered pt = ordered::array();
      for (int k = 0; k < dim; ++k) pt.push_back(ev.local_goal[i + k]);
      pts.push_back(std::move(pt));
    }
    o["local_goal"] = std::move(pts);
  }
  os << o.dump() << '\n';
}

void write_stats(std::ostream& os, const RunStats& stats) {
  ordered o;
  o["deployed_trees"] = stats.deployed_trees;
  o["transitions"] = stats.transitions;
  o["min_clearance"] = stats.min_clearance;
  o["final_error"] = stats.final_error;
  o["steps"] = stats.steps;
  o["wall_ms"] = stats.wall_ms;
  os << o.dump(2) << '\n';
}

int run_to_files(const Scenario& scenario, const RunPaths& paths, int stride) {
  struct FileSink : TrajectorySink {
    std::ofstream os;
    void row(double t, std::span<const double> p) override {
      write_trajectory_row(os, t, p);
    }
  } sink;
  sink.os.open(paths.traj);
  if (!sink.os)
    throw ParseError("cannot open trajectory output: " + paths.traj.string());
  write_trajectory_header(sink.os, int(scenario.radii.size()), scenario.dim);

  RunResult result = run_hnc(scenario, &sink, stride);

  std::ofstream ev(paths.events);
  if (!ev)
    throw ParseError("cannot open events output: " + paths.events.string());
  for (const auto& e : result.events) write_event(ev, e, scenario.dim);

  std::ofstream st(paths.stats);
  if (!st)
    throw ParseError("cannot open stats output: " + paths.stats.string());
  write_stats(st, result.stats);

  switch (result.outcome) {
    case RunOutcome::kGoalReached: return 0;
    case RunOutcome::kStall: return 2;
    case RunOutcome::kTimeout: return 3;
  }
  return 1;
}

}  // namespace hnc::cli
