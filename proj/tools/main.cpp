// hnc: hierarchical navigation control simulator for disk robots.

#include <CLI11.hpp>
#include <iostream>
#include <thread>

#include "cli_lib.hpp"
#include "hnc/clustering.hpp"
#include "hnc/nni.hpp"
#include "hnc/portal.hpp"

#include <json.hpp>

namespace {

using namespace hnc;

Configuration pick_config(const Scenario& s, const std::string& which) {
  if (which == "initial") return initial_config(s);
  if (which == "goal") return goal_config(s);
  throw ParseError("--which must be 'initial' or 'goal'");
}

std::filesystem::path derive(const std::filesystem::path& base,
                             const std::string& stem, bool multi) {
  if (!multi) return base;
  std::filesystem::path p = base;
  std::string ext = p.extension().string();
  p.replace_extension();
  return p.concat("." + stem).concat(ext);
}

int cmd_run(const std::vector<std::string>& files, cli::RunPaths paths,
            std::optional<double> dt, std::optional<std::uint64_t> perturb,
            int stride, int jobs) {
  const bool multi = files.size() > 1;
  std::vector<int> codes(files.size(), 0);
  std::vector<std::string> errors(files.size());

  auto work = [&](std::size_t i) {
    try {
      Scenario s = cli::load_scenario(files[i]);
      if (dt) s.dt = *dt;
      if (perturb) s.perturb_seed = *perturb;
      std::string stem = std::filesystem::path(files[i]).stem().string();
      cli::RunPaths out{derive(paths.traj, stem, multi),
                        derive(paths.events, stem, multi),
                        derive(paths.stats, stem, multi)};
      codes[i] = cli::run_to_files(s, out, stride);
    } catch (const std::exception& e) {
      errors[i] = e.what();
      codes[i] = 1;
    }
  };

  if (jobs <= 1 || files.size() == 1) {
    for (std::size_t i = 0; i < files.size(); ++i) work(i);
  } else {
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (int w = 0; w < jobs; ++w)
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < files.size(); i = next++) work(i);
      });
    for (auto& th : pool) th.join();
  }

  int worst = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (!errors[i].empty())
      std::cerr << files[i] << ": " << errors[i] << '\n';
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int cmd_validate(const std::string& file, const std::string& which) {
  Scenario s = cli::load_scenario(file);
  auto v = validate(pick_config(s, which));
  if (v.empty()) {
    std::cout << "ok\n";
    return 0;
  }
  for (const auto& viol : v)
    std::cout << "violation: pair {" << viol.i + 1 << "," << viol.j + 1
              << "} gap " << cli::format_double(viol.gap) << '\n';
  return 1;
}

int cmd_cluster(const std::string& file, const std::string& which) {
  Scenario s = cli::load_scenario(file);
  std::cout << hc_2means(pick_config(s, which)).newick() << '\n';
  return 0;
}

int cmd_stratum(const std::string& file, const std::string& which,
                const std::string& tree, bool interior) {
  Scenario s = cli::load_scenario(file);
  auto t = BinaryHierarchy::parse_newick(tree);
  bool in = stratum_contains(pick_config(s, which), t,
                             interior ? StratumMode::kInterior
                                      : StratumMode::kClosed);
  std::cout << (in ? "true" : "false") << '\n';
  return 0;
}

int cmd_nni_path(const std::string& from, const std::string& to) {
  auto path = nni_navigate(BinaryHierarchy::parse_newick(from),
                           BinaryHierarchy::parse_newick(to));
  for (const auto& t : path) std::cout << t.newick() << '\n';
  return 0;
}

int cmd_trees_count(int n) {
  std::cout << uint128_to_string(count_trees(n)) << '\n';
  return 0;
}

int cmd_portal(const std::string& file, const std::string& which,
               const std::string& from, const std::string& to, double alpha) {
  Scenario s = cli::load_scenario(file);
  Configuration x = pick_config(s, which);
  PortalContext ctx(BinaryHierarchy::parse_newick(from),
                    BinaryHierarchy::parse_newick(to), alpha);
  if (!stratum_contains(x, ctx.sigma, StratumMode::kClosed))
    throw DomainError("portal: configuration does not support the source tree");
  Configuration mapped = portal_map(x, ctx);

  nlohmann::ordered_json o;
  o["dim"] = mapped.dim();
  o["radii"] = mapped.radii();
  auto pts = nlohmann::ordered_json::array();
  for (int i = 0; i < mapped.count(); ++i) {
    auto pt = nlohmann::ordered_json::array();
    for (double v : mapped.pos(i)) pt.push_back(v);
    pts.push_back(std::move(pt));
  }
  o["positions"] = std::move(pts);
  std::cout << o.dump(2) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hierarchical navigation control for disk robots"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "Integrate the hybrid planner");
  std::vector<std::string> scenario_files;
  std::string traj = "trajectory.csv", events = "events.jsonl",
              stats = "stats.json";
  std::optional<double> dt;
  std::optional<std::uint64_t> perturb;
  int stride = 1, jobs = 1;
  run->add_option("--scenario", scenario_files, "Scenario JSON file(s)")
      ->required();
  run->add_option("--traj", traj, "Trajectory CSV output");
  run->add_option("--events", events, "Events JSONL output");
  run->add_option("--stats", stats, "Stats JSON output");
  run->add_option("--dt", dt, "Override integration step");
  run->add_option("--perturb", perturb, "Stall perturbation seed");
  run->add_option("--stride", stride, "Trajectory emission stride")
      ->check(CLI::PositiveNumber);
  run->add_option("--jobs", jobs, "Parallel scenarios")
      ->check(CLI::PositiveNumber);

  // validate / cluster / stratum
  std::string file, which = "initial", tree_arg, from_arg, to_arg;
  bool interior = false;
  double alpha = 0.2;
  auto* val = app.add_subcommand("validate", "Check pairwise separations");
  val->add_option("--scenario", file)->required();
  val->add_option("--which", which)->check(CLI::IsMember({"initial", "goal"}));

  auto* clu = app.add_subcommand("cluster", "Print the 2-means hierarchy");
  clu->add_option("--scenario", file)->required();
  clu->add_option("--which", which)->check(CLI::IsMember({"initial", "goal"}));

  auto* str = app.add_subcommand("stratum", "Stratum membership test");
  str->add_option("--scenario", file)->required();
  str->add_option("--which", which)->check(CLI::IsMember({"initial", "goal"}));
  str->add_option("--tree", tree_arg, "Newick tree")->required();
  str->add_flag("--interior", interior, "Interior instead of closed");

  auto* nni = app.add_subcommand("nni-path", "NNI control-law path");
  nni->add_option("from", from_arg, "Source tree (Newick)")->required();
  nni->add_option("to", to_arg, "Goal tree (Newick)")->required();

  int count_n = 0;
  auto* cnt = app.add_subcommand("trees-count", "Number of binary trees");
  cnt->add_option("n", count_n, "Number of leaves")->required();

  auto* por = app.add_subcommand("portal", "Apply the portal map");
  por->add_option("--scenario", file)->required();
  por->add_option("--which", which)->check(CLI::IsMember({"initial", "goal"}));
  por->add_option("--from", from_arg, "Source tree (Newick)")->required();
  por->add_option("--to", to_arg, "Adjacent target tree (Newick)")->required();
  por->add_option("--alpha", alpha, "Safety margin");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return cmd_run(scenario_files, {traj, events, stats}, dt, perturb,
                     stride, jobs);
    if (val->parsed()) return cmd_validate(file, which);
    if (clu->parsed()) return cmd_cluster(file, which);
    if (str->parsed()) return cmd_stratum(file, which, tree_arg, interior);
    if (nni->parsed()) return cmd_nni_path(from_arg, to_arg);
    if (cnt->parsed()) return cmd_trees_count(count_n);
    if (por->parsed()) return cmd_portal(file, which, from_arg, to_arg, alpha);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
