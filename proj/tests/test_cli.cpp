#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hnc/hierarchy.hpp"

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("HNC_CLI");
  REQUIRE(p != nullptr);
  return p;
}

std::string scenario_dir() {
  const char* p = std::getenv("HNC_SCENARIOS");
  REQUIRE(p != nullptr);
  return p;
}

struct CmdResult {
  int code;
  std::string out;
};

CmdResult run_cmd(const std::string& args) {
  fs::path tmp = fs::temp_directory_path() / "hnc_cli_out.txt";
  std::string cmd = cli_path() + " " + args + " >" + tmp.string() + " 2>&1";
  int rc = std::system(cmd.c_str());
  std::ifstream in(tmp);
  std::ostringstream buf;
  buf << in.rdbuf();
  return {WEXITSTATUS(rc), buf.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_temp(const std::string& name, const std::string& text) {
  fs::path p = fs::temp_directory_path() / name;
  std::ofstream(p) << text;
  return p;
}

}  // namespace

TEST_CASE("trees-count") {
  auto r = run_cmd("trees-count 4");
  CHECK(r.code == 0);
  CHECK(r.out == "15\n");
  CHECK(run_cmd("trees-count 6").out == "945\n");
  CHECK(run_cmd("trees-count 1").code == 1);
}

TEST_CASE("nni-path") {
  auto r = run_cmd("nni-path \"((1,2),3);\" \"(1,(2,3));\"");
  CHECK(r.code == 0);
  CHECK(r.out == "((1,2),3);\n(1,(2,3));\n");
}

TEST_CASE("cluster on the worked line") {
  auto p = write_temp("hnc_cluster.json", R"({
    "dim": 2, "radii": [0.1, 0.1, 0.1, 0.1],
    "initial": [[0,0],[1,0],[10,0],[11,0]],
    "goal": [[0,0],[1,0],[10,0],[11,0]]})");
  auto r = run_cmd("cluster --scenario " + p.string());
  CHECK(r.code == 0);
  CHECK(r.out == "((1,2),(3,4));\n");
}

TEST_CASE("validate") {
  auto ok = run_cmd("validate --scenario " + scenario_dir() +
                    "/line_swap_4.json");
  CHECK(ok.code == 0);
  CHECK(ok.out == "ok\n");

  auto bad = write_temp("hnc_overlap.json", R"({
    "dim": 2, "radii": [1.0, 1.0],
    "initial": [[0,0],[1.5,0]],
    "goal": [[0,0],[5,0]]})");
  auto r = run_cmd("validate --scenario " + bad.string());
  CHECK(r.code == 1);
  CHECK(r.out.find("pair {1,2}") != std::string::npos);
}

TEST_CASE("stratum") {
  std::string base = " --scenario " + scenario_dir() + "/line_swap_4.json";
  CHECK(run_cmd("stratum" + base + " --tree \"((1,2),(3,4));\"").out ==
        "true\n");
  CHECK(run_cmd("stratum" + base + " --tree \"((1,3),(2,4));\"").out ==
        "false\n");
  CHECK(run_cmd("stratum" + base +
                " --which goal --tree \"((1,3),(2,4));\" --interior")
            .out == "true\n");
}

TEST_CASE("malformed scenarios name the offending field") {
  auto p1 = write_temp("hnc_bad1.json", R"({"dim": 2, "radii": [1.0]})");
  auto r1 = run_cmd("validate --scenario " + p1.string());
  CHECK(r1.code == 1);
  CHECK(r1.out.find("initial") != std::string::npos);

  auto p2 = write_temp("hnc_bad2.json", R"({
    "dim": 2, "radii": [1.0, 1.0],
    "initial": [[0,0],[5,0]], "goal": [[0,0],[5,0]], "extra": 1})");
  auto r2 = run_cmd("validate --scenario " + p2.string());
  CHECK(r2.code == 1);
  CHECK(r2.out.find("extra") != std::string::npos);
}

TEST_CASE("run: row-swap scenario, exit codes, determinism, tree round trips") {
  fs::path dir = fs::temp_directory_path() / "hnc_run";
  fs::create_directories(dir);
  std::string base = "run --scenario " + scenario_dir() +
                     "/line_swap_4.json --traj " + (dir / "t.csv").string() +
                     " --events " + (dir / "e.jsonl").string() + " --stats " +
                     (dir / "s.json").string();
  auto r = run_cmd(base);
  CHECK(r.code == 0);

  auto stats = nlohmann::json::parse(slurp(dir / "s.json"));
  CHECK(stats["deployed_trees"] == 4);
  CHECK(stats["min_clearance"].get<double>() > 0.0);

  // Header shape and row count.
  std::string traj = slurp(dir / "t.csv");
  CHECK(traj.rfind("t,x1_1,x1_2,x2_1,x2_2,x3_1,x3_2,x4_1,x4_2\n", 0) == 0);
  long rows = std::count(traj.begin(), traj.end(), '\n') - 1;
  CHECK(rows == stats["steps"].get<long>() + 1);

  // Every emitted tree string re-parses to an equal tree.
  std::istringstream events(slurp(dir / "e.jsonl"));
  std::string lineText;
  int checked = 0;
  while (std::getline(events, lineText)) {
    auto ev = nlohmann::json::parse(lineText);
    for (const char* key : {"from_tree", "to_tree"}) {
      if (ev[key].is_null()) continue;
      std::string s = ev[key].get<std::string>();
      CHECK(hnc::BinaryHierarchy::parse_newick(s).newick() == s);
      ++checked;
    }
  }
  CHECK(checked > 0);

  // Byte-identical rerun (stats modulo the wall_ms line).
  std::string traj1 = slurp(dir / "t.csv"), events1 = slurp(dir / "e.jsonl");
  auto strip_wall = [](std::string s) {
    auto pos = s.find("\"wall_ms\"");
    return pos == std::string::npos ? s : s.substr(0, pos);
  };
  std::string stats1 = strip_wall(slurp(dir / "s.json"));
  auto r2 = run_cmd(base);
  CHECK(r2.code == 0);
  CHECK(slurp(dir / "t.csv") == traj1);
  CHECK(slurp(dir / "e.jsonl") == events1);
  CHECK(strip_wall(slurp(dir / "s.json")) == stats1);

  // Invalid input exits 1 and names the pair.
  auto bad = write_temp("hnc_bad_run.json", R"({
    "dim": 2, "radii": [1.0, 1.0],
    "initial": [[0,0],[1.5,0]], "goal": [[0,0],[5,0]]})");
  auto rb = run_cmd("run --scenario " + bad.string() + " --traj " +
                    (dir / "bt.csv").string() + " --events " +
                    (dir / "be.jsonl").string() + " --stats " +
                    (dir / "bs.json").string());
  CHECK(rb.code == 1);
  CHECK(rb.out.find("pair {1,2}") != std::string::npos);
}

TEST_CASE("run: batch mode with per-scenario outputs") {
  fs::path dir = fs::temp_directory_path() / "hnc_batch";
  fs::create_directories(dir);
  auto r = run_cmd("run --scenario " + scenario_dir() +
                   "/line_swap_4.json --scenario " + scenario_dir() +
                   "/pair_swap_2.json --jobs 2 --stride 10 --traj " +
                   (dir / "t.csv").string() + " --events " +
                   (dir / "e.jsonl").string() + " --stats " +
                   (dir / "s.json").string());
  CHECK(r.code == 0);
  CHECK(fs::exists(dir / "t.line_swap_4.csv"));
  CHECK(fs::exists(dir / "t.pair_swap_2.csv"));
  CHECK(fs::exists(dir / "s.line_swap_4.json"));
  CHECK(fs::exists(dir / "s.pair_swap_2.json"));
}

TEST_CASE("portal subcommand emits the mapped configuration") {
  auto r = run_cmd("portal --scenario " + scenario_dir() +
                   "/line_swap_4.json --from \"((1,2),(3,4));\" --to "
                   "\"(1,(2,(3,4)));\"");
  CHECK(r.code == 0);
  auto o = nlohmann::json::parse(r.out);
  CHECK(o["dim"] == 2);
  CHECK(o["positions"].size() == 4);
  // Non-adjacent pair is rejected.
  auto bad = run_cmd("portal --scenario " + scenario_dir() +
                     "/line_swap_4.json --from \"((1,2),(3,4));\" --to "
                     "\"((1,3),(2,4));\"");
  CHECK(bad.code == 1);
}
