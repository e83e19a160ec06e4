#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hym/io.hpp"
#include "json.hpp"

using namespace hym;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hymlab_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

/// Runs hymlab with the given arguments; returns its exit status.
int hymlab(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(HYMLAB_PATH) + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
}

const std::string kConfigs = HYM_CONFIG_DIR;

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("config parsing: defaults, overrides, round trip") {
  const auto c = parse_config("{}");
  CHECK(c.geometry.n == 4);
  CHECK(c.epsilons == std::vector<double>{0.2, 0.1, 0.05, 0.025});
  CHECK(c.solver.mesh.nodes_per_inverse_eps == 64);
  CHECK_NOTHROW(c.validate());
  const auto d = load_config(kConfigs + "/default.json");
  CHECK(d.geometry.branch_points.size() == 4);
  CHECK(d.geometry.divisor_points[0] == std::complex<double>(0.45, 0.45));
  CHECK(d.epsilon == 0.1);
  const auto e = parse_config(config_json(d));
  CHECK(config_json(e) == config_json(d));
  const auto f = parse_config(R"({"geometry": {"r0": 0.04}, "sweep": {"epsilons": [0.1, 0.05, 0.2]}})");
  CHECK(f.geometry.r0 == 0.04);
  CHECK(f.epsilons.size() == 3);
}

TEST_CASE("config errors point at the offending key") {
  CHECK_THROWS_WITH_AS(parse_config(R"({"geometry": {"r1": 1}})"), doctest::Contains("geometry.r1"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"solver": {"nodes": 1.5}})"), doctest::Contains("solver.nodes"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"geometry": {"branch_points": [[0.1]]}})"),
                       doctest::Contains("geometry.branch_points[0]"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"sweep": {"epsilons": [0.1, "a"]}})"),
                       doctest::Contains("sweep.epsilons[1]"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config("{\"geometry\": "), doctest::Contains("malformed JSON"), ValidationError);
  CHECK_THROWS_WITH_AS(parse_config(R"({"colour": 1})"), doctest::Contains("colour"), ValidationError);
  const auto bad = load_config(kConfigs + "/bad_overlapping_charts.json");
  CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("points 0 and 1"), ValidationError);
  auto c = parse_config("{}");
  c.epsilon = 0.7;
  CHECK_THROWS_WITH_AS(c.validate(), doctest::Contains("epsilon"), ValidationError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ValidationError);
}

TEST_CASE("number formatting and artifacts") {
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(1e-300) == "1e-300");
  CHECK(std::stod(format_number(1.0 / 3)) == 1.0 / 3);
  const auto sol = solve_radial(0.2);
  const auto csv = radial_csv(sol);
  CHECK(csv.rfind("r,u,du,d2u\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == sol.mesh.n() + 2);
  const auto svg = svg_loglog("t", "y", {0.2, 0.1, 0.05}, {1e-1, 1e-3, 1e-7});
  CHECK(svg.find("<svg") == 0);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
}

TEST_CASE("report schema") {
  RunConfig c;
  c.epsilons = {0.2, 0.15, 0.1};
  const auto rep = sweep(c.epsilons, c.geometry, c.solver);
  const auto j = nlohmann::json::parse(report_json(c, rep, fit_superpolynomial(rep)));
  for (const char* k : {"config", "per_epsilon", "slopes", "verdicts", "invariants"}) CHECK(j.contains(k));
  CHECK(j["per_epsilon"].size() == 3);
  CHECK(j["slopes"]["m0_half"].size() == 2);
  for (const char* k : {"trace_sup", "c1_total", "flux"}) CHECK(j["invariants"].contains(k));
  for (const char* k : {"volume", "boundary", "paper", "ratio"}) CHECK(j["invariants"]["flux"].contains(k));
  CHECK(j["per_epsilon"][0]["regime"] == "outside eps<1/8");
  CHECK_FALSE(j["per_epsilon"][0].contains("wall_seconds"));
}

TEST_CASE("exit-code matrix") {
  const auto dir = scratch("matrix");
  const auto log = dir / "log.txt";
  const std::string def = "--config " + kConfigs + "/default.json";
  CHECK(hymlab("solve-radial --epsilon 0.1 --out " + dir.string(), log) == 0);
  CHECK(slurp(dir / "radial_eps0.1.csv").rfind("r,u,du,d2u\n", 0) == 0);
  CHECK(hymlab("green " + def + " --out " + dir.string(), log) == 0);
  CHECK(fs::exists(dir / "green.csv"));
  CHECK(hymlab("invariants " + def + " --out " + dir.string(), log) == 0);
  CHECK(fs::exists(dir / "invariants_eps0.1.json"));
  CHECK(hymlab("sweep --config " + kConfigs + "/bad_overlapping_charts.json --out " + dir.string(), log) == 1);
  CHECK(slurp(log).find("points 0 and 1") != std::string::npos);
  CHECK(hymlab("sweep --no-such-flag", log) == 1);
  CHECK(hymlab("solve-radial --epsilon 0.9 --out " + dir.string(), log) == 1);
  CHECK(hymlab("", log) == 1);
  // A mesh too coarse for the boundary layer is a solver failure.
  std::ofstream(dir / "coarse.json") << R"({"solver": {"nodes": 64, "nodes_per_inverse_eps": 0}})";
  CHECK(hymlab("solve-radial --epsilon 0.01 --config " + (dir / "coarse.json").string() + " --out " + dir.string(),
               log) == 2);
  // Out-of-regime sweep: slopes stay near 1, verdict fails.
  std::ofstream(dir / "flat.json") << R"({"sweep": {"epsilons": [0.45, 0.4, 0.35]}})";
  CHECK(hymlab("verify --config " + (dir / "flat.json").string() + " --out " + (dir / "v").string(), log) == 3);
  CHECK(fs::exists(dir / "v" / "report.json"));
  // The config file is never written.
  const auto before = slurp(kConfigs + "/default.json");
  CHECK(hymlab("assemble " + def + " --out " + dir.string(), log) == 0);
  CHECK(slurp(kConfigs + "/default.json") == before);
}

}  // TEST_SUITE
