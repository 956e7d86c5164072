#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "awr/cli.hpp"
#include "awr/config.hpp"

using namespace awr;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("awr_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Small default-style scenario so the driver runs in a second or two.
fs::path small_config(const fs::path& dir) {
  const fs::path p = dir / "small.cfg";
  std::ofstream(p) << "seed = 7\n"
                      "[pressure]\npressure = log\n"
                      "[initial_data]\nu0 = expr:neg_tanh()\ng0 = step:0,1,2\n"
                      "[characteristics]\nepsilon = 0.1\nwindow = -2,2\ngrid_n = 21\n"
                      "[fields]\nbounds_lattice = 11,6\n"
                      "[experiments]\nt_star = 0.5\nweak_tests = 2\nweak_grid = 2,4\n";
  return p;
}

int run(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

const std::string kSource = AWR_SOURCE_DIR;

}  // namespace

TEST_CASE("exit codes") {
  const fs::path dir = scratch("codes");
  std::string err;
  CHECK(run({"--config", (dir / "missing.cfg").string(), "--out-dir", dir.string()}, &err) == cli::kExitConfigError);
  CHECK(err.find("ConfigError") != std::string::npos);

  CHECK(run({"--config", kSource + "/configs/gamma_rejected.cfg", "--out-dir", dir.string()}, &err) ==
        cli::kExitScenarioRejected);
  CHECK(err.find("ScenarioRejected") != std::string::npos);
  CHECK(err.find("jump 0") != std::string::npos);

  const std::string cfg = small_config(dir).string();
  CHECK(run({"--config", cfg, "--experiment", "nope"}) == cli::kExitConfigError);
  CHECK(run({"--config", cfg, "--override", "no_such_key=1"}) == cli::kExitConfigError);
  CHECK(run({"--config", cfg, "--override", "pressure=cubic"}) == cli::kExitConfigError);
  CHECK(run({"--experiment", "solve"}) == cli::kExitConfigError);
}

TEST_CASE("deterministic outputs and manifest") {
  const fs::path dir = scratch("det");
  const std::string cfg = small_config(dir).string();
  const fs::path a = dir / "a", b = dir / "b", c = dir / "c";
  REQUIRE(run({"--config", cfg, "--experiment", "solve", "--out-dir", a.string()}) == cli::kExitOk);
  REQUIRE(run({"--config", cfg, "--experiment", "solve", "--out-dir", b.string()}) == cli::kExitOk);
  CHECK(slurp(a / "fields.csv") == slurp(b / "fields.csv"));
  CHECK(slurp(a / "curves.csv") == slurp(b / "curves.csv"));
  CHECK(slurp(a / "fields.csv").rfind("x,t,rho,u,u_x,lambda1,lambda2,", 0) == 0);
  CHECK(slurp(a / "curves.csv").rfind("t,x2_eps,x_bar,x1_from_seed\n", 0) == 0);

  REQUIRE(run({"--config", cfg, "--experiment", "solve", "--out-dir", c.string(), "--override", "epsilon=0.2"}) ==
          cli::kExitOk);
  const auto ma = nlohmann::json::parse(slurp(a / "manifest.json"));
  const auto mb = nlohmann::json::parse(slurp(b / "manifest.json"));
  const auto mc = nlohmann::json::parse(slurp(c / "manifest.json"));
  CHECK(ma["config_digest"] == mb["config_digest"]);
  CHECK(ma["config_digest"] != mc["config_digest"]);
  CHECK(ma["all_passed"] == true);
  CHECK(ma["experiment"] == "solve");

  const std::string text = slurp(a / "manifest.json");
  CHECK(text.find('\r') == std::string::npos);
  CHECK(text.back() == '\n');
}

TEST_CASE("seed and grid flags reach the digest") {
  const fs::path dir = scratch("flags");
  const std::string cfg = small_config(dir).string();
  Config base = Config::load_file(cfg);
  Config seeded = base;
  seeded.set("seed", "8");
  CHECK(base.digest() != seeded.digest());
  Config grid = base;
  grid.apply_override("grid_n=23");
  CHECK(grid.get("characteristics.grid_n", "") == "23");
  CHECK(base.digest() != grid.digest());

  REQUIRE(run({"--config", cfg, "--experiment", "weak", "--out-dir", (dir / "w1").string(), "--seed", "9"}) ==
          cli::kExitOk);
  const auto m = nlohmann::json::parse(slurp(dir / "w1" / "manifest.json"));
  CHECK(m["seed"] == 9);
  CHECK(slurp(dir / "w1" / "weak.csv").rfind("grid_n,mass_residual,momentum_residual\n", 0) == 0);
}

TEST_CASE("float formatting") {
  CHECK(cli::format_double(0.1) == "0.10000000000000001");
  CHECK(cli::format_double(1.0) == "1");
  CHECK(cli::format_double(-2.5e-7) == "-2.4999999999999999e-07");
}

TEST_CASE("config parsing") {
  const auto cfg = Config::parse("seed = 3\n[pressure]\npressure = gamma:2 # comment\n\n[characteristics]\nepsilon=0.05\n");
  CHECK(cfg.get("pressure.pressure", "") == "gamma:2");
  CHECK(cfg.get_double("characteristics.epsilon", 0.0) == 0.05);
  CHECK(cfg.get_u64("seed", 0) == 3);
  CHECK_THROWS_AS(Config::parse("[pressure]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("[pressure\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("just text\n"), ConfigError);
  CHECK_THROWS_AS(parse_pressure("gamma:0.5"), ConfigError);
  CHECK(parse_pressure("log").limit_class() == LimitClass::MinusInfinity);
}
