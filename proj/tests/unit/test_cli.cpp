#include "doctest.h"

#include "small_config.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args, const fs::path& dir) {
  const fs::path log = dir / "cli.log";
  const std::string cmd = std::string(WINGSENSE_CLI) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream is(log);
  std::stringstream ss;
  ss << is.rdbuf();
  r.out = ss.str();
  return r;
}

fs::path fresh_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("wingsense_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p);
  os << text;
}

}  // namespace

TEST_CASE("cli pipeline from simulation to heatmap") {
  const fs::path dir = fresh_dir("pipeline");
  write_text(dir / "small.json", wingsense::testing::kSmallConfigJson);
  const std::string common = "--config " + (dir / "small.json").string() + " --out " + dir.string();

  Run r = run(common + " simulate --flap-std 0.31 --rotation-std 0.1", dir);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(fs::exists(dir / "strain_flap.wsf"));
  CHECK(fs::exists(dir / "strain_rotation.wsf"));

  r = run(common + " encode --flap " + (dir / "strain_flap.wsf").string() + " --rotation " +
              (dir / "strain_rotation.wsf").string(), dir);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("c_xi") != std::string::npos);

  const std::string enc = " --flap " + (dir / "encoded_flap.wsf").string() + " --rotation " + (dir / "encoded_rotation.wsf").string();
  r = run(common + " classify" + enc, dir);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("accuracy") != std::string::npos);
  CHECK(fs::exists(dir / "model.txt"));

  r = run(common + " select --q 3" + enc, dir);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(fs::exists(dir / "sensors_q3.txt"));

  r = run(common + " classify --sensors " + (dir / "sensors_q3.txt").string() + enc, dir);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(r.out.find("(q = 3)") != std::string::npos);

  r = run(common + " sweep --grid cell --partition 0.75", dir);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(fs::exists(dir / "accuracy.csv"));

  const fs::path post = dir / "post";
  r = run("--config " + (dir / "small.json").string() + " --out " + post.string() + " fit --in " + (dir / "accuracy.csv").string(), dir);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(fs::exists(post / "sigmoids.csv"));

  r = run("--config " + (dir / "small.json").string() + " --out " + post.string() + " heatmap --q 3 --in " +
              (dir / "selections.csv").string(), dir);
  REQUIRE_MESSAGE(r.code == 0, r.out);
  CHECK(fs::exists(post / "heatmap.csv"));
  fs::remove_all(dir);
}

TEST_CASE("cli exit codes") {
  const fs::path dir = fresh_dir("codes");
  CHECK(run("", dir).code == 1);
  CHECK(run("frobnicate", dir).code == 1);
  CHECK(run("encode", dir).code == 1);
  CHECK(run("--help", dir).code == 0);

  write_text(dir / "bad.json", R"({"n_trials": -4})");
  Run r = run("--config " + (dir / "bad.json").string() + " sweep", dir);
  CHECK(r.code == 1);
  CHECK(r.out.find("error:") != std::string::npos);

  write_text(dir / "unstable.json", R"({"plate": {"span": 0.01, "chord": 0.005, "thickness": 1.4855e-6},
                                      "simulation": {"t_end_ms": 1700.0}, "rotation_rate": 3000.0,
                                      "q_list": [1, 66], "heatmap_q": 1})");
  r = run("--config " + (dir / "unstable.json").string() + " --out " + dir.string() + " simulate", dir);
  CHECK(r.code == 2);
  CHECK(r.out.find("error: integrate:") != std::string::npos);
  fs::remove_all(dir);
}
