#include <doctest.h>

#include <nlohmann/json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string cli() {
  const char* path = std::getenv("DGA_CLI");
  REQUIRE_MESSAGE(path != nullptr, "DGA_CLI must point at the dga binary");
  return path;
}

int exit_code(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("dga_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("run: analytic case converges with exit 0") {
  TempDir dir;
  auto trace = (dir.path / "t.csv").string();
  auto summary = (dir.path / "s.json").string();
  int rc = exit_code(cli() + " run --scenario two_agent_analytic --trace " + trace +
                     " --summary " + summary + " > /dev/null 2>&1");
  CHECK(rc == 0);

  json s = json::parse(slurp(summary));
  CHECK(s.at("status") == "converged");
  CHECK(s.at("final").at("feas_sq").get<double>() <= 1e-16);

  std::string csv = slurp(trace);
  CHECK(csv.rfind("round,feas_sq,opt_sq,consensus_sq,dist_sq,delta_h_omega_sq,"
                  "wall_time_s\n", 0) == 0);
  long lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == s.at("rounds").get<long>() + 2);  // header + rounds + init row
}

TEST_CASE("run: exhausted budget exits 2") {
  TempDir dir;
  int rc = exit_code(cli() + " run --scenario dispatch118 --seed 10 --max-rounds 1" +
                     " --trace " + (dir.path / "t.csv").string() + " --summary " +
                     (dir.path / "s.json").string() + " > /dev/null 2>&1");
  CHECK(rc == 2);
}

TEST_CASE("run: invalid step size is rejected with the condition named") {
  TempDir dir;
  auto err = dir.path / "err.txt";
  // l_f = 2 on the analytic case, so alpha = 0.6 violates alpha < 1/l_f
  int rc = exit_code(cli() +
                     " run --scenario two_agent_analytic --alpha 0.6 --eta 4 --rho 1"
                     " --trace " + (dir.path / "t.csv").string() + " --summary " +
                     (dir.path / "s.json").string() + " 2> " + err.string());
  CHECK(rc == 1);
  CHECK(slurp(err).find("alpha < 1/l_f") != std::string::npos);
}

TEST_CASE("run: malformed config exits 1") {
  TempDir dir;
  int rc = exit_code(cli() + " run --problem " + (dir.path / "missing.json").string() +
                     " > /dev/null 2>&1");
  CHECK(rc == 1);
}

TEST_CASE("generate then run from file") {
  TempDir dir;
  auto problem = (dir.path / "p.json").string();
  int rc = exit_code(cli() +
                     " generate --scenario random_quadratic --n 6 --p 1 --m 1"
                     " --seed 4 --out " + problem + " > /dev/null 2>&1");
  REQUIRE(rc == 0);
  CHECK(fs::exists(problem));
  json manifest = json::parse(slurp(dir.path / "p.manifest.json"));
  CHECK(manifest.at("kind") == "random_quadratic");
  CHECK(manifest.at("seed") == 4);

  rc = exit_code(cli() + " run --problem " + problem + " --trace " +
                 (dir.path / "t.csv").string() + " --summary " +
                 (dir.path / "s.json").string() + " > /dev/null 2>&1");
  CHECK(rc == 0);
}

TEST_CASE("verify: clean instance passes, forced-invalid parameters are flagged") {
  TempDir dir;
  auto report = (dir.path / "r.json").string();
  int rc = exit_code(cli() +
                     " verify --scenario random_quadratic --n 6 --p 1 --m 1 --seed 2"
                     " --rounds 600 --report " + report + " > /dev/null 2>&1");
  CHECK(rc == 0);
  json r = json::parse(slurp(report));
  CHECK(r.at("all_pass") == true);
  CHECK(r.at("validation").at("ok") == true);

  rc = exit_code(cli() +
                 " verify --scenario random_quadratic --n 6 --p 1 --m 1 --seed 2"
                 " --rounds 600 --alpha 0.9 --eta 0.1 --rho 1 --force --report " +
                 report + " > /dev/null 2>&1");
  CHECK(rc != 0);
  r = json::parse(slurp(report));
  CHECK(r.at("all_pass") == false);
  CHECK(r.at("validation").at("ok") == false);
  bool flagged = false;
  for (const auto& c : r.at("validation").at("conditions"))
    if (!c.at("pass").get<bool>()) flagged = true;
  CHECK(flagged);
}

TEST_CASE("compare emits both traces and a wall-time ratio") {
  TempDir dir;
  int rc = exit_code(cli() + " compare --scenario two_agent_analytic --rounds 200"
                     " --out-dir " + dir.path.string() + " > /dev/null 2>&1");
  CHECK(rc == 0);
  CHECK(fs::exists(dir.path / "trace_dga.csv"));
  CHECK(fs::exists(dir.path / "trace_exact_mm.csv"));
  json c = json::parse(slurp(dir.path / "compare.json"));
  CHECK(c.at("wall_time_ratio_exact_over_dga").get<double>() > 0.0);
}
