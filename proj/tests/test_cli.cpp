#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Run {
  int status;
  std::string out;
};

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("loopbundle_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Run run(const std::string& args, const std::string& env = "") {
  fs::path out = scratch() / "stdout.txt";
  std::string cmd = env + " \"" LOOPBUNDLE_CLI "\" " + args + " > \"" + out.string() + "\" 2>&1";
  int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out)};
}

nlohmann::json report_without_time(const fs::path& p) {
  nlohmann::json j = nlohmann::json::parse(slurp(p));
  j.erase("wall_time");
  return j;
}

}  // namespace

TEST_CASE("exit status: pass, fail and usage errors") {
  Run ok = run("verify --loop qc --suite axioms --samples 200");
  CHECK(ok.status == 0);
  CHECK(ok.out.find("PASS ") != std::string::npos);
  CHECK(ok.out.find("FAIL ") == std::string::npos);

  Run fail = run("gauge-check --loop qc --samples 4");
  CHECK(fail.status == 1);
  CHECK(fail.out.find("FAIL structure_equation_mixed ") != std::string::npos);

  CHECK(run("verify --suite nonsense").status == 2);
  CHECK(run("verify --loop qz --suite axioms").status == 2);
  CHECK(run("verify --no-such-flag").status == 2);
  CHECK(run("verify --steps 3").status == 2);
  CHECK(run("").status == 2);
  CHECK(run("bundle-check --atlas torus").status == 2);
  CHECK(run("--help").status == 0);
}

TEST_CASE("reports are reproducible apart from the wall time") {
  fs::path a = scratch() / "a.json", b = scratch() / "b.json";
  REQUIRE(run("verify --loop qh2 --suite tangent --samples 30 --seed 7 --report " + a.string()).status == 0);
  REQUIRE(run("verify --loop qh2 --suite tangent --samples 30 --seed 7 --report " + b.string()).status == 0);
  nlohmann::json ja = report_without_time(a), jb = report_without_time(b);
  CHECK(ja == jb);
  CHECK(ja["config"]["seed"] == 7);
  CHECK(ja["report"]["suite"] == "tangent");
  CHECK(run("verify --suite axioms --samples 10 --report /nonexistent/dir/r.json").status == 2);
}

TEST_CASE("config file, flag precedence and the seed variable") {
  fs::path cfg = scratch() / "run.cfg", r1 = scratch() / "c1.json", r2 = scratch() / "c2.json";
  {
    std::ofstream out(cfg);
    out << "# settings\nloop = qh2\nsamples = 20\nseed = 5\ntol.exact = 1e-12\n";
  }
  REQUIRE(run("verify --suite axioms --config " + cfg.string() + " --report " + r1.string()).status == 0);
  nlohmann::json j1 = report_without_time(r1);
  CHECK(j1["config"]["loop"] == "qh2");
  CHECK(j1["config"]["samples"] == 20);
  CHECK(j1["config"]["seed"] == 5);

  REQUIRE(run("verify --suite axioms --loop rz --config " + cfg.string() + " --report " + r2.string()).status == 0);
  CHECK(report_without_time(r2)["config"]["loop"] == "rz");

  REQUIRE(run("verify --suite axioms --samples 10 --report " + r1.string(), "LOOPBUNDLE_SEED=42").status == 0);
  CHECK(report_without_time(r1)["config"]["seed"] == 42);
  REQUIRE(run("verify --suite axioms --samples 10 --seed 3 --report " + r1.string(), "LOOPBUNDLE_SEED=42").status ==
          0);
  CHECK(report_without_time(r1)["config"]["seed"] == 3);
  CHECK(run("verify --suite axioms", "LOOPBUNDLE_SEED=abc").status == 2);

  {
    std::ofstream out(cfg);
    out << "colour = blue\n";
  }
  CHECK(run("verify --suite axioms --config " + cfg.string()).status == 2);
}

TEST_CASE("reconstruct subcommand") {
  Run r = run("reconstruct --loop qc --a 0.5,0 --b 0.5,0 --steps 128");
  CHECK(r.status == 0);
  CHECK(r.out.find("phi(1) = 1.3333333333") != std::string::npos);
  CHECK(run("reconstruct --loop qc --a 0.5 --b 0,0.5").status == 2);
  CHECK(run("reconstruct --loop qc --path spiral").status == 2);
  fs::path rep = scratch() / "rec.json";
  REQUIRE(run("reconstruct --loop qh2 --path bezier --report " + rep.string()).status == 0);
  nlohmann::json j = nlohmann::json::parse(slurp(rep));
  CHECK(j["pass"] == true);
  CHECK(j["path"] == "bezier");
}
