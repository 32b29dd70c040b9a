// loopbundle: command-line front end for the verification suites.
//
//   loopbundle verify --loop qc --suite all --samples 200 --report out.json
//   loopbundle reconstruct --loop qh2 --a 0.5,0 --b 0,0.5 --steps 128
//   loopbundle bundle-check --atlas qs2-over-s2:n=3
//   loopbundle gauge-check --loop qhr:K=0
//
// Exit status: 0 all cases pass, 1 some case fails, 2 usage or configuration
// error. Settings come from (highest first) flags, --config file, the
// LOOPBUNDLE_SEED environment variable and built-in defaults.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "loopbundle/reconstruct.hpp"
#include "loopbundle/suites.hpp"

using namespace loopbundle;

namespace {

struct Options {
  std::string loop = "qc", suite = "all", atlas = "s3-over-s1", report, config, path = "ray";
  std::string a = "0.5,0", b = "0,0.5";
  long samples = 0;
  std::uint64_t seed = 1;
  int steps = 256;
  std::map<std::string, double> tol = SuiteConfig::default_tolerances();
};

std::string trim(const std::string& s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

std::map<std::string, std::string> read_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot read " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line.substr(0, line.find('#')));
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw CLI::ValidationError("--config", path + ":" + std::to_string(lineno) + ": expected key=value");
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

// Fills every setting whose flag was not given from the config file.
void apply_config(CLI::App& cmd, Options& o) {
  if (o.config.empty()) return;
  auto given = [&](const std::string& name) {
    auto* opt = cmd.get_option_no_throw("--" + name);
    return opt != nullptr && opt->count() > 0;
  };
  for (const auto& [key, value] : read_config(o.config)) {
    if (given(key)) continue;
    try {
      if (key == "loop") o.loop = value;
      else if (key == "suite") o.suite = value;
      else if (key == "atlas") o.atlas = value;
      else if (key == "report") o.report = value;
      else if (key == "path") o.path = value;
      else if (key == "samples") o.samples = std::stol(value);
      else if (key == "seed") o.seed = std::stoull(value);
      else if (key == "steps") o.steps = std::stoi(value);
      else if (key.rfind("tol.", 0) == 0 && o.tol.count(key.substr(4))) o.tol[key.substr(4)] = std::stod(value);
      else throw CLI::ValidationError("--config", "unknown key '" + key + "'");
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("--config", "bad value for '" + key + "'");
    }
  }
}

void add_common(CLI::App* cmd, Options& o, bool with_loop) {
  if (with_loop) cmd->add_option("--loop", o.loop, "rz, qc, qh2, qhr:K=<real>, qsu2");
  cmd->add_option("--samples", o.samples, "samples per case (0: suite default)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "master seed");
  cmd->add_option("--steps", o.steps, "RK4 steps")->check(CLI::Range(16, 1 << 20));
  cmd->add_option("--report", o.report, "write a JSON report here");
  cmd->add_option("--config", o.config, "key=value file; flags take precedence");
  for (auto& [name, value] : o.tol) cmd->add_option("--tol." + name, value, "tolerance override");
}

SuiteConfig to_config(const Options& o) {
  SuiteConfig c;
  c.loop = o.loop;
  c.atlas = o.atlas;
  c.samples = o.samples;
  c.seed = o.seed;
  c.steps = o.steps;
  c.tol = o.tol;
  return c;
}

void write_report(const std::string& path, const nlohmann::ordered_json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  out << j.dump(2) << '\n';
  if (!out) throw LoopError(ErrorKind::ReportWriteFailure, path);
}

int print_and_report(const VerificationReport& rep, const Options& o) {
  for (const auto& c : rep.cases)
    std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  residual=" << format_residual(c.max_residual)
              << "  tol=" << format_residual(c.tolerance) << "  n=" << c.samples << '\n';
  for (const auto& n : rep.notes) std::cout << "note: " << n << '\n';
  nlohmann::ordered_json j;
  j["config"] = {{"loop", o.loop}, {"seed", o.seed}, {"samples", o.samples}, {"steps", o.steps}};
  j["report"] = rep.to_json(false);
  j["wall_time"] = rep.wall_time;
  write_report(o.report, j);
  return rep.all_pass() ? 0 : 1;
}

Vec<double> parse_point(const std::string& text, std::size_t dim) {
  Vec<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      v.push_back(std::stod(item));
    } catch (const std::logic_error&) {
      throw CLI::ValidationError("point", "'" + text + "' is not a comma-separated list of numbers");
    }
  }
  if (v.size() != dim) throw CLI::ValidationError("point", "expected " + std::to_string(dim) + " coordinates");
  return v;
}

int run_reconstruct(const Options& o) {
  Loop L = parse_loop(o.loop);
  Vec<double> a = parse_point(o.a, L.dim()), b = parse_point(o.b, L.dim());
  if (o.path != "ray" && o.path != "bezier") throw CLI::ValidationError("--path", "ray or bezier");
  ReconstructOptions opt;
  opt.steps = o.steps;
  opt.path = o.path == "ray" ? PathKind::ray : PathKind::bezier;
  opt.tol = 0.0;
  ReconstructResult r = reconstruct_product(L, a, b, opt);
  Vec<double> exact = L.product(a, b);
  double err = L.distance(r.value, exact);
  const double tol = o.tol.at("ode");
  std::cout << "phi(1) =";
  for (double x : r.value) std::cout << ' ' << format_residual(x);
  std::cout << "\na*b    =";
  for (double x : exact) std::cout << ' ' << format_residual(x);
  std::cout << "\nerror " << format_residual(err) << "  estimate " << format_residual(r.error_estimate) << "  tol "
            << format_residual(tol) << '\n';
  nlohmann::ordered_json j;
  j["loop"] = o.loop;
  j["steps"] = o.steps;
  j["path"] = o.path;
  j["value"] = r.value;
  j["closed_form"] = exact;
  j["error"] = format_residual(err);
  j["error_estimate"] = format_residual(r.error_estimate);
  j["pass"] = err <= tol;
  write_report(o.report, j);
  return err <= tol ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  if (const char* env = std::getenv("LOOPBUNDLE_SEED")) {
    try {
      o.seed = std::stoull(env);
    } catch (const std::logic_error&) {
      std::cerr << "LOOPBUNDLE_SEED is not an unsigned integer\n";
      return 2;
    }
  }

  CLI::App app{"Smooth loops, quasi-invariant frames and loop bundles: numerical checks"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  add_common(verify, o, true);
  verify->add_option("--suite", o.suite, "axioms, tangent, jacobi, reconstruct, bundle, gauge, all");
  verify->add_option("--atlas", o.atlas, "atlas for the bundle suite");

  auto* recon = app.add_subcommand("reconstruct", "rebuild a·b from the generalized Lie equation");
  add_common(recon, o, true);
  recon->add_option("--a", o.a, "first factor, comma-separated");
  recon->add_option("--b", o.b, "second factor, comma-separated");
  recon->add_option("--path", o.path, "ray or bezier");

  auto* bundle = app.add_subcommand("bundle-check", "bundle atlas checks");
  add_common(bundle, o, true);
  bundle->add_option("--atlas", o.atlas, "s3-over-s1 or qs2-over-s2:n=<int>");

  auto* gauge = app.add_subcommand("gauge-check", "connection, curvature and structure equation checks");
  add_common(gauge, o, true);

  try {
    app.parse(argc, argv);
    CLI::App* cmd = app.get_subcommands().front();
    apply_config(*cmd, o);
    if (cmd == recon) return run_reconstruct(o);
    std::string suite = cmd == verify ? o.suite : cmd == bundle ? "bundle" : "gauge";
    return print_and_report(run_suite(to_config(o), suite), o);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  } catch (const LoopError& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::UnknownSuite:
      case ErrorKind::UnknownLoop:
      case ErrorKind::UnknownKind:
      case ErrorKind::ReportWriteFailure:
      case ErrorKind::StepUnderflow:
        return 2;
      default:
        return 1;
    }
  }
}
