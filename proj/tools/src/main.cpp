// qsync command-line front end.
//
//   qsync sweep <config> [--jobs N] [--out DIR] [--format csv,json] [--seed S]
//   qsync oracle <name> key=value ...
//   qsync converge <model> key=value ... [--start N] [--cap N]
//   qsync models
//
// Exit codes: 0 success, 1 runtime failure, 2 configuration or usage error,
// 3 every sweep cell failed.

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qsync/classical.hpp"
#include "qsync/dynamics.hpp"
#include "qsync/errors.hpp"
#include "qsync/models.hpp"
#include "qsync/oracles.hpp"
#include "qsync/sweep.hpp"

namespace {

using qsync::Error;
using qsync::ErrorKind;
using Params = std::map<std::string, double>;
using json = nlohmann::json;

constexpr int kOk = 0;
constexpr int kRuntime = 1;
constexpr int kConfig = 2;
constexpr int kAllFailed = 3;

Params parse_params(const std::vector<std::string>& args) {
  Params out;
  for (const std::string& a : args) {
    const auto eq = a.find('=');
    if (eq == std::string::npos || eq == 0) throw Error(ErrorKind::config, "expected key=value, got '" + a + "'");
    const std::string key = a.substr(0, eq), text = a.substr(eq + 1);
    std::istringstream in(text);
    in.imbue(std::locale::classic());
    double v = 0.0;
    if (!(in >> v) || !in.eof()) throw Error(ErrorKind::config, key + ": '" + text + "' is not a number");
    out[key] = v;
  }
  return out;
}

double take(Params& p, const std::string& key, std::optional<double> fallback = std::nullopt) {
  const auto it = p.find(key);
  if (it == p.end()) {
    if (fallback) return *fallback;
    throw Error(ErrorKind::config, "missing parameter '" + key + "'");
  }
  const double v = it->second;
  p.erase(it);
  return v;
}

void reject_leftovers(const Params& p) {
  if (!p.empty()) throw Error(ErrorKind::config, "unknown parameter '" + p.begin()->first + "'");
}

json matrix_json(const qsync::Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

// ------------------------------------------------------------------- oracles

using OracleFn = std::function<json(Params&)>;

const std::map<std::string, std::pair<std::string, OracleFn>>& oracles() {
  static const std::map<std::string, std::pair<std::string, OracleFn>> table{
      {"pl_frequency", {"lambda", [](Params& p) { return json(qsync::pl_frequency(take(p, "lambda"))); }}},
      {"hb_bandwidth",
       {"lambda_bar beta_bar F_bar",
        [](Params& p) {
          const double l = take(p, "lambda_bar"), b = take(p, "beta_bar"), f = take(p, "F_bar");
          return json(qsync::hb_bandwidth(l, b, f));
        }}},
      {"enhancement_threshold",
       {"lambda_bar",
        [](Params& p) {
          const double t = qsync::enhancement_threshold(take(p, "lambda_bar"));
          return std::isinf(t) ? json(nullptr) : json(t);
        }}},
      {"coupled_sync_boundary",
       {"lambda eta",
        [](Params& p) {
          const double l = take(p, "lambda"), e = take(p, "eta");
          return json(qsync::coupled_sync_boundary(l, e));
        }}},
      {"total_bandwidth",
       {"lambda eta_max",
        [](Params& p) {
          const double l = take(p, "lambda"), e = take(p, "eta_max");
          return json(qsync::total_bandwidth(l, e));
        }}},
      {"amplitude_death",
       {"lambda eta delta",
        [](Params& p) {
          const double l = take(p, "lambda"), e = take(p, "eta"), d = take(p, "delta");
          return json{{"condition", qsync::amplitude_death_condition(l, e, d)},
                      {"max_growth_rate", qsync::max_growth_rate(l, e, 1.0, 1.0 + d)}};
        }}},
      {"two_level_sigma",
       {"delta_bar eta_bar",
        [](Params& p) {
          const double d = take(p, "delta_bar"), e = take(p, "eta_bar");
          return json(qsync::two_level_sigma(d, e));
        }}},
      {"two_level_state",
       {"delta_bar eta_bar",
        [](Params& p) {
          const double d = take(p, "delta_bar"), e = take(p, "eta_bar");
          const auto s = qsync::two_level_steady_state(d, e);
          return json{{"rho11", s.rho11},
                      {"rho22", s.rho22},
                      {"rho33", s.rho33},
                      {"rho44", s.rho44},
                      {"rho23", {s.rho23.real(), s.rho23.imag()}},
                      {"amplitude_death", qsync::two_level_is_ad(d, e)}};
        }}},
      {"two_level_ad_threshold",
       {"eta_bar", [](Params& p) { return json(qsync::two_level_ad_threshold(take(p, "eta_bar"))); }}},
      {"two_level_ad_boundary",
       {"delta_bar", [](Params& p) { return json(qsync::two_level_ad_boundary(take(p, "delta_bar", 0.0))); }}},
      {"reactive_sigma",
       {"g gamma",
        [](Params& p) {
          const double g = take(p, "g"), gamma = take(p, "gamma");
          return json(qsync::reactive_sigma(g, gamma));
        }}},
      {"reactive_state",
       {"g gamma",
        [](Params& p) {
          const double g = take(p, "g"), gamma = take(p, "gamma");
          return matrix_json(qsync::reactive_three_level_state(g, gamma).data());
        }}},
  };
  return table;
}

int run_oracle(const std::string& name, const std::vector<std::string>& args) {
  const auto it = oracles().find(name);
  if (it == oracles().end()) {
    std::string names;
    for (const auto& [k, v] : oracles()) names += "\n  " + k + " " + v.first;
    throw Error(ErrorKind::config, "unknown oracle '" + name + "'; available:" + names);
  }
  Params p = parse_params(args);
  const json value = it->second.second(p);
  reject_leftovers(p);
  std::cout << json{{"oracle", name}, {"value", value}}.dump(2) << "\n";
  return kOk;
}

// ------------------------------------------------------------------ converge

std::function<qsync::Liouvillian(int)> builder_for(const std::string& model, Params& p) {
  if (model == "approx_dvdp" || model == "exact_dvdp") {
    qsync::DvdpParams d;
    d.lambda = take(p, "lambda");
    d.beta = take(p, "beta", 0.0);
    d.r = take(p, "r", 1.0);
    d.F = take(p, "F", 0.0);
    d.omega_d = take(p, "omega_d", 1.0);
    d.validate();
    if (model == "approx_dvdp") return [d](int N) { return qsync::build_approx_dvdp(d, N); };
    return [d](int N) { return qsync::build_exact_dvdp(d, N); };
  }
  if (model == "coupled_dissipative" || model == "coupled_reactive") {
    qsync::CoupledParams c;
    c.lambda = take(p, "lambda");
    c.r = take(p, "r", 1.0);
    c.delta = take(p, "delta", 0.0);
    c.eta = take(p, "eta", 0.0);
    c.g = take(p, "g", 0.0);
    c.beta = take(p, "beta", 0.0);
    c.validate();
    if (model == "coupled_dissipative") return [c](int N) { return qsync::build_coupled_dissipative(c, N); };
    return [c](int N) { return qsync::build_coupled_reactive(c, N); };
  }
  if (model == "deep_quantum") {
    qsync::DeepQuantumParams d;
    d.kappa = take(p, "kappa", 1.0);
    d.gamma = take(p, "gamma");
    d.delta = take(p, "delta", 0.0);
    d.eta = take(p, "eta", 0.0);
    d.validate();
    return [d](int N) { return qsync::build_deep_quantum_sl(d, N); };
  }
  throw Error(ErrorKind::config,
              "model '" + model + "' has no truncation to converge; use approx_dvdp, exact_dvdp, coupled_dissipative, "
              "coupled_reactive or deep_quantum");
}

int run_converge(const std::string& model, const std::vector<std::string>& args, int start, int cap) {
  Params p = parse_params(args);
  const auto builder = builder_for(model, p);
  reject_leftovers(p);
  qsync::ConvergeOptions opt;
  opt.cap = cap;
  const qsync::ConvergeResult r = qsync::converge_truncation(builder, start, opt);
  json hist = json::array();
  for (const auto& s : r.history)
    hist.push_back({{"N", s.N},
                    {"peak_frequency", s.peak_frequency},
                    {"peak_value", s.peak_value},
                    {"domega", s.domega},
                    {"tail", s.tail}});
  std::cout << json{{"model", model}, {"N", r.N}, {"history", hist}}.dump(2) << "\n";
  return kOk;
}

// --------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string config;
  int jobs = 0;
  std::string out = ".";
  std::string format = "csv,json";
  std::optional<std::uint64_t> seed;
  std::string stem;
};

int run_sweep_cmd(const SweepArgs& a) {
  qsync::SweepConfig cfg = qsync::SweepConfig::from_file(a.config);
  if (a.seed) cfg.solver.seed = *a.seed;
  cfg.validate();

  qsync::EmitOptions eo{false, false, a.stem.empty() ? std::filesystem::path(a.config).stem().string() : a.stem};
  std::stringstream fs(a.format);
  for (std::string f; std::getline(fs, f, ',');) {
    if (f == "csv")
      eo.csv = true;
    else if (f == "json")
      eo.json = true;
    else
      throw Error(ErrorKind::config, "--format: unknown format '" + f + "'");
  }
  if (!eo.csv && !eo.json) throw Error(ErrorKind::config, "--format: nothing to write");

  const qsync::SweepResult r = qsync::run_sweep(cfg, a.jobs);
  for (const auto& path : qsync::emit(r, a.out, eo)) std::cerr << "wrote " << path.string() << "\n";
  const std::size_t failed = r.failed();
  if (failed > 0) std::cerr << failed << " of " << r.cells.size() << " cells failed\n";
  return failed == r.cells.size() ? kAllFailed : kOk;
}

int run_models() {
  json out = json::object();
  for (const std::string& m : qsync::sweep_models())
    out[m] = {{"parameters", qsync::model_parameters(m)}, {"measures", qsync::model_measures(m)}};
  std::cout << out.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsync: quantum and classical van der Pol synchronization toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(QSYNC_CLI_VERSION));

  SweepArgs sw;
  std::uint64_t seed = 0;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter sweep described by a YAML config");
  sweep->add_option("config", sw.config, "Config file")->required();
  sweep->add_option("--jobs,-j", sw.jobs, "Worker threads (0: QSYNC_JOBS or hardware concurrency)");
  sweep->add_option("--out,-o", sw.out, "Output directory");
  sweep->add_option("--format", sw.format, "Comma-separated output formats: csv, json");
  auto* seed_opt = sweep->add_option("--seed", seed, "Override solver.seed");
  sweep->add_option("--stem", sw.stem, "Output file stem (default: config file stem)");

  std::string oracle_name;
  std::vector<std::string> oracle_args;
  auto* oracle = app.add_subcommand("oracle", "Evaluate a closed-form reference result");
  oracle->add_option("name", oracle_name, "Oracle name")->required();
  oracle->add_option("params", oracle_args, "key=value parameters");

  std::string conv_model;
  std::vector<std::string> conv_args;
  int conv_start = 10, conv_cap = 60;
  auto* converge = app.add_subcommand("converge", "Grow the Fock truncation until the spectrum converges");
  converge->add_option("model", conv_model, "Model name")->required();
  converge->add_option("params", conv_args, "key=value parameters");
  converge->add_option("--start", conv_start, "Initial truncation")->check(CLI::PositiveNumber);
  converge->add_option("--cap", conv_cap, "Largest truncation tried")->check(CLI::PositiveNumber);

  auto* models = app.add_subcommand("models", "List sweep models with their parameters and measures");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*sweep) {
      if (*seed_opt) sw.seed = seed;
      return run_sweep_cmd(sw);
    }
    if (*oracle) return run_oracle(oracle_name, oracle_args);
    if (*converge) return run_converge(conv_model, conv_args, conv_start, conv_cap);
    if (*models) return run_models();
  } catch (const Error& e) {
    std::cerr << "qsync: " << e.what() << "\n";
    if (e.kind() == ErrorKind::config || e.kind() == ErrorKind::invalid_argument) return kConfig;
    return kRuntime;
  } catch (const std::exception& e) {
    std::cerr << "qsync: " << e.what() << "\n";
    return kRuntime;
  }
  return kRuntime;
}
