#pragma once

// Configuration-driven parameter sweeps over one or two axes, evaluated on a
// worker pool with per-cell error isolation, plus CSV / JSON emission.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace qsync {

struct Axis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  int count = 2;
  bool log = false;

  std::vector<double> values() const;
};

struct SolverOverrides {
  /// Fock truncation per oscillator; 0 picks the model default.
  int N = 0;
  int truncation_cap = 60;
  double rtol = 1e-8;
  double atol = 1e-10;
  /// Frequency-locking tolerance; <= 0 selects max(2 dw, 1e-3) (quantum) or 1e-3 (classical).
  double locking_threshold = 0.0;
  std::uint64_t seed = 1;
};

struct SweepConfig {
  std::string model;
  std::string measure;
  std::vector<Axis> axes;
  std::map<std::string, double> fixed;
  SolverOverrides solver;

  /// Throws Error(config) with a message naming the offending field.
  void validate() const;

  static SweepConfig from_yaml(const std::string& text);
  static SweepConfig from_file(const std::filesystem::path& path);
  /// JSON form; accepted back by from_yaml since YAML is a superset.
  std::string to_json() const;
};

/// Model names accepted in SweepConfig::model.
const std::vector<std::string>& sweep_models();
/// Parameter names a model accepts on axes or in `fixed`.
std::vector<std::string> model_parameters(const std::string& model);
/// Measures a model supports.
std::vector<std::string> model_measures(const std::string& model);

struct CellResult {
  std::vector<double> coords;
  double value = 0.0;
  /// Classification label, or empty.
  std::string label;
  /// "ok" or "error:<kind>".
  std::string status = "ok";
  std::string message;
  int N = 0;
  double residual = 0.0;
  double runtime = 0.0;
  std::uint64_t seed = 0;
};

struct SweepResult {
  SweepConfig config;
  std::vector<CellResult> cells;
  std::string version;

  std::size_t failed() const;
};

/// Deterministic per-cell seed derived from the sweep seed and the flat cell index.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t index);

/// Evaluates every cell; jobs <= 0 uses QSYNC_JOBS or the hardware concurrency.
SweepResult run_sweep(const SweepConfig& config, int jobs = 0);
/// Evaluates a single parameter point.
CellResult evaluate_cell(const SweepConfig& config, const std::map<std::string, double>& params, std::uint64_t seed);

/// Shortest round-trip decimal text, independent of the C locale.
std::string format_number(double v);

std::string to_csv(const SweepResult& r);
std::string to_json_sidecar(const SweepResult& r);
std::string to_timing_csv(const SweepResult& r);

struct EmitOptions {
  bool csv = true;
  bool json = true;
  std::string stem = "sweep";
};

/// Writes <stem>.csv, <stem>.json and <stem>.timing.csv into `dir`; returns the paths written.
std::vector<std::filesystem::path> emit(const SweepResult& r, const std::filesystem::path& dir,
                                        const EmitOptions& opt = {});

}  // namespace qsync
