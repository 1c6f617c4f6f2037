#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include "qsync/errors.hpp"
#include "qsync/sweep.hpp"

namespace qsync {

namespace {

using json = nlohmann::json;

template <class T>
T scalar(const YAML::Node& n, const std::string& where) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw Error(ErrorKind::config, where + ": expected a " + (std::is_same_v<T, std::string> ? "string" : "number"));
  }
}

void check_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : n) {
    const auto k = kv.first.as<std::string>();
    if (!allowed.count(k)) throw Error(ErrorKind::config, where + ": unknown key '" + k + "'");
  }
}

json config_json(const SweepConfig& c) {
  json j;
  j["model"] = c.model;
  j["measure"] = c.measure;
  j["axes"] = json::array();
  for (const Axis& a : c.axes)
    j["axes"].push_back({{"name", a.name}, {"min", a.min}, {"max", a.max}, {"count", a.count}, {"scale", a.log ? "log" : "linear"}});
  j["fixed"] = json::object();
  for (const auto& [k, v] : c.fixed) j["fixed"][k] = v;
  j["solver"] = {{"N", c.solver.N},
                 {"truncation_cap", c.solver.truncation_cap},
                 {"rtol", c.solver.rtol},
                 {"atol", c.solver.atol},
                 {"locking_threshold", c.solver.locking_threshold},
                 {"seed", c.solver.seed}};
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return out + "\"";
}

void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::io, "cannot open '" + p.string() + "' for writing");
  f << text;
  if (!f) throw Error(ErrorKind::io, "write to '" + p.string() + "' failed");
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

SweepConfig SweepConfig::from_yaml(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw Error(ErrorKind::config, std::string("config is not valid YAML: ") + e.what());
  }
  if (!root.IsMap()) throw Error(ErrorKind::config, "config must be a mapping");
  check_keys(root, {"model", "measure", "axes", "fixed", "solver"}, "config");
  SweepConfig c;
  if (!root["model"]) throw Error(ErrorKind::config, "model: missing");
  if (!root["measure"]) throw Error(ErrorKind::config, "measure: missing");
  c.model = scalar<std::string>(root["model"], "model");
  c.measure = scalar<std::string>(root["measure"], "measure");
  const YAML::Node axes = root["axes"];
  if (!axes || !axes.IsSequence()) throw Error(ErrorKind::config, "axes: expected a list");
  for (std::size_t i = 0; i < axes.size(); ++i) {
    const YAML::Node a = axes[i];
    const std::string where = "axes[" + std::to_string(i) + "]";
    if (!a.IsMap()) throw Error(ErrorKind::config, where + ": expected a mapping");
    check_keys(a, {"name", "min", "max", "count", "scale"}, where);
    for (const char* k : {"name", "min", "max", "count"})
      if (!a[k]) throw Error(ErrorKind::config, where + "." + k + ": missing");
    Axis ax;
    ax.name = scalar<std::string>(a["name"], where + ".name");
    ax.min = scalar<double>(a["min"], where + ".min");
    ax.max = scalar<double>(a["max"], where + ".max");
    ax.count = scalar<int>(a["count"], where + ".count");
    if (a["scale"]) {
      const auto s = scalar<std::string>(a["scale"], where + ".scale");
      if (s != "linear" && s != "log") throw Error(ErrorKind::config, where + ".scale: expected linear or log");
      ax.log = s == "log";
    }
    c.axes.push_back(ax);
  }
  if (const YAML::Node f = root["fixed"]) {
    if (!f.IsMap()) throw Error(ErrorKind::config, "fixed: expected a mapping");
    for (const auto& kv : f) {
      const auto k = kv.first.as<std::string>();
      c.fixed[k] = scalar<double>(kv.second, "fixed." + k);
    }
  }
  if (const YAML::Node s = root["solver"]) {
    if (!s.IsMap()) throw Error(ErrorKind::config, "solver: expected a mapping");
    check_keys(s, {"N", "truncation_cap", "rtol", "atol", "locking_threshold", "seed"}, "solver");
    if (s["N"]) c.solver.N = scalar<int>(s["N"], "solver.N");
    if (s["truncation_cap"]) c.solver.truncation_cap = scalar<int>(s["truncation_cap"], "solver.truncation_cap");
    if (s["rtol"]) c.solver.rtol = scalar<double>(s["rtol"], "solver.rtol");
    if (s["atol"]) c.solver.atol = scalar<double>(s["atol"], "solver.atol");
    if (s["locking_threshold"]) c.solver.locking_threshold = scalar<double>(s["locking_threshold"], "solver.locking_threshold");
    if (s["seed"]) c.solver.seed = scalar<std::uint64_t>(s["seed"], "solver.seed");
  }
  c.validate();
  return c;
}

SweepConfig SweepConfig::from_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::io, "cannot read config '" + path.string() + "'");
  std::ostringstream ss;
  ss << f.rdbuf();
  try {
    return from_yaml(ss.str());
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::config) throw;
    throw Error(ErrorKind::config, path.string() + ": " + e.what());
  }
}

std::string SweepConfig::to_json() const { return config_json(*this).dump(2); }

std::string to_csv(const SweepResult& r) {
  std::string out;
  for (const Axis& a : r.config.axes) out += a.name + ",";
  out += r.config.measure + ",label,status,N,residual\n";
  for (const CellResult& c : r.cells) {
    for (double v : c.coords) out += format_number(v) + ",";
    out += format_number(c.value) + "," + csv_field(c.label) + "," + csv_field(c.status) + "," + std::to_string(c.N) + "," +
           format_number(c.residual) + "\n";
  }
  return out;
}

std::string to_json_sidecar(const SweepResult& r) {
  json j;
  j["version"] = r.version;
  j["config"] = config_json(r.config);
  json cells = json::array();
  for (const CellResult& c : r.cells) {
    json jc;
    jc["coords"] = c.coords;
    jc["value"] = std::isfinite(c.value) ? json(c.value) : json(format_number(c.value));
    jc["label"] = c.label;
    jc["status"] = c.status;
    jc["message"] = c.message;
    jc["N"] = c.N;
    jc["residual"] = c.residual;
    jc["seed"] = c.seed;
    cells.push_back(std::move(jc));
  }
  j["cells"] = std::move(cells);
  j["failed"] = r.failed();
  return j.dump(2) + "\n";
}

std::string to_timing_csv(const SweepResult& r) {
  std::string out = "cell,runtime_s\n";
  for (std::size_t i = 0; i < r.cells.size(); ++i) out += std::to_string(i) + "," + format_number(r.cells[i].runtime) + "\n";
  return out;
}

std::vector<std::filesystem::path> emit(const SweepResult& r, const std::filesystem::path& dir, const EmitOptions& opt) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory '" + dir.string() + "': " + ec.message());
  std::vector<std::filesystem::path> written;
  auto put = [&](const std::string& suffix, const std::string& text) {
    const auto p = dir / (opt.stem + suffix);
    write_file(p, text);
    written.push_back(p);
  };
  if (opt.csv) put(".csv", to_csv(r));
  if (opt.json) put(".json", to_json_sidecar(r));
  put(".timing.csv", to_timing_csv(r));
  return written;
}

}  // namespace qsync
