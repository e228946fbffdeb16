#pragma once

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lieprop/algebra.hpp"
#include "lieprop/dynamics.hpp"
#include "lieprop/errors.hpp"
#include "lieprop/factorization.hpp"
#include "lieprop/oracle.hpp"
#include "lieprop/propagator.hpp"

namespace lieprop {

using nlohmann::json;

/// Malformed or incomplete scenario configuration.
class ConfigError : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

struct Tolerances {
  double oracle_frobenius = 1e-6;
  double adjoint_frobenius = 1e-6;
  double proposition_residual = 1e-8;
  double norm_drift = 1e-7;
  double schrodinger_residual = 1e-5;
  double group_defect = 1e-10;
};

struct ScenarioConfig {
  AlgebraKind algebra = AlgebraKind::SU2;
  CoefficientField field = ConstantField{};
  Vec3 a0 = Vec3::Zero();
  double t_end = 0.0;
  double dt = 0.0;
  double oracle_dt = 0.0;
  double epsilon = 1e-9;
  Tolerances tolerances;
  std::string output_dir;
  /// The parsed document, echoed into report.json.
  json source;
};

namespace detail {

inline const json& require_key(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) throw ConfigError("missing required key '" + std::string(key) + "' in " + where);
  return j.at(key);
}

inline double read_number(const json& j, const char* key, const std::string& where) {
  const json& v = require_key(j, key, where);
  if (!v.is_number()) throw ConfigError("key '" + std::string(key) + "' in " + where + " must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError("key '" + std::string(key) + "' in " + where + " must be finite");
  return x;
}

inline Vec3 read_vec3(const json& v, const std::string& what) {
  if (!v.is_array() || v.size() != 3) throw ConfigError(what + " must be an array of three numbers");
  Vec3 out;
  for (int i = 0; i < 3; ++i) {
    if (!v[static_cast<std::size_t>(i)].is_number()) throw ConfigError(what + " must be an array of three numbers");
    out(i) = v[static_cast<std::size_t>(i)].get<double>();
  }
  if (!out.allFinite()) throw ConfigError(what + " must be finite");
  return out;
}

inline CoefficientField parse_field(const json& node, const std::filesystem::path& base_dir) {
  const std::string where = "field";
  const json& type_node = require_key(node, "type", where);
  if (!type_node.is_string()) throw ConfigError("field.type must be a string");
  const std::string type = type_node.get<std::string>();
  if (type == "constant") return ConstantField{read_vec3(require_key(node, "h", where), "field.h")};
  if (type == "rotating_transverse")
    return RotatingTransverseField{read_number(node, "omega1", where), read_number(node, "omega", where),
                                   read_number(node, "omega0", where)};
  if (type == "linear_sweep")
    return LinearSweepField{read_number(node, "omega1", where), read_number(node, "rate", where),
                            node.contains("offset") ? read_number(node, "offset", where) : 0.0};
  if (type == "tabulated") {
    if (node.contains("csv")) {
      std::filesystem::path p = node.at("csv").get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      return load_tabulated_csv(p.string());
    }
    const json& rows = require_key(node, "samples", where);
    if (!rows.is_array()) throw ConfigError("field.samples must be an array of [t, h1, h2, h3] rows");
    std::vector<double> times;
    std::vector<Vec3> values;
    for (const auto& row : rows) {
      if (!row.is_array() || row.size() != 4) throw ConfigError("field.samples rows must have four numbers");
      times.push_back(row[0].get<double>());
      values.emplace_back(row[1].get<double>(), row[2].get<double>(), row[3].get<double>());
    }
    return TabulatedField(std::move(times), std::move(values));
  }
  if (type == "piecewise_constant") {
    PiecewiseConstantField f;
    f.segment = read_number(node, "segment", where);
    if (!(f.segment > 0.0)) throw ConfigError("field.segment must be positive");
    const json& vals = require_key(node, "values", where);
    if (!vals.is_array() || vals.empty()) throw ConfigError("field.values must be a non-empty array");
    for (const auto& v : vals) f.values.push_back(read_vec3(v, "field.values entry"));
    return f;
  }
  throw ConfigError("unknown field type '" + type + "'");
}

}  // namespace detail

/// Built-in scenarios. All run over t in [0, 10] with dt = 1e-3 and an oracle
/// step of 1e-4.
inline json preset_config(const std::string& name) {
  json base = {{"t_end", 10.0}, {"dt", 1e-3}, {"oracle_dt", 1e-4}, {"epsilon", 1e-9}};
  const json su11_field = {{"type", "rotating_transverse"}, {"omega1", 0.4}, {"omega", 1.0}, {"omega0", 1.5}};
  if (name == "larmor") {
    base["algebra"] = "su2";
    base["field"] = {{"type", "constant"}, {"h", {0.0, 0.0, 1.0}}};
    base["a0"] = {0.0, 1.0, 0.0};
  } else if (name == "rotating_field") {
    base["algebra"] = "su2";
    base["field"] = {{"type", "rotating_transverse"}, {"omega1", 1.0}, {"omega", 3.0}, {"omega0", 5.0}};
    base["a0"] = {0.0, 1.0, 0.5};
  } else if (name == "linear_sweep") {
    base["algebra"] = "su2";
    base["field"] = {{"type", "linear_sweep"}, {"omega1", 0.5}, {"rate", 0.4}, {"offset", -2.0}};
    base["a0"] = {1.0, 0.0, 0.0};
  } else if (name == "su11_generic") {
    base["algebra"] = "su11";
    base["field"] = su11_field;
    base["a0"] = {0.0, 2.0, 1.0};
  } else if (name == "su11_null") {
    base["algebra"] = "su11";
    base["field"] = su11_field;
    base["a0"] = {0.0, 1.0, 1.0};
  } else if (name == "su11_timelike") {
    base["algebra"] = "su11";
    base["field"] = su11_field;
    base["a0"] = {0.5, 0.0, 1.0};
  } else {
    throw ConfigError("unknown preset '" + name + "'");
  }
  return base;
}

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"larmor",       "rotating_field", "linear_sweep",
                                                 "su11_generic", "su11_null",      "su11_timelike"};
  return names;
}

/// Parses a scenario document. A `preset` key supplies defaults that the
/// remaining keys override.
inline ScenarioConfig parse_config(json doc, const std::filesystem::path& base_dir = ".") {
  if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
  if (doc.contains("preset")) {
    json merged = preset_config(doc.at("preset").get<std::string>());
    json overrides = doc;
    overrides.erase("preset");
    merged.merge_patch(overrides);
    doc = std::move(merged);
  }
  ScenarioConfig cfg;
  cfg.source = doc;
  const json& alg = detail::require_key(doc, "algebra", "config");
  if (!alg.is_string()) throw ConfigError("algebra must be \"su2\" or \"su11\"");
  try {
    cfg.algebra = parse_algebra(alg.get<std::string>());
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  cfg.field = detail::parse_field(detail::require_key(doc, "field", "config"), base_dir);
  cfg.a0 = detail::read_vec3(detail::require_key(doc, "a0", "config"), "a0");
  cfg.t_end = detail::read_number(doc, "t_end", "config");
  cfg.dt = detail::read_number(doc, "dt", "config");
  cfg.oracle_dt = doc.contains("oracle_dt") ? detail::read_number(doc, "oracle_dt", "config") : cfg.dt;
  cfg.epsilon = doc.contains("epsilon") ? detail::read_number(doc, "epsilon", "config") : 1e-9;
  if (doc.contains("output_dir")) cfg.output_dir = doc.at("output_dir").get<std::string>();

  if (!(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("t_end must be positive");
  if (!(cfg.oracle_dt > 0.0) || cfg.oracle_dt > cfg.dt) throw ConfigError("oracle_dt must be positive and <= dt");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (cfg.a0.isZero(0.0)) throw ConfigError("a0 must be nonzero");

  if (doc.contains("tolerances")) {
    const json& t = doc.at("tolerances");
    auto read = [&t](const char* key, double& slot) {
      if (t.contains(key)) slot = detail::read_number(t, key, "tolerances");
    };
    read("oracle_frobenius", cfg.tolerances.oracle_frobenius);
    read("adjoint_frobenius", cfg.tolerances.adjoint_frobenius);
    read("proposition_residual", cfg.tolerances.proposition_residual);
    read("norm_drift", cfg.tolerances.norm_drift);
    read("schrodinger_residual", cfg.tolerances.schrodinger_residual);
    read("group_defect", cfg.tolerances.group_defect);
  }
  try {
    make_grid(cfg.t_end, cfg.dt);
    substeps_for(cfg.dt, cfg.oracle_dt);
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

inline ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(std::move(doc), path.parent_path());
}

struct CheckResult {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass() const { return value <= tolerance; }
};

struct ScenarioResult {
  ScenarioConfig config;
  Trajectory trajectory;
  FactorizationRecord record;
  PropagatorSeries series;
  ComparisonReport report;
  double proposition_residual = 0.0;
  double group_defect = 0.0;
  std::vector<CheckResult> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass(); });
  }
};

/// integrate -> factorize -> assemble -> verify.
inline ScenarioResult run_pipeline(const ScenarioConfig& cfg) {
  ScenarioResult out;
  out.config = cfg;
  const TimeGrid grid = make_grid(cfg.t_end, cfg.dt);
  out.trajectory = integrate_special_solution(cfg.algebra, cfg.field, cfg.a0, grid, cfg.epsilon);
  out.record = factorize(out.trajectory);
  out.series = build_propagator(out.record);
  const auto k = k_coefficients(out.record, out.trajectory);
  out.proposition_residual = proposition_residual(out.record, out.trajectory, k);
  out.group_defect = group_defect(out.series.U, cfg.algebra);
  const auto direct = propagate_direct(cfg.algebra, cfg.field, grid, substeps_for(cfg.dt, cfg.oracle_dt));
  out.report = compare(out.series, direct, out.trajectory);

  const Tolerances& tol = cfg.tolerances;
  const double n0 = std::abs(out.trajectory.killing_norm(0));
  out.checks = {
      {"proposition_residual", out.proposition_residual, tol.proposition_residual},
      {"norm_drift", out.report.max_norm_drift, tol.norm_drift * (1.0 + n0)},
      {"schrodinger_residual", out.report.max_schrodinger_residual, tol.schrodinger_residual},
      {"oracle_frobenius_U", out.report.max_frobenius_U, tol.oracle_frobenius},
      {"adjoint_frobenius_a", out.report.max_frobenius_a, tol.adjoint_frobenius},
      {"group_defect", out.group_defect, tol.group_defect},
  };
  return out;
}

/// Shortest decimal string that round-trips to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, ptr);
}

inline void write_trajectory_csv(std::ostream& os, const ScenarioResult& r) {
  const auto& tr = r.trajectory;
  os << "t,a1,a2,a3,z,lambda_or_mu\n";
  for (std::size_t i = 0; i < tr.a.size(); ++i) {
    const Vec3& a = tr.a[i];
    const double radius = tr.kind == AlgebraKind::SU2 ? su2_radius(a) : su11_radius(a);
    os << format_double(tr.grid.time(i)) << ',' << format_double(a(0)) << ',' << format_double(a(1)) << ','
       << format_double(a(2)) << ',' << format_double(transverse_radius(a)) << ',' << format_double(radius) << '\n';
  }
}

inline void write_factorization_csv(std::ostream& os, const ScenarioResult& r) {
  const auto& rec = r.record;
  os << "t,phi,second_angle,alpha,tau,branch\n";
  for (std::size_t i = 0; i < rec.size(); ++i) {
    os << format_double(rec.grid.time(i)) << ',' << format_double(rec.phi[i]) << ',' << format_double(rec.second[i])
       << ',' << format_double(rec.alpha[i]) << ',' << format_double(rec.tau[i]) << ',' << to_string(rec.branch)
       << '\n';
  }
}

inline void write_propagator_csv(std::ostream& os, const ScenarioResult& r) {
  const auto& s = r.series;
  os << "t";
  for (const char* m : {"V", "U"})
    for (const char* e : {"11", "12", "21", "22"}) os << ",Re" << m << e << ",Im" << m << e;
  os << '\n';
  for (std::size_t i = 0; i < s.size(); ++i) {
    os << format_double(s.grid.time(i));
    for (const Mat2C* m : {&s.V[i], &s.U[i]})
      for (int row = 0; row < 2; ++row)
        for (int col = 0; col < 2; ++col)
          os << ',' << format_double((*m)(row, col).real()) << ',' << format_double((*m)(row, col).imag());
    os << '\n';
  }
}

inline json report_json(const ScenarioResult& r) {
  json j = to_json(r.report);
  j["algebra"] = std::string(to_string(r.config.algebra));
  j["branch"] = std::string(to_string(r.record.branch));
  j["proposition_residual"] = r.proposition_residual;
  j["group_defect"] = r.group_defect;
  j["min_transverse_radius"] = r.trajectory.min_transverse;
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back({{"name", c.name}, {"value", c.value}, {"tolerance", c.tolerance}, {"pass", c.pass()}});
  j["checks"] = checks;
  j["passed"] = r.passed();
  j["config"] = r.config.source;
  return j;
}

inline void write_outputs(const ScenarioResult& r, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  auto open = [&dir](const char* name) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw InvalidArgument("cannot write '" + (dir / name).string() + "'");
    return os;
  };
  {
    auto os = open("trajectory.csv");
    write_trajectory_csv(os, r);
  }
  {
    auto os = open("factorization.csv");
    write_factorization_csv(os, r);
  }
  {
    auto os = open("propagator.csv");
    write_propagator_csv(os, r);
  }
  {
    auto os = open("report.json");
    os << report_json(r).dump(2) << '\n';
  }
}

inline void print_check_table(std::ostream& os, const ScenarioResult& r) {
  os << "algebra " << to_string(r.config.algebra) << ", branch " << to_string(r.record.branch) << '\n';
  for (const auto& c : r.checks) {
    os << std::left << std::setw(24) << c.name << ' ' << std::setw(6) << (c.pass() ? "PASS" : "FAIL") << ' '
       << std::scientific << std::setprecision(3) << c.value << " <= " << c.tolerance << '\n';
  }
  os << std::defaultfloat;
}

/// Expands a `sweep` block ({"dotted.path": [values...], ...}) into the
/// cartesian product of configuration documents, in key order.
inline std::vector<json> expand_sweep(const json& doc) {
  json base = doc;
  if (!base.contains("sweep")) return {base};
  const json axes = base.at("sweep");
  base.erase("sweep");
  if (!axes.is_object() || axes.empty()) throw ConfigError("sweep must be a non-empty object of value lists");
  std::vector<json> points = {base};
  for (const auto& [key, values] : axes.items()) {
    if (!values.is_array() || values.empty()) throw ConfigError("sweep axis '" + key + "' must be a non-empty array");
    std::string pointer = "/" + key;
    std::replace(pointer.begin(), pointer.end(), '.', '/');
    std::vector<json> next;
    for (const auto& p : points) {
      for (const auto& v : values) {
        json q = p;
        q[json::json_pointer(pointer)] = v;
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

}  // namespace lieprop
