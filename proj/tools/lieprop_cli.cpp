// Scenario runner: integrate the special solution, factorize it, assemble
// V(t) and U(t), and verify against the direct propagator.
//
// Exit codes: 0 all checks pass, 1 a tolerance failed, 2 configuration
// error, 3 degenerate axis.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <cstdio>
#include <sstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lieprop/lieprop.hpp"

namespace fs = std::filesystem;
using lieprop::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDegenerate = 3;

constexpr const char* kOutDirEnv = "LIEPROP_OUT_DIR";

struct Options {
  std::string config_path;
  std::string preset;
  std::string out_dir;
  bool quiet = false;
};

json load_document(const Options& opt, fs::path& base_dir) {
  if (!opt.config_path.empty() && !opt.preset.empty())
    throw lieprop::ConfigError("--config and --preset are mutually exclusive");
  if (!opt.preset.empty()) {
    base_dir = ".";
    return json{{"preset", opt.preset}};
  }
  if (opt.config_path.empty()) throw lieprop::ConfigError("one of --config or --preset is required");
  std::ifstream in(opt.config_path);
  if (!in) throw lieprop::ConfigError("cannot open config '" + opt.config_path + "'");
  base_dir = fs::path(opt.config_path).parent_path();
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw lieprop::ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
}

fs::path resolve_out_dir(const Options& opt, const lieprop::ScenarioConfig& cfg) {
  if (!opt.out_dir.empty()) return opt.out_dir;
  if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') return env;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return "lieprop_out";
}

/// Runs one scenario and maps the outcome onto the exit-code contract.
/// `out_dir` maps the parsed config to an output directory; empty means no
/// series files are written.
int execute(const json& doc, const fs::path& base_dir,
            const std::function<fs::path(const lieprop::ScenarioConfig&)>& out_dir, bool quiet, std::ostream& log,
            std::ostream& err) {
  try {
    const lieprop::ScenarioConfig cfg = lieprop::parse_config(doc, base_dir);
    const lieprop::ScenarioResult result = lieprop::run_pipeline(cfg);
    if (out_dir) {
      const fs::path dir = out_dir(cfg);
      lieprop::write_outputs(result, dir);
      if (!quiet) log << "outputs written to " << dir.string() << '\n';
    }
    if (!quiet) lieprop::print_check_table(log, result);
    return result.passed() ? kExitOk : kExitTolerance;
  } catch (const lieprop::DegenerateAxis& e) {
    err << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const lieprop::SignViolation& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lieprop::InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const lieprop::Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitTolerance;
  }
}

int cmd_run(const Options& opt, bool write_series) {
  fs::path base_dir;
  json doc;
  try {
    doc = load_document(opt, base_dir);
    if (doc.contains("sweep")) throw lieprop::ConfigError("config contains a sweep block; use the sweep subcommand");
  } catch (const lieprop::Error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (!write_series) return execute(doc, base_dir, {}, opt.quiet, std::cout, std::cerr);
  return execute(
      doc, base_dir, [&opt](const lieprop::ScenarioConfig& cfg) { return resolve_out_dir(opt, cfg); }, opt.quiet,
      std::cout, std::cerr);
}

int cmd_sweep(const Options& opt) {
  fs::path base_dir;
  std::vector<json> points;
  fs::path root;
  try {
    const json doc = load_document(opt, base_dir);
    points = lieprop::expand_sweep(doc);
    json probe = points.front();
    root = resolve_out_dir(opt, lieprop::parse_config(probe, base_dir));
  } catch (const lieprop::DegenerateAxis& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::size_t n = points.size();
  std::vector<int> codes(n, kExitOk);
  std::vector<std::string> errors(n);
  const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(n, std::thread::hardware_concurrency()));
  std::vector<std::future<void>> jobs;
  for (std::size_t w = 0; w < workers; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t i = w; i < n; i += workers) {
        char name[32];
        std::snprintf(name, sizeof(name), "point_%04zu", i);
        const fs::path dir = root / name;
        std::ostringstream log;
        std::ostringstream err;
        codes[i] = execute(
            points[i], base_dir, [&dir](const lieprop::ScenarioConfig&) { return dir; }, true, log, err);
        errors[i] = err.str();
        if (codes[i] == kExitOk || codes[i] == kExitTolerance) {
          std::ofstream(dir / "config.json") << points[i].dump(2) << '\n';
        }
      }
    }));
  }
  for (auto& j : jobs) j.get();

  fs::create_directories(root);
  std::ofstream summary(root / "sweep_summary.csv");
  summary << "point,exit_code\n";
  int worst = kExitOk;
  for (std::size_t i = 0; i < n; ++i) {
    summary << i << ',' << codes[i] << '\n';
    if (!errors[i].empty()) std::cerr << "point " << i << ": " << errors[i];
    // Severity order: config > degenerate > tolerance > ok.
    auto rank = [](int c) { return c == kExitConfig ? 3 : c == kExitDegenerate ? 2 : c == kExitTolerance ? 1 : 0; };
    if (rank(codes[i]) > rank(worst)) worst = codes[i];
  }
  if (!opt.quiet) {
    const auto ok = std::count(codes.begin(), codes.end(), kExitOk);
    std::cout << ok << '/' << n << " sweep points passed; outputs under " << root.string() << '\n';
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie-algebraic propagators for su(2) and su(1,1) Hamiltonians"};
  app.require_subcommand(1);

  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "Scenario configuration (JSON)");
    sub->add_option("--preset", opt.preset, "Built-in scenario name instead of --config");
    sub->add_option("--out", opt.out_dir, std::string("Output directory (overrides ") + kOutDirEnv + ")");
    sub->add_flag("--quiet", opt.quiet, "Suppress the check table");
  };
  auto* run = app.add_subcommand("run", "Run the pipeline and write CSV series plus report.json");
  auto* verify = app.add_subcommand("verify", "Run the invariant checks only and print a pass/fail table");
  auto* sweep = app.add_subcommand("sweep", "Run the cartesian product of a config's sweep block");
  auto* presets = app.add_subcommand("presets", "List built-in scenarios");
  add_common(run);
  add_common(verify);
  add_common(sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*presets) {
    for (const auto& name : lieprop::preset_names()) std::cout << name << '\n';
    return kExitOk;
  }
  if (*run) return cmd_run(opt, true);
  if (*verify) return cmd_run(opt, false);
  return cmd_sweep(opt);
}
