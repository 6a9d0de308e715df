// chasym: command-line front end.
//
// Exit codes: 0 success, 1 scenario failed, 2 invalid input, 3 numerical failure.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "chasym/commands.hpp"
#include "chasym/config.hpp"
#include "chasym/errors.hpp"
#include "chasym/kernels.hpp"
#include "chasym/scenarios.hpp"

namespace {

using chasym::json;
namespace fs = std::filesystem;

struct Common {
  std::string config;
  std::string out;
  int threads = -1;
  bool gnuplot = false;
};

void add_common(CLI::App* cmd, Common& c, bool needs_config) {
  auto* opt = cmd->add_option("--config,-c", c.config, "JSON configuration file");
  if (needs_config) opt->required()->check(CLI::ExistingFile);
  cmd->add_option("--out,-o", c.out, "output directory (overrides CHASYM_OUT and the config's output_dir)");
  cmd->add_option("--threads,-t", c.threads, "OpenMP threads, 0 = runtime default (overrides CHASYM_THREADS)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--gnuplot", c.gnuplot, "also write a gnuplot script");
}

const char* env(const char* name) {
  const char* v = std::getenv(name);
  return v != nullptr && *v != '\0' ? v : nullptr;
}

// flag > CHASYM_OUT > config output_dir > fallback
fs::path output_dir(const Common& c, const json& config, const fs::path& fallback) {
  if (!c.out.empty()) return c.out;
  if (const char* e = env("CHASYM_OUT")) return e;
  if (config.is_object() && config.contains("output_dir") && config["output_dir"].is_string()) {
    const auto s = config["output_dir"].get<std::string>();
    if (!s.empty()) return s;
  }
  return fallback;
}

void apply_threads(const Common& c) {
  int n = c.threads;
  if (n < 0) {
    n = 0;
    if (const char* e = env("CHASYM_THREADS")) {
      try {
        std::size_t used = 0;
        n = std::stoi(e, &used);
        if (used != std::string(e).size() || n < 0) throw std::invalid_argument(e);
      } catch (const std::logic_error&) {
        throw chasym::ValidationError(std::string("CHASYM_THREADS: expected a non-negative integer, got '") + e + "'");
      }
    }
  }
  chasym::kernels::set_threads(n);
}

int report_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
  return kind == "validation" ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scaling asymptotics of parabolic equations: classification, linear spectrum, simulation, analysis"};
  app.require_subcommand(1);

  Common c;
  auto* classify = app.add_subcommand("classify", "relevance labels and predicted rates");
  add_common(classify, c, true);

  std::string mode;
  auto* spectrum = app.add_subcommand("spectrum", "linear spectrum, profile and kernel");
  spectrum->add_option("mode", mode, "eig | profile | kernel | decay-fit")
      ->required()
      ->check(CLI::IsMember({"eig", "profile", "kernel", "decay-fit"}));
  add_common(spectrum, c, true);

  auto* simulate = app.add_subcommand("simulate", "physical-frame pseudo-spectral run");
  add_common(simulate, c, true);

  auto* scaled = app.add_subcommand("scaled", "scaled-frame run");
  add_common(scaled, c, true);

  std::string run_dir;
  auto* analyze = app.add_subcommand("analyze", "decay, amplitude and remainder fits of a run");
  analyze->add_option("run_dir", run_dir, "directory written by simulate or scaled")->required();
  add_common(analyze, c, false);

  std::string scenario;
  auto* scen = app.add_subcommand("scenario", "pinned acceptance experiment");
  scen->add_option("name", scenario, "scenario name or 'all'")->required();
  add_common(scen, c, false);

  CLI11_PARSE(app, argc, argv);

  fs::path out;
  try {
    apply_threads(c);
    json config;
    if (!c.config.empty()) config = chasym::load_json(c.config);

    if (*classify) {
      out = output_dir(c, config, "runs/classify");
      const auto summary = chasym::classify_command(config, {out, c.gnuplot});
      std::cout << chasym::classify_table(summary);
    } else if (*spectrum) {
      out = output_dir(c, config, "runs/spectrum");
      std::cout << chasym::spectrum_command(mode, config, {out, c.gnuplot}).dump(2) << "\n";
    } else if (*simulate) {
      out = output_dir(c, config, "runs/simulate");
      std::cout << chasym::simulate_command(config, {out, c.gnuplot}).dump(2) << "\n";
    } else if (*scaled) {
      out = output_dir(c, config, "runs/scaled");
      std::cout << chasym::scaled_command(config, {out, c.gnuplot}).dump(2) << "\n";
    } else if (*analyze) {
      out = output_dir(c, config, fs::path(run_dir) / "analysis");
      std::cout << chasym::analyze_command(run_dir, config, {out, c.gnuplot}).dump(2) << "\n";
    } else if (*scen) {
      const auto base = output_dir(c, json(), "runs/scenarios");
      std::vector<std::string> names;
      if (scenario == "all") {
        names = chasym::scenario_names();
      } else {
        names = {scenario};
      }
      if (names.size() > 1 && !c.config.empty()) throw chasym::ValidationError("--config needs a single scenario");
      bool all_pass = true;
      for (const auto& name : names) {
        const auto r = chasym::run_scenario(name, base / name, c.config);
        std::cout << r.line() << std::endl;
        all_pass &= r.pass();
      }
      return all_pass ? 0 : 1;
    }
  } catch (const chasym::ValidationError& e) {
    return report_error("validation", e.what());
  } catch (const chasym::NumericalFailure& e) {
    // simulate and scaled write their own error.json with the last state
    if (!out.empty() && !fs::exists(out / "error.json")) {
      try {
        chasym::write_failure(out, "numerical", e.what());
      } catch (const std::exception&) {
      }
    }
    return report_error("numerical", e.what());
  } catch (const std::exception& e) {
    return report_error("numerical", e.what());
  }
  return 0;
}
