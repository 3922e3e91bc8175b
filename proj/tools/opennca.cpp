// Command-line driver: single runs, parameter sweeps, convergence studies and
// the first-order diagram cross-check.

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "opennca/cli/commands.hpp"
#include "opennca/cli/config_io.hpp"
#include "opennca/cli/output.hpp"
#include "opennca/errors.hpp"

namespace {

using opennca::case_study::RunConfig;
namespace cli = opennca::cli;

constexpr int kExitConfig = 2;
constexpr int kExitDivergence = 3;
constexpr int kExitIo = 4;
constexpr int kExitOracleFail = 1;

struct Source {
  std::string config_path;
  std::string preset;
  std::string out_dir;

  void attach(CLI::App* app) {
    app->add_option("config", config_path, "JSON run configuration");
    app->add_option("--preset", preset, "built-in parameter set instead of a config file");
    app->add_option("--out-dir", out_dir, "override outputs.out_dir");
  }

  RunConfig load() const {
    if (config_path.empty() == preset.empty())
      throw opennca::ConfigError("config", "give exactly one of a config path or --preset");
    RunConfig cfg = preset.empty() ? cli::load_config(config_path) : cli::preset(preset).config;
    if (!out_dir.empty()) cfg.outputs.out_dir = out_dir;
    return cfg;
  }
};

std::vector<double> parse_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (item.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw opennca::ConfigError(field, "cannot parse '" + item + "' as a number");
    }
  }
  return out;
}

int report_error(const opennca::Error& e) {
  nlohmann::json rec{{"error", e.kind()}, {"message", e.what()}};
  int code = kExitConfig;
  if (const auto* c = dynamic_cast<const opennca::ConfigError*>(&e)) {
    rec["field"] = c->field();
    rec["reason"] = c->reason();
  } else if (const auto* d = dynamic_cast<const opennca::DivergenceError*>(&e)) {
    rec["step"] = d->step();
    code = kExitDivergence;
  } else if (dynamic_cast<const opennca::IoError*>(&e)) {
    code = kExitIo;
  } else if (dynamic_cast<const opennca::NumericsError*>(&e)) {
    code = kExitDivergence;
  }
  std::cerr << rec.dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Open-system NCA solver for a fermionic impurity with Markovian and non-Markovian baths"};
  app.require_subcommand(1);

  Source run_src;
  auto* run_cmd = app.add_subcommand("run", "solve one configuration and write CSV/JSON outputs");
  run_src.attach(run_cmd);

  Source sweep_src;
  std::string sweep_param, sweep_values;
  std::optional<std::string> sweep_values_opt;
  int sweep_jobs = 1;
  bool keep_runs = false;
  auto* sweep_cmd = app.add_subcommand("sweep", "run once per parameter value and tabulate n_final");
  sweep_src.attach(sweep_cmd);
  sweep_cmd->add_option("--param", sweep_param, "eta, w, gamma_d or eps0");
  sweep_cmd->add_option("--values", sweep_values_opt, "comma-separated values (may be empty)");
  sweep_cmd->add_option("--jobs", sweep_jobs, "concurrent runs")->check(CLI::PositiveNumber);
  sweep_cmd->add_flag("--keep-runs", keep_runs, "keep each run's occupation.csv");

  Source conv_src;
  std::string conv_dts;
  int conv_jobs = 1;
  auto* conv_cmd = app.add_subcommand("converge", "self-convergence of n(t) over decreasing dt");
  conv_src.attach(conv_cmd);
  conv_cmd->add_option("--dts", conv_dts, "comma-separated dt values, decreasing")->required();
  conv_cmd->add_option("--jobs", conv_jobs, "concurrent runs")->check(CLI::PositiveNumber);

  Source oracle_src;
  double oracle_t = 1.0, quad_dt = 0.005;
  auto* oracle_cmd = app.add_subcommand("oracle", "compare the bare k=1 diagram with the first Dyson iterate");
  oracle_src.attach(oracle_cmd);
  oracle_cmd->add_option("--t", oracle_t, "evaluation time");
  oracle_cmd->add_option("--quad-dt", quad_dt, "quadrature step");

  std::string preset_name;
  auto* preset_cmd = app.add_subcommand("preset", "print a built-in configuration as JSON");
  preset_cmd->add_option("name", preset_name, "preset name")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const auto summary = cli::run(run_src.load());
      std::cout << summary.dump(2) << std::endl;
    } else if (*sweep_cmd) {
      RunConfig cfg = sweep_src.load();
      std::string param = sweep_param;
      std::vector<double> values;
      if (!sweep_src.preset.empty()) {
        const auto p = cli::preset(sweep_src.preset);
        if (param.empty()) param = p.sweep_param;
        if (!sweep_values_opt) values = p.sweep_values;
      }
      if (sweep_values_opt) values = parse_list(*sweep_values_opt, "values");
      if (param.empty()) throw opennca::ConfigError("param", "missing --param");
      const auto rows = cli::sweep(cfg, param, values, sweep_jobs, keep_runs);
      std::cout << param << ",n_final,stationary_flag\n";
      for (const auto& r : rows)
        std::cout << cli::format_double(r.value) << ',' << cli::format_double(r.n_final) << ','
                  << (r.stationary ? 1 : 0) << '\n';
    } else if (*conv_cmd) {
      const RunConfig cfg = conv_src.load();
      const auto report = cli::converge(cfg, parse_list(conv_dts, "dts"), conv_jobs);
      const auto doc = cli::to_json(report);
      cli::write_file_atomic(cfg.outputs.out_dir / "converge_report.json", doc.dump(2) + "\n");
      std::cout << doc.dump(2) << std::endl;
    } else if (*oracle_cmd) {
      const RunConfig cfg = oracle_src.load();
      const auto report = cli::oracle(cfg, oracle_t, quad_dt);
      std::cout << cli::to_json(report).dump(2) << std::endl;
      return report.pass ? 0 : kExitOracleFail;
    } else if (*preset_cmd) {
      std::cout << cli::to_json(cli::preset(preset_name).config).dump(2) << std::endl;
    }
  } catch (const opennca::Error& e) {
    return report_error(e);
  } catch (const std::exception& e) {
    std::cerr << nlohmann::json{{"error", "InternalError"}, {"message", e.what()}}.dump() << std::endl;
    return kExitIo;
  }
  return 0;
}
