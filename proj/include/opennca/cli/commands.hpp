#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "opennca/analysis.hpp"
#include "opennca/case_study.hpp"

namespace opennca::cli {

/// Everything a single solve produces, before serialization.
struct Simulation {
  nca::PropagatorHistory history;
  std::vector<OperatorMatrix> states;
  analysis::ObservableSeries occupation;
  std::vector<double> trace_err;
  analysis::SpectrumSeries spectrum;
  std::vector<double> min_eig;
  double runtime_seconds = 0.0;
};

Simulation simulate(const case_study::RunConfig& cfg);

/// Solve, analyse, write occupation.csv / spectrum.csv / states.csv as requested
/// and summary.json last. Returns the summary document.
nlohmann::json run(const case_study::RunConfig& cfg);

struct SweepRow {
  double value = 0.0;
  double n_final = 0.0;
  bool stationary = false;
};

/// param in {eta, w, gamma_d, eps0}; writes sweep_<param>.csv sorted by value.
/// With keep_runs each run's occupation.csv goes to <out_dir>/<param>_<value>/.
std::vector<SweepRow> sweep(const case_study::RunConfig& cfg, const std::string& param,
                            const std::vector<double>& values, int jobs = 1, bool keep_runs = false);

/// Applies one sweep parameter to a config copy (ConfigError for unknown names).
case_study::RunConfig with_parameter(case_study::RunConfig cfg, const std::string& param, double value);

struct ConvergenceReport {
  std::vector<double> dts;
  /// max_t |n_dt[i](t) - n_dt[i+1](t)| on the coarsest grid.
  std::vector<double> differences;
  /// Per consecutive pair of differences.
  std::vector<std::optional<double>> pair_orders;
  /// Least-squares slope of log(difference) vs log(dt); empty when undefined.
  std::optional<double> fitted_order;
  bool order_undefined = false;
};

/// GridError if a coarser dt is not an integer multiple of a finer one.
ConvergenceReport converge(const case_study::RunConfig& cfg, const std::vector<double>& dts, int jobs = 1);

nlohmann::json to_json(const ConvergenceReport& report);

struct OracleReport {
  double t = 0.0;
  double quad_dt = 0.0;
  double relative_deviation = 0.0;
  double bare_norm = 0.0;
  bool pass = false;
};

/// Compares the bare first-order diagram with the first Dyson iterate at time t.
OracleReport oracle(const case_study::RunConfig& cfg, double t, double quad_dt);

nlohmann::json to_json(const OracleReport& report);

}  // namespace opennca::cli
