#include "opennca/cli/commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "opennca/cli/config_io.hpp"
#include "opennca/cli/output.hpp"
#include "opennca/diagrams.hpp"
#include "opennca/errors.hpp"
#include "opennca/parallel.hpp"

namespace opennca::cli {

using case_study::RunConfig;
using nlohmann::json;

Simulation simulate(const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  Simulation sim;
  const auto prob = case_study::make_problem(cfg);
  sim.history = nca::solve_dyson(prob);
  sim.states = analysis::evolve_state(sim.history, case_study::initial_density(cfg));
  sim.occupation = analysis::occupation_series(sim.states, case_study::annihilator(), sim.history.dt);
  sim.trace_err = analysis::trace_errors(sim.states);
  sim.spectrum = analysis::propagator_spectrum(sim.history);
  sim.min_eig = analysis::positivity_monitor(sim.states);
  sim.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return sim;
}

json run(const RunConfig& cfg) {
  const Simulation sim = simulate(cfg);
  const auto& dir = cfg.outputs.out_dir;
  if (cfg.outputs.occupation) write_file_atomic(dir / "occupation.csv", occupation_csv(sim.occupation, sim.trace_err));
  if (cfg.outputs.spectrum) write_file_atomic(dir / "spectrum.csv", spectrum_csv(sim.spectrum));
  if (cfg.outputs.states) write_file_atomic(dir / "states.csv", states_csv(sim.states, sim.history.dt, sim.min_eig));

  json summary;
  summary["config_echo"] = to_json(cfg);
  summary["max_trace_err"] = *std::max_element(sim.trace_err.begin(), sim.trace_err.end());
  summary["max_unit_eig_err"] = *std::max_element(sim.spectrum.unit_eig_err.begin(), sim.spectrum.unit_eig_err.end());
  summary["min_state_eigenvalue"] = *std::min_element(sim.min_eig.begin(), sim.min_eig.end());
  summary["n_final"] = sim.occupation.values.back();
  summary["runtime_seconds"] = sim.runtime_seconds;
  summary["solver_steps"] = sim.history.steps;
  write_file_atomic(dir / "summary.json", summary.dump(2) + "\n");
  return summary;
}

RunConfig with_parameter(RunConfig cfg, const std::string& param, double value) {
  const bool flat = cfg.bath.kind == case_study::BathConfig::Kind::flat_band;
  if (param == "eta" || param == "w") {
    if (!flat) throw ConfigError("param", "'" + param + "' requires a flat_band bath");
    (param == "eta" ? cfg.bath.eta : cfg.bath.w) = value;
  } else if (param == "gamma_d") {
    cfg.model.gamma_d = value;
  } else if (param == "eps0") {
    cfg.model.eps0 = value;
  } else {
    throw ConfigError("param", "unknown sweep parameter '" + param + "' (expected eta, w, gamma_d or eps0)");
  }
  return cfg;
}

std::vector<SweepRow> sweep(const RunConfig& cfg, const std::string& param, const std::vector<double>& values,
                            int jobs, bool keep_runs) {
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  std::vector<RunConfig> configs;
  for (double v : sorted) configs.push_back(with_parameter(cfg, param, v));
  for (const auto& c : configs) c.validate();

  std::vector<SweepRow> rows(sorted.size());
  parallel_for(sorted.size(), jobs, [&](std::size_t k) {
    const Simulation sim = simulate(configs[k]);
    rows[k] = {sorted[k], sim.occupation.values.back(), analysis::is_stationary(sim.occupation.values)};
    if (keep_runs) {
      const auto dir = cfg.outputs.out_dir / (param + "_" + format_double(sorted[k]));
      write_file_atomic(dir / "occupation.csv", occupation_csv(sim.occupation, sim.trace_err));
    }
  });

  std::string csv = param + ",n_final,stationary_flag\n";
  for (const auto& r : rows)
    csv += format_double(r.value) + "," + format_double(r.n_final) + "," + (r.stationary ? "1" : "0") + "\n";
  write_file_atomic(cfg.outputs.out_dir / ("sweep_" + param + ".csv"), csv);
  return rows;
}

ConvergenceReport converge(const RunConfig& cfg, const std::vector<double>& dts, int jobs) {
  if (dts.size() < 3) throw ConfigError("dts", "need at least three time steps");
  for (std::size_t k = 1; k < dts.size(); ++k)
    if (dts[k] > dts[k - 1]) throw ConfigError("dts", "time steps must be given in decreasing order");

  const double coarse = dts.front();
  std::vector<int> stride;
  for (double dt : dts) {
    const double r = coarse / dt;
    if (std::abs(r - std::round(r)) > 1e-9 * r) throw GridError("incompatible grids: dt=" + format_double(dt) +
                                                                " does not divide " + format_double(coarse));
    stride.push_back(static_cast<int>(std::lround(r)));
  }

  std::vector<std::vector<double>> series(dts.size());
  parallel_for(dts.size(), jobs, [&](std::size_t k) {
    RunConfig c = cfg;
    c.grid.dt = dts[k];
    const auto prob = case_study::make_problem(c);
    const auto hist = nca::solve_dyson(prob);
    const auto states = analysis::evolve_state(hist, case_study::initial_density(c));
    series[k] = analysis::occupation_series(states, case_study::annihilator(), hist.dt).values;
  });

  ConvergenceReport rep;
  rep.dts = dts;
  const std::size_t points = series.front().size();
  for (std::size_t k = 0; k + 1 < dts.size(); ++k) {
    double worst = 0.0;
    for (std::size_t i = 0; i < points; ++i) {
      const double a = series[k][i * static_cast<std::size_t>(stride[k])];
      const double b = series[k + 1][i * static_cast<std::size_t>(stride[k + 1])];
      worst = std::max(worst, std::abs(a - b));
    }
    rep.differences.push_back(worst);
  }

  const auto order_between = [&](std::size_t k) -> std::optional<double> {
    const double d1 = rep.differences[k], d2 = rep.differences[k + 1];
    const double ratio = dts[k] / dts[k + 1];
    if (d1 <= 0.0 || d2 <= 0.0 || std::abs(ratio - 1.0) < 1e-12) return std::nullopt;
    return std::log(d1 / d2) / std::log(ratio);
  };
  for (std::size_t k = 0; k + 1 < rep.differences.size(); ++k) rep.pair_orders.push_back(order_between(k));

  // Least squares over (log dt_k, log diff_k), dt_k the coarser member of each pair.
  bool defined = rep.differences.size() >= 2;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(rep.differences.size());
  for (std::size_t k = 0; k < rep.differences.size() && defined; ++k) {
    if (rep.differences[k] <= 0.0) {
      defined = false;
      break;
    }
    const double x = std::log(dts[k]), y = std::log(rep.differences[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = m * sxx - sx * sx;
  if (defined && std::abs(denom) > 1e-12) rep.fitted_order = (m * sxy - sx * sy) / denom;
  rep.order_undefined = !rep.fitted_order.has_value();
  return rep;
}

json to_json(const ConvergenceReport& report) {
  json doc;
  doc["dts"] = report.dts;
  doc["differences"] = report.differences;
  json pairs = json::array();
  for (const auto& o : report.pair_orders) pairs.push_back(o ? json(*o) : json(nullptr));
  doc["pair_orders"] = pairs;
  doc["fitted_order"] = report.fitted_order ? json(*report.fitted_order) : json(nullptr);
  doc["order_undefined"] = report.order_undefined;
  return doc;
}

OracleReport oracle(const RunConfig& cfg, double t, double quad_dt) {
  cfg.validate();
  if (!(quad_dt > 0.0)) throw ConfigError("quad_dt", "must be > 0");
  if (!(t >= 0.0) || t > cfg.grid.t_max + 1e-9 * cfg.grid.t_max)
    throw ConfigError("t", "must lie in [0, grid.t_max]");
  RunConfig c = cfg;
  c.grid.dt = quad_dt;
  c.grid.t_max = hybridization::lag_index(t, 0.0, quad_dt) * quad_dt;
  if (c.grid.t_max == 0.0) c.grid.t_max = quad_dt;
  diagrams::BareTermConfig bare{case_study::make_problem(c), quad_dt, false};

  OracleReport rep;
  rep.t = t;
  rep.quad_dt = quad_dt;
  const SuperOp direct = diagrams::bare_first_order(t, bare);
  const SuperOp iterate = diagrams::dyson_first_iterate(t, bare);
  rep.bare_norm = direct.cwiseAbs().maxCoeff();
  rep.relative_deviation = diagrams::relative_deviation(direct, iterate);
  rep.pass = rep.relative_deviation < 1e-3;
  return rep;
}

json to_json(const OracleReport& report) {
  return {{"t", report.t},
          {"quad_dt", report.quad_dt},
          {"relative_deviation", report.relative_deviation},
          {"bare_max_abs", report.bare_norm},
          {"result", report.pass ? "PASS" : "FAIL"}};
}

}  // namespace opennca::cli
