#include "opennca/case_study.hpp"

#include <cmath>
#include <string>

#include "opennca/errors.hpp"

namespace opennca::case_study {

int GridConfig::steps() const { return static_cast<int>(std::llround(t_max / dt)); }

namespace {

void require_rate(double v, const char* field) {
  if (!std::isfinite(v) || v < 0.0) throw ConfigError(field, "must be a finite value >= 0");
}

}  // namespace

void RunConfig::validate() const {
  if (!std::isfinite(model.eps0)) throw ConfigError("model.eps0", "must be finite");
  require_rate(model.gamma_l, "model.gamma_l");
  require_rate(model.gamma_p, "model.gamma_p");
  require_rate(model.gamma_d, "model.gamma_d");

  if (bath.kind == BathConfig::Kind::flat_band) {
    require_rate(bath.eta, "bath.eta");
    if (!std::isfinite(bath.w) || bath.w <= 0.0) throw ConfigError("bath.w", "must be > 0");
  } else if (bath.path.empty()) {
    throw ConfigError("bath.path", "required for kind=tabulated");
  }

  if (!std::isfinite(grid.dt) || grid.dt <= 0.0) throw ConfigError("grid.dt", "must be > 0");
  if (!std::isfinite(grid.t_max) || grid.t_max < grid.dt) throw ConfigError("grid.t_max", "must be >= grid.dt");
  if (std::abs(grid.steps() * grid.dt - grid.t_max) > 1e-9 * grid.t_max)
    throw ConfigError("grid.t_max", "must be an integer multiple of grid.dt");

  const bool has_label = initial_state.basis_label.has_value();
  const bool has_matrix = initial_state.matrix.has_value();
  if (has_label == has_matrix)
    throw ConfigError("initial_state", "exactly one of basis_label or matrix is required");
  if (has_label && *initial_state.basis_label != 0 && *initial_state.basis_label != 1)
    throw ConfigError("initial_state.basis_label", "must be 0 or 1");
  if (has_matrix) {
    const auto& m = *initial_state.matrix;
    if (m.rows() != 2 || m.cols() != 2) throw ConfigError("initial_state.matrix", "must be 2x2");
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) throw ConfigError("initial_state.matrix", "must be Hermitian");
    if (std::abs(m.trace() - Complex(1.0)) > 1e-12) throw ConfigError("initial_state.matrix", "must have unit trace");
  }
}

OperatorMatrix annihilator() {
  OperatorMatrix d = OperatorMatrix::Zero(2, 2);
  d(0, 1) = 1.0;
  return d;
}

liouville::LindbladModel lindblad_model(const ModelParams& p) {
  const OperatorMatrix d = annihilator();
  const OperatorMatrix n = d.adjoint() * d;
  liouville::LindbladModel m;
  m.hamiltonian = p.eps0 * n;
  m.jumps = {{d, p.gamma_l}, {d.adjoint(), p.gamma_p}, {n, p.gamma_d}};
  return m;
}

hybridization::HybridizationTable bath_table(const RunConfig& cfg) {
  const int steps = cfg.grid.steps();
  if (cfg.bath.kind == BathConfig::Kind::flat_band)
    return hybridization::sample_flat_band({cfg.bath.eta, cfg.bath.w}, cfg.grid.dt, steps);
  auto tab = hybridization::load_tabulated(cfg.bath.path);
  if (std::abs(tab.dt() - cfg.grid.dt) > 1e-9 * cfg.grid.dt)
    throw ConfigError("grid.dt", "differs from the tabulated bath spacing " + std::to_string(tab.dt()));
  if (tab.steps() < steps) throw ConfigError("grid.t_max", "exceeds the tabulated bath range");
  return tab;
}

nca::NcaProblem make_problem(const RunConfig& cfg) {
  cfg.validate();
  return nca::NcaProblem::single_mode(liouville::build_liouvillian(lindblad_model(cfg.model)), annihilator(),
                                      bath_table(cfg), cfg.grid.steps());
}

OperatorMatrix initial_density(const RunConfig& cfg) {
  if (cfg.initial_state.matrix) return *cfg.initial_state.matrix;
  OperatorMatrix rho = OperatorMatrix::Zero(2, 2);
  const int k = cfg.initial_state.basis_label.value_or(0);
  rho(k, k) = 1.0;
  return rho;
}

}  // namespace opennca::case_study
