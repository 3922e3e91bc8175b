#pragma once

#include <string>
#include <vector>

#include "opennca/case_study.hpp"
#include "opennca/nca.hpp"

/// Observables and diagnostics on a solved propagator history.
namespace opennca::analysis {

/// rho(t_j) = unvectorize(V[j] vectorize(rho0)). StateError unless rho0 is
/// Hermitian with unit trace (1e-9).
std::vector<OperatorMatrix> evolve_state(const nca::PropagatorHistory& hist, const OperatorMatrix& rho0);

/// Re tr(d^dag d rho).
double occupation(const OperatorMatrix& rho, const OperatorMatrix& d);

struct ObservableSeries {
  std::string label;
  std::vector<double> times;
  std::vector<double> values;
  double max_imag = 0.0;  ///< largest discarded imaginary part
};

ObservableSeries occupation_series(const std::vector<OperatorMatrix>& states, const OperatorMatrix& d, double dt);

/// |tr rho(t_j) - 1| per step.
std::vector<double> trace_errors(const std::vector<OperatorMatrix>& states);

struct SpectrumSeries {
  std::vector<double> times;
  /// Per step: eigenvalue closest to 1 first, the rest by descending magnitude.
  std::vector<std::vector<Complex>> eigenvalues;
  std::vector<double> unit_eig_err;  ///< |lambda_0 - 1| per step
  /// max over steps of |<<1|V[j] - <<1||_inf
  double max_left_eig_err = 0.0;
  /// max over steps of |tr v_i^R| for unit-norm right eigenvectors with |lambda_i - 1| > 1e-6
  double max_nonunit_trace = 0.0;
  /// Steps j >= 1 with more than one eigenvalue within 1e-6 of 1.
  std::vector<int> degenerate_unit_steps;
};

/// NumericsError carrying the step index if an eigensolve fails.
SpectrumSeries propagator_spectrum(const nca::PropagatorHistory& hist);

/// Minimum eigenvalue of each (Hermitian part of the) state. Negative values are data.
std::vector<double> positivity_monitor(const std::vector<OperatorMatrix>& states);

/// |n(t_max) - n(0.9 t_max)| < tol
bool is_stationary(const std::vector<double>& values, double tol = 1e-3);

struct ScanEntry {
  double eps0 = 0.0;
  double n_final = 0.0;
  bool stationary = false;
};

/// One solve per eps0 on top of `base`; final occupation and stationarity flag.
std::vector<ScanEntry> steady_state_scan(const case_study::RunConfig& base, const std::vector<double>& eps_values,
                                         int jobs = 1);

}  // namespace opennca::analysis
