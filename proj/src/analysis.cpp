#include "opennca/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "opennca/errors.hpp"
#include "opennca/liouville.hpp"
#include "opennca/parallel.hpp"

namespace opennca::analysis {

std::vector<OperatorMatrix> evolve_state(const nca::PropagatorHistory& hist, const OperatorMatrix& rho0) {
  if (rho0.rows() != rho0.cols()) throw StateError("initial state must be square");
  if (std::abs(rho0.trace() - Complex(1.0)) > 1e-9) throw StateError("initial state must have unit trace");
  if ((rho0 - rho0.adjoint()).cwiseAbs().maxCoeff() > 1e-9) throw StateError("initial state must be Hermitian");
  const VectorizedOperator v0 = liouville::vectorize(rho0);
  std::vector<OperatorMatrix> states;
  states.reserve(hist.V.size());
  for (const auto& v : hist.V) {
    if (v.cols() != v0.size()) throw StateError("initial state dimension differs from propagator");
    states.push_back(liouville::unvectorize(v * v0));
  }
  return states;
}

double occupation(const OperatorMatrix& rho, const OperatorMatrix& d) {
  return (d.adjoint() * d * rho).trace().real();
}

ObservableSeries occupation_series(const std::vector<OperatorMatrix>& states, const OperatorMatrix& d, double dt) {
  ObservableSeries s;
  s.label = "n";
  const OperatorMatrix number = d.adjoint() * d;
  for (std::size_t j = 0; j < states.size(); ++j) {
    const Complex n = (number * states[j]).trace();
    s.times.push_back(static_cast<double>(j) * dt);
    s.values.push_back(n.real());
    s.max_imag = std::max(s.max_imag, std::abs(n.imag()));
  }
  return s;
}

std::vector<double> trace_errors(const std::vector<OperatorMatrix>& states) {
  std::vector<double> out;
  out.reserve(states.size());
  for (const auto& rho : states) out.push_back(std::abs(rho.trace() - Complex(1.0)));
  return out;
}

SpectrumSeries propagator_spectrum(const nca::PropagatorHistory& hist) {
  SpectrumSeries s;
  if (hist.V.empty()) return s;
  const int n = liouville::impurity_dim(hist.V[0]);
  const Eigen::RowVectorXcd one = liouville::trace_functional(n);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver;
  for (std::size_t j = 0; j < hist.V.size(); ++j) {
    const auto& v = hist.V[j];
    s.max_left_eig_err = std::max(s.max_left_eig_err, (one * v - one).cwiseAbs().maxCoeff());
    solver.compute(v, true);
    if (solver.info() != Eigen::Success) throw NumericsError("eigensolver failed at step " + std::to_string(j));
    const auto& lambda = solver.eigenvalues();
    const auto& vecs = solver.eigenvectors();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(lambda.size()));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const auto unit = *std::min_element(order.begin(), order.end(), [&](auto a, auto b) {
      return std::abs(lambda(a) - 1.0) < std::abs(lambda(b) - 1.0);
    });
    order.erase(std::find(order.begin(), order.end(), unit));
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return std::abs(lambda(a)) > std::abs(lambda(b)); });
    order.insert(order.begin(), unit);

    std::vector<Complex> sorted;
    int near_one = 0;
    for (auto k : order) {
      sorted.push_back(lambda(k));
      if (std::abs(lambda(k) - 1.0) <= 1e-6) {
        ++near_one;
      } else {
        const Complex tr = one * vecs.col(k);
        s.max_nonunit_trace = std::max(s.max_nonunit_trace, std::abs(tr));
      }
    }
    if (j > 0 && near_one > 1) s.degenerate_unit_steps.push_back(static_cast<int>(j));
    s.times.push_back(static_cast<double>(j) * hist.dt);
    s.unit_eig_err.push_back(std::abs(lambda(unit) - 1.0));
    s.eigenvalues.push_back(std::move(sorted));
  }
  return s;
}

std::vector<double> positivity_monitor(const std::vector<OperatorMatrix>& states) {
  std::vector<double> out;
  out.reserve(states.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver;
  for (const auto& rho : states) {
    const OperatorMatrix herm = 0.5 * (rho + rho.adjoint());
    solver.compute(herm, Eigen::EigenvaluesOnly);
    out.push_back(solver.eigenvalues().minCoeff());
  }
  return out;
}

bool is_stationary(const std::vector<double>& values, double tol) {
  if (values.size() < 2) return false;
  const std::size_t last = values.size() - 1;
  const auto back = static_cast<std::size_t>(std::llround(0.9 * static_cast<double>(last)));
  return std::abs(values[last] - values[back]) < tol;
}

std::vector<ScanEntry> steady_state_scan(const case_study::RunConfig& base, const std::vector<double>& eps_values,
                                         int jobs) {
  std::vector<ScanEntry> out(eps_values.size());
  parallel_for(eps_values.size(), jobs, [&](std::size_t k) {
    auto cfg = base;
    cfg.model.eps0 = eps_values[k];
    const auto prob = case_study::make_problem(cfg);
    const auto hist = nca::solve_dyson(prob);
    const auto states = evolve_state(hist, case_study::initial_density(cfg));
    const auto n = occupation_series(states, case_study::annihilator(), hist.dt);
    out[k] = {eps_values[k], n.values.back(), is_stationary(n.values)};
  });
  return out;
}

}  // namespace opennca::analysis
