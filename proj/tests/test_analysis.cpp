#include <doctest.h>

#include <random>

#include "opennca/analysis.hpp"
#include "opennca/case_study.hpp"
#include "opennca/errors.hpp"
#include "opennca/liouville.hpp"
#include "oracles.hpp"

using namespace opennca;

namespace {

case_study::RunConfig base_config(double eps0, double eta, double dt, double t_max) {
  case_study::RunConfig cfg;
  cfg.model = {eps0, 0.5, 0.5, 0.5};
  cfg.bath.eta = eta;
  cfg.bath.w = 10.0;
  cfg.grid = {dt, t_max};
  cfg.initial_state.basis_label = 0;
  return cfg;
}

nca::PropagatorHistory solve(const case_study::RunConfig& cfg) { return nca::solve_dyson(case_study::make_problem(cfg)); }

}  // namespace

TEST_CASE("occupation and trace of evolved states") {
  const auto d = case_study::annihilator();
  OperatorMatrix rho(2, 2);
  rho << 0.3, Complex(0.1, 0.2), Complex(0.1, -0.2), 0.7;
  CHECK(analysis::occupation(rho, d) == doctest::Approx(0.7));

  const auto hist = solve(base_config(5.0, 1.0, 0.02, 2.0));
  const auto states = analysis::evolve_state(hist, case_study::initial_density(base_config(5.0, 1.0, 0.02, 2.0)));
  REQUIRE(states.size() == 101);
  CHECK(analysis::occupation(states[0], d) == 0.0);
  for (double e : analysis::trace_errors(states)) CHECK(e < 1e-12);

  const auto series = analysis::occupation_series(states, d, 0.02);
  CHECK(series.times.size() == 101);
  CHECK(series.times[50] == doctest::Approx(1.0));
  CHECK(series.max_imag < 1e-14);
  for (std::size_t j = 0; j < states.size(); ++j) CHECK(series.values[j] == analysis::occupation(states[j], d));
}

TEST_CASE("evolve_state rejects unphysical inputs") {
  const auto hist = solve(base_config(1.0, 0.5, 0.1, 0.5));
  OperatorMatrix rho = OperatorMatrix::Identity(2, 2);
  CHECK_THROWS_AS(analysis::evolve_state(hist, rho), StateError);
  rho << 0.5, 0.3, 0.1, 0.5;
  CHECK_THROWS_AS(analysis::evolve_state(hist, rho), StateError);
  CHECK_THROWS_AS(analysis::evolve_state(hist, OperatorMatrix::Identity(3, 3) / 3.0), StateError);
}

TEST_CASE("zero coupling reproduces the rate equation") {
  for (int label : {0, 1}) {
    auto cfg = base_config(1.0, 0.0, 1e-3, 5.0);
    cfg.model = {1.0, 0.7, 0.3, 0.4};
    cfg.initial_state.basis_label = label;
    const auto states = analysis::evolve_state(solve(cfg), case_study::initial_density(cfg));
    for (std::size_t j = 1; j < states.size(); j += 50) {
      const double ref = oracle::markov_occupation(label, 0.7, 0.3, static_cast<double>(j) * 1e-3);
      CHECK(std::abs(analysis::occupation(states[j], case_study::annihilator()) - ref) <= 1e-3 * std::abs(ref));
    }
  }
}

TEST_CASE("propagator spectrum") {
  SUBCASE("Markovian propagator has eigenvalues (1 + dt lambda)^m") {
    auto cfg = base_config(5.0, 0.0, 0.01, 1.0);
    const auto hist = solve(cfg);
    const auto spec = analysis::propagator_spectrum(hist);
    REQUIRE(spec.eigenvalues.size() == 101);
    CHECK(spec.max_left_eig_err < 1e-13);
    CHECK(spec.max_nonunit_trace < 1e-12);
    CHECK(spec.degenerate_unit_steps.empty());
    const double g = 1.0;
    const Complex c(-0.75, 5.0);
    for (int m : {1, 40, 100}) {
      const auto& ev = spec.eigenvalues[static_cast<std::size_t>(m)];
      CHECK(std::abs(ev[0] - 1.0) < 1e-13);
      CHECK(spec.unit_eig_err[static_cast<std::size_t>(m)] < 1e-13);
      // Order: unit, then the oscillating pair, then the population mode.
      CHECK(std::abs(std::abs(ev[1]) - std::pow(std::abs(1.0 + 0.01 * c), m)) < 1e-12);
      CHECK(std::abs(std::abs(ev[2]) - std::pow(std::abs(1.0 + 0.01 * c), m)) < 1e-12);
      CHECK(std::abs(ev[3] - std::pow(1.0 - 0.01 * g, m)) < 1e-12);
    }
  }

  SUBCASE("coupled run keeps a unit eigenvalue") {
    const auto spec = analysis::propagator_spectrum(solve(base_config(5.0, 1.0, 0.02, 10.0)));
    CHECK(*std::max_element(spec.unit_eig_err.begin(), spec.unit_eig_err.end()) < 1e-10);
    CHECK(spec.max_left_eig_err < 1e-12);
    CHECK(spec.max_nonunit_trace < 1e-8);
    CHECK(spec.degenerate_unit_steps.empty());
    // The identity at t = 0 is fully degenerate and is not reported.
    CHECK(spec.eigenvalues[0].size() == 4);
  }
}

TEST_CASE("positivity monitor") {
  std::vector<OperatorMatrix> states;
  OperatorMatrix a(2, 2);
  a << 0.25, 0, 0, 0.75;
  OperatorMatrix b(2, 2);
  b << 0.5, 0.6, 0.6, 0.5;
  states = {a, b};
  const auto mins = analysis::positivity_monitor(states);
  CHECK(mins[0] == doctest::Approx(0.25));
  CHECK(mins[1] == doctest::Approx(-0.1));
}

TEST_CASE("stationarity check") {
  std::vector<double> flat(101, 0.4);
  CHECK(analysis::is_stationary(flat));
  flat.back() = 0.402;
  CHECK_FALSE(analysis::is_stationary(flat));
  CHECK(analysis::is_stationary(flat, 1e-2));
  CHECK_FALSE(analysis::is_stationary({0.1}));
}

TEST_CASE("steady-state scan") {
  const auto cfg = base_config(0.0, 1.0, 0.05, 10.0);
  const std::vector<double> eps{-4.0, 0.0, 4.0};
  const auto serial = analysis::steady_state_scan(cfg, eps, 1);
  const auto threaded = analysis::steady_state_scan(cfg, eps, 3);
  REQUIRE(serial.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(serial[k].eps0 == eps[k]);
    CHECK(serial[k].n_final == threaded[k].n_final);
    CHECK(serial[k].stationary == threaded[k].stationary);
  }
  // Particle-hole symmetry of the flat band with gamma_l == gamma_p; the
  // mirrored runs start from different states, so only the late-time values agree.
  CHECK(serial[1].n_final == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(serial[0].n_final + serial[2].n_final == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(serial[0].n_final > serial[1].n_final);
  CHECK(serial[1].n_final > serial[2].n_final);
}

TEST_CASE("analysis examples") {
  const auto d = case_study::annihilator();
  const OperatorMatrix empty = (OperatorMatrix(2, 2) << 1, 0, 0, 0).finished();
  const OperatorMatrix full = (OperatorMatrix(2, 2) << 0, 0, 0, 1).finished();
  const OperatorMatrix mixed = 0.5 * OperatorMatrix::Identity(2, 2);
  CHECK(analysis::occupation(empty, d) == 0.0);
  CHECK(analysis::occupation(full, d) == 1.0);
  CHECK(analysis::occupation(mixed, d) == 0.5);
  const auto mins = analysis::positivity_monitor({mixed, empty});
  CHECK(mins[0] == doctest::Approx(0.5));
  CHECK(std::abs(mins[1]) < 1e-15);

  // Markovian run with balanced loss and pump relaxes to the fully mixed state.
  auto cfg = base_config(3.0, 0.0, 0.01, 20.0);
  const auto hist = solve(cfg);
  const auto states = analysis::evolve_state(hist, empty);
  CHECK(states[0] == empty);
  CHECK(oracle::max_abs(states.back() - mixed) < 1e-6);

  const auto spec = analysis::propagator_spectrum(hist);
  for (const auto& l : spec.eigenvalues[0]) CHECK(l == Complex(1.0));
  CHECK(std::abs(spec.eigenvalues.back()[1]) < 1e-6);
}
