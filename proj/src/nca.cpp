#include "opennca/nca.hpp"

#include <cmath>
#include <string>

#include "opennca/errors.hpp"

namespace opennca::nca {

using hybridization::EqualTime;
using liouville::ContourOps;

NcaProblem NcaProblem::single_mode(SuperOp liouvillian, OperatorMatrix d, hybridization::HybridizationTable table,
                                   int steps) {
  NcaProblem p;
  p.liouvillian = std::move(liouvillian);
  p.d_ops.push_back(std::move(d));
  p.dt = table.dt();
  p.xi = table.xi();
  p.channels.push_back({0, 0, std::move(table)});
  p.steps = steps;
  p.validate();
  return p;
}

int NcaProblem::dim() const { return liouville::impurity_dim(liouvillian); }

void NcaProblem::validate() const {
  const int n = dim();
  if (xi != 1 && xi != -1) throw ModelError("xi must be +1 or -1");
  if (!(dt > 0.0)) throw GridError("dt must be > 0");
  if (steps < 0) throw GridError("steps must be >= 0");
  for (const auto& d : d_ops)
    if (d.rows() != n || d.cols() != n) throw DimensionError("d operator dimension differs from liouvillian");
  const int flavors = static_cast<int>(d_ops.size());
  for (const auto& ch : channels) {
    if (ch.a < 0 || ch.a >= flavors || ch.b < 0 || ch.b >= flavors)
      throw ModelError("hybridization channel references unknown flavor");
    if (std::abs(ch.table.dt() - dt) > 1e-9 * dt) throw GridError("hybridization dt differs from solver dt");
    if (ch.table.steps() < steps) throw GridError("hybridization table shorter than the requested run");
    if (ch.table.xi() != xi) throw ModelError("hybridization statistics differ from problem xi");
  }
}

namespace {

bool all_finite_and_bounded(const SuperOp& m) {
  for (Eigen::Index k = 0; k < m.size(); ++k) {
    const Complex z = m.data()[k];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()) || std::abs(z) > 1e12) return false;
  }
  return true;
}

SuperOp self_energy_impl(const SuperOp& vt, int lag, const NcaProblem& prob, const std::vector<ContourOps>& ops) {
  if (lag < 0) throw GridError("self-energy requires t1 >= t2");
  const Complex minus_i(0.0, -1.0);
  const double xi = prob.xi;
#ifdef OPENNCA_NEGATIVE_CONTROL_FLIP_EXCHANGE
  const double exchange_sign = -xi;
#else
  const double exchange_sign = xi;
#endif
  SuperOp sigma = SuperOp::Zero(vt.rows(), vt.cols());
  SuperOp tmp(vt.rows(), vt.cols());
  for (const auto& ch : prob.channels) {
    const ContourOps& dx = ops[static_cast<std::size_t>(ch.a)];
    const ContourOps& dy = ops[static_cast<std::size_t>(ch.b)];
    for (Branch alpha : kBranches) {
      // alpha^{(1+xi)/2}: 1 for fermions, alpha for bosons.
      const double alpha_factor = prob.xi == -1 ? 1.0 : sign(alpha);
      for (Branch beta : kBranches) {
        const Complex pre = minus_i * (alpha_factor * sign(beta));
        // Hole propagating in the impurity: Delta^{beta alpha}(t1, t2), t1 the later time.
        const Complex hole = ch.table.component(beta, alpha, lag, EqualTime::first_later);
        // Particle in the impurity: Delta^{alpha beta}(t2, t1), first argument earlier.
        const Complex particle = ch.table.component(alpha, beta, -lag, EqualTime::first_earlier);
        if (hole != Complex(0.0)) {
          tmp.noalias() = dx.create(beta) * vt;
          sigma.noalias() += (pre * hole) * (tmp * dy.annihilate(alpha));
        }
        if (particle != Complex(0.0)) {
          tmp.noalias() = dy.annihilate(beta) * vt;
          sigma.noalias() += (pre * exchange_sign * particle) * (tmp * dx.create(alpha));
        }
      }
    }
  }
  return sigma;
}

std::vector<ContourOps> contour_ops(const NcaProblem& prob) {
  std::vector<ContourOps> ops;
  ops.reserve(prob.d_ops.size());
  for (const auto& d : prob.d_ops) ops.emplace_back(d);
  return ops;
}

// Trapezoid sum over l < m; caller guarantees sigma[0..m] and V[0..m] exist.
void accumulate_convolution(const std::vector<SuperOp>& sigma, const std::vector<SuperOp>& v, int m, double dt,
                            SuperOp& out) {
  out.setZero();
  for (int l = 0; l < m; ++l) {
    out.noalias() += sigma[static_cast<std::size_t>(m - l - 1)] * v[static_cast<std::size_t>(l + 1)];
    out.noalias() += sigma[static_cast<std::size_t>(m - l)] * v[static_cast<std::size_t>(l)];
  }
  out *= 0.5 * dt;
}

}  // namespace

SuperOp self_energy_at_lag(const SuperOp& vt, int lag, const NcaProblem& prob) {
  const int n = prob.dim();
  if (vt.rows() != n * n || vt.cols() != n * n) throw DimensionError("propagator size differs from problem");
  return self_energy_impl(vt, lag, prob, contour_ops(prob));
}

SuperOp nca_self_energy(const SuperOp& vt, double t1, double t2, const NcaProblem& prob) {
  if (t1 < t2 - 1e-9 * prob.dt) throw GridError("self-energy requires t1 >= t2");
  return self_energy_at_lag(vt, hybridization::lag_index(t1, t2, prob.dt), prob);
}

SuperOp trapezoid_convolution(const PropagatorHistory& hist, int m) {
  if (m < 0) throw StateError("convolution index must be >= 0");
  if (static_cast<int>(hist.sigma.size()) <= m || static_cast<int>(hist.V.size()) <= m)
    throw StateError("history not populated up to step " + std::to_string(m));
  SuperOp out(hist.V[0].rows(), hist.V[0].cols());
  accumulate_convolution(hist.sigma, hist.V, m, hist.dt, out);
  return out;
}

PropagatorHistory solve_dyson(const NcaProblem& prob) {
  prob.validate();
  const int n2 = prob.dim() * prob.dim();
  const auto ops = contour_ops(prob);
  const double dt = prob.dt;

  PropagatorHistory hist;
  hist.dt = dt;
  hist.steps = prob.steps;
  hist.V.reserve(static_cast<std::size_t>(prob.steps) + 1);
  hist.sigma.reserve(static_cast<std::size_t>(prob.steps) + 1);
  hist.V.push_back(SuperOp::Identity(n2, n2));

  SuperOp conv(n2, n2);
  SuperOp rhs(n2, n2);
  for (int m = 0; m < prob.steps; ++m) {
    const SuperOp& vm = hist.V.back();
    hist.sigma.push_back(self_energy_impl(vm, m, prob, ops));
    accumulate_convolution(hist.sigma, hist.V, m, dt, conv);
    rhs.noalias() = prob.liouvillian * vm;
    rhs += conv;
    SuperOp next = vm + dt * rhs;
    if (!all_finite_and_bounded(next)) throw DivergenceError(m + 1, "propagator entry non-finite or above 1e12");
    hist.V.push_back(std::move(next));
  }
  // Sigma at the final lag completes the history for post-processing.
  hist.sigma.push_back(self_energy_impl(hist.V.back(), prob.steps, prob, ops));
  return hist;
}

double dyson_residual(const PropagatorHistory& hist, const NcaProblem& prob) {
  const int steps = static_cast<int>(hist.V.size()) - 1;
  if (steps < 0 || hist.sigma.size() < hist.V.size()) throw StateError("dyson_residual needs a solved history");
  const auto n2 = hist.V[0].rows();
  const double dt = hist.dt;

  // Exact Markovian legs V0(j dt) as powers of one exponential step.
  std::vector<SuperOp> v0;
  v0.reserve(static_cast<std::size_t>(steps) + 1);
  v0.push_back(SuperOp::Identity(n2, n2));
  const SuperOp step = liouville::matrix_exp(prob.liouvillian, dt);
  for (int j = 1; j <= steps; ++j) v0.push_back(step * v0.back());

  // inner[k] = int_0^{t_k} Sigma(t_k - t2) V(t2) dt2
  std::vector<SuperOp> inner(static_cast<std::size_t>(steps) + 1, SuperOp(n2, n2));
  for (int k = 0; k <= steps; ++k) accumulate_convolution(hist.sigma, hist.V, k, dt, inner[static_cast<std::size_t>(k)]);

  double worst = 0.0;
  SuperOp outer(n2, n2);
  for (int m = 0; m <= steps; ++m) {
    outer.setZero();
    for (int k = 0; k < m; ++k) {
      outer.noalias() += v0[static_cast<std::size_t>(m - k - 1)] * inner[static_cast<std::size_t>(k + 1)];
      outer.noalias() += v0[static_cast<std::size_t>(m - k)] * inner[static_cast<std::size_t>(k)];
    }
    outer *= 0.5 * dt;
    const double r = (hist.V[static_cast<std::size_t>(m)] - v0[static_cast<std::size_t>(m)] - outer).cwiseAbs().maxCoeff();
    worst = std::max(worst, r);
  }
  return worst;
}

}  // namespace opennca::nca
