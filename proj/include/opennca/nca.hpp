#pragma once

#include <vector>

#include "opennca/hybridization.hpp"
#include "opennca/liouville.hpp"
#include "opennca/types.hpp"

/// Non-crossing approximation for the reduced evolution superoperator V(t).
namespace opennca::nca {

/// Delta_{ab}: hybridization line from the annihilator of flavor `b` to the
/// creator of flavor `a`. Pairs without a channel have zero hybridization.
struct HybridizationChannel {
  int a = 0;
  int b = 0;
  hybridization::HybridizationTable table;
};

struct NcaProblem {
  SuperOp liouvillian;
  std::vector<OperatorMatrix> d_ops;  ///< per-flavor annihilation operators
  std::vector<HybridizationChannel> channels;
  int xi = -1;
  double dt = 0.0;
  int steps = 0;

  /// One fermionic flavor coupled through a single table; dt taken from it.
  static NcaProblem single_mode(SuperOp liouvillian, OperatorMatrix d, hybridization::HybridizationTable table,
                                int steps);

  int dim() const;
  /// Throws GridError/ModelError/DimensionError on inconsistent data.
  void validate() const;
};

/// Causal history V[j] ~ V(j dt) and Sigma[j] ~ Sigma(j dt).
struct PropagatorHistory {
  double dt = 0.0;
  int steps = 0;
  std::vector<SuperOp> V;
  std::vector<SuperOp> sigma;
};

/// NCA self-energy Sigma(t1, t2) built from the dressed V(t1, t2) = `vt`.
/// Requires t1 >= t2 on the grid (GridError otherwise).
SuperOp nca_self_energy(const SuperOp& vt, double t1, double t2, const NcaProblem& prob);

/// Same as nca_self_energy with t1 - t2 = lag * dt.
SuperOp self_energy_at_lag(const SuperOp& vt, int lag, const NcaProblem& prob);

/// dt/2 sum_{l<m} [Sigma(m-l-1) V(l+1) + Sigma(m-l) V(l)], the trapezoid rule for
/// int_0^{t_m} Sigma(t_m - t1) V(t1) dt1. StateError if entries up to m are missing.
SuperOp trapezoid_convolution(const PropagatorHistory& hist, int m);

/// Forward-Euler integration of dV/dt = L V + int_0^t Sigma(t - t1) V(t1) dt1.
/// Throws DivergenceError when an entry is non-finite or exceeds 1e12.
PropagatorHistory solve_dyson(const NcaProblem& prob);

/// max_m || V(t_m) - V0(t_m) - int V0(t_m - t1) int Sigma(t1 - t2) V(t2) ||_max
/// with both integrals on the solver's trapezoid rule.
double dyson_residual(const PropagatorHistory& hist, const NcaProblem& prob);

}  // namespace opennca::nca
