#pragma once

#include "opennca/nca.hpp"

/// Brute-force evaluation of the first-order (one hybridization line) term of
/// the bare hybridization expansion, used to cross-check the NCA self-energy.
namespace opennca::diagrams {

struct BareTermConfig {
  nca::NcaProblem prob;
  double quad_dt = 0.0;
  /// Nest the 2-D quadrature with the annihilation time outermost instead of
  /// the creation time. The result must not depend on it beyond quadrature error.
  bool swap_variables = false;
};

/// V^(1)(t, 0): sum over the four contour-branch pairs of the double integral
/// over [0,t]^2, each split at t1 = t2 and contour/forward ordered explicitly.
/// All Markovian legs use exact exponentials. GridError if t is off the quad grid
/// or the bath table is not sampled at quad_dt.
SuperOp bare_first_order(double t, const BareTermConfig& cfg);

/// V0(t) + bare_first_order(t).
SuperOp first_order_propagator(double t, const BareTermConfig& cfg);

/// int_0^t dt1 int_0^t1 dt2 V0(t - t1) Sigma0(t1 - t2) V0(t2) with Sigma0 the NCA
/// self-energy evaluated on the bare propagator.
SuperOp dyson_first_iterate(double t, const BareTermConfig& cfg);

/// max|a - b| / max|b|; 0 when both vanish, +inf when only b vanishes.
double relative_deviation(const SuperOp& a, const SuperOp& b);

}  // namespace opennca::diagrams
