#include "opennca/diagrams.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "opennca/errors.hpp"

namespace opennca::diagrams {

namespace {

struct Grid {
  int n = 0;      // number of panels
  double h = 0.0;
  std::vector<SuperOp> v0;  // V0(j h), j = 0..n
};

Grid make_grid(double t, const BareTermConfig& cfg) {
  if (!(cfg.quad_dt > 0.0)) throw GridError("quad_dt must be > 0");
  if (t < 0.0) throw GridError("evaluation time must be >= 0");
  Grid g;
  g.h = cfg.quad_dt;
  g.n = hybridization::lag_index(t, 0.0, g.h);
  for (const auto& ch : cfg.prob.channels) {
    if (std::abs(ch.table.dt() - g.h) > 1e-9 * g.h)
      throw GridError("bath table must be sampled at quad_dt");
    if (ch.table.steps() < g.n) throw GridError("bath table shorter than the evaluation time");
  }
  g.v0.reserve(static_cast<std::size_t>(g.n) + 1);
  for (int j = 0; j <= g.n; ++j) g.v0.push_back(liouville::matrix_exp(cfg.prob.liouvillian, j * g.h));
  return g;
}

// Trapezoid weight of node k on the index interval [lo, hi].
double weight(int k, int lo, int hi, double h) {
  if (hi == lo) return 0.0;
  return (k == lo || k == hi) ? 0.5 * h : h;
}

// Contour order of (t1, g1) relative to (t2, g2). `t1_later` decides equal real times.
bool contour_later(Branch g1, Branch g2, bool t1_later) {
  if (g1 != g2) return g1 == Branch::minus;
  return g1 == Branch::plus ? t1_later : !t1_later;
}

// Delta^{g1 g2}(t1, t2) = -i <T_C c(t1 g1) c^dag(t2 g2)>: greater when (t1 g1) is
// later on the contour, lesser otherwise.
Complex contour_ordered(const hybridization::HybridizationTable& tab, Branch g1, Branch g2, int lag, bool t1_later) {
  return contour_later(g1, g2, t1_later) ? tab.greater(lag) : tab.lesser(lag);
}

}  // namespace

SuperOp bare_first_order(double t, const BareTermConfig& cfg) {
  const auto& prob = cfg.prob;
  const int n2 = prob.dim() * prob.dim();
  const Grid g = make_grid(t, cfg);
  const double xi = prob.xi;
  std::vector<liouville::ContourOps> ops;
  for (const auto& d : prob.d_ops) ops.emplace_back(d);

  const auto v0 = [&](int j) -> const SuperOp& { return g.v0[static_cast<std::size_t>(j)]; };

  // Integrand of i V^(1) at creation time index i (t1) and annihilation time
  // index j (t2), on the piece where `creation_later` orders equal times.
  SuperOp chain(n2, n2);
  const auto integrand = [&](int i, int j, bool creation_later, SuperOp& acc, double w) {
    for (const auto& ch : prob.channels) {
      const auto& dag = ops[static_cast<std::size_t>(ch.a)];
      const auto& ann = ops[static_cast<std::size_t>(ch.b)];
      for (Branch g1 : kBranches) {
        for (Branch g2 : kBranches) {
          // T_C: the written order puts the creator left of the annihilator; a
          // swap costs xi whenever the creator is earlier on the contour.
          const double tc_sign = contour_later(g1, g2, creation_later) ? 1.0 : xi;
          const Complex delta = contour_ordered(ch.table, g1, g2, i - j, creation_later);
          if (delta == Complex(0.0)) continue;
          const Complex coeff = w * sign(g1) * sign(g2) * tc_sign * delta;
          // T_F: latest superoperator leftmost, Markovian legs in between.
          if (creation_later)
            chain.noalias() = dag.create(g1) * v0(i - j) * ann.annihilate(g2) * v0(j);
          else
            chain.noalias() = ann.annihilate(g2) * v0(j - i) * dag.create(g1) * v0(i);
          acc.noalias() += coeff * (v0(g.n - (creation_later ? i : j)) * chain);
        }
      }
    }
  };

  SuperOp acc = SuperOp::Zero(n2, n2);
  const int n = g.n;
  const double h = g.h;
  if (!cfg.swap_variables) {
    for (int i = 0; i <= n; ++i) {
      const double wo = weight(i, 0, n, h);
      for (int j = 0; j <= i; ++j) integrand(i, j, true, acc, wo * weight(j, 0, i, h));
      for (int j = i; j <= n; ++j) integrand(i, j, false, acc, wo * weight(j, i, n, h));
    }
  } else {
    for (int j = 0; j <= n; ++j) {
      const double wo = weight(j, 0, n, h);
      for (int i = j; i <= n; ++i) integrand(i, j, true, acc, wo * weight(i, j, n, h));
      for (int i = 0; i <= j; ++i) integrand(i, j, false, acc, wo * weight(i, 0, j, h));
    }
  }
  // acc holds i V^(1).
  return Complex(0.0, -1.0) * acc;
}

SuperOp first_order_propagator(double t, const BareTermConfig& cfg) {
  return liouville::matrix_exp(cfg.prob.liouvillian, t) + bare_first_order(t, cfg);
}

SuperOp dyson_first_iterate(double t, const BareTermConfig& cfg) {
  const auto& prob = cfg.prob;
  const int n2 = prob.dim() * prob.dim();
  const Grid g = make_grid(t, cfg);
  const int n = g.n;
  const double h = g.h;

  std::vector<SuperOp> sigma0;
  sigma0.reserve(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) sigma0.push_back(nca::self_energy_at_lag(g.v0[static_cast<std::size_t>(k)], k, prob));

  SuperOp acc = SuperOp::Zero(n2, n2);
  SuperOp inner(n2, n2);
  for (int i = 0; i <= n; ++i) {
    inner.setZero();
    for (int j = 0; j <= i; ++j)
      inner.noalias() += weight(j, 0, i, h) * (sigma0[static_cast<std::size_t>(i - j)] * g.v0[static_cast<std::size_t>(j)]);
    acc.noalias() += weight(i, 0, n, h) * (g.v0[static_cast<std::size_t>(n - i)] * inner);
  }
  return acc;
}

double relative_deviation(const SuperOp& a, const SuperOp& b) {
  const double num = (a - b).cwiseAbs().maxCoeff();
  const double den = b.cwiseAbs().maxCoeff();
  if (den == 0.0) return num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / den;
}

}  // namespace opennca::diagrams
