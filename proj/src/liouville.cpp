#include "opennca/liouville.hpp"

#include <cmath>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "opennca/errors.hpp"

namespace opennca::liouville {

VectorizedOperator vectorize(const OperatorMatrix& rho) {
  const Eigen::Index n = rho.rows();
  VectorizedOperator v(n * n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) v(r * n + c) = rho(r, c);
  return v;
}

OperatorMatrix unvectorize(const VectorizedOperator& v) {
  const auto len = v.size();
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(len))));
  if (n < 1 || n * n != len)
    throw DimensionError("vector of length " + std::to_string(len) + " is not a vectorized operator");
  OperatorMatrix rho(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) rho(r, c) = v(r * n + c);
  return rho;
}

SuperOp left_mult(const OperatorMatrix& a) {
  const OperatorMatrix id = OperatorMatrix::Identity(a.rows(), a.cols());
  return Eigen::kroneckerProduct(a, id).eval();
}

SuperOp right_mult(const OperatorMatrix& b) {
  const OperatorMatrix id = OperatorMatrix::Identity(b.rows(), b.cols());
  return Eigen::kroneckerProduct(id, b.transpose()).eval();
}

int impurity_dim(const SuperOp& s) {
  const auto n = static_cast<int>(std::llround(std::sqrt(static_cast<double>(s.rows()))));
  if (s.rows() != s.cols() || static_cast<Eigen::Index>(n) * n != s.rows())
    throw DimensionError("superoperator of size " + std::to_string(s.rows()) + "x" +
                         std::to_string(s.cols()) + " is not N^2 x N^2");
  return n;
}

SuperOp identity_superop(int dim) { return SuperOp::Identity(dim * dim, dim * dim); }

Eigen::RowVectorXcd trace_functional(int dim) {
  Eigen::RowVectorXcd one = Eigen::RowVectorXcd::Zero(dim * dim);
  for (int n = 0; n < dim; ++n) one(n * dim + n) = 1.0;
  return one;
}

SuperOp contour_superop(Ladder kind, Branch branch, const OperatorMatrix& d) {
  if (branch == Branch::plus)
    return left_mult(kind == Ladder::annihilate ? OperatorMatrix(d) : OperatorMatrix(d.adjoint()));
  // rho -> rho d is 1 (x) d^T; rho -> rho d^dag is 1 (x) d^*.
  return right_mult(kind == Ladder::annihilate ? OperatorMatrix(d) : OperatorMatrix(d.adjoint()));
}

ContourOps::ContourOps(const OperatorMatrix& d)
    : annihilate_plus(contour_superop(Ladder::annihilate, Branch::plus, d)),
      annihilate_minus(contour_superop(Ladder::annihilate, Branch::minus, d)),
      create_plus(contour_superop(Ladder::create, Branch::plus, d)),
      create_minus(contour_superop(Ladder::create, Branch::minus, d)) {}

bool is_hermitian(const OperatorMatrix& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = m.cwiseAbs().maxCoeff();
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= rel_tol * scale;
}

void LindbladModel::validate() const {
  if (hamiltonian.rows() < 1 || hamiltonian.rows() != hamiltonian.cols())
    throw ModelError("hamiltonian must be a non-empty square matrix");
  if (!is_hermitian(hamiltonian)) throw ModelError("hamiltonian is not Hermitian");
  for (std::size_t k = 0; k < jumps.size(); ++k) {
    const auto& j = jumps[k];
    if (!(j.rate >= 0.0) || !std::isfinite(j.rate))
      throw ModelError("jump " + std::to_string(k) + " has negative or non-finite rate");
    if (j.op.rows() != hamiltonian.rows() || j.op.cols() != hamiltonian.cols())
      throw ModelError("jump " + std::to_string(k) + " dimension differs from hamiltonian");
  }
}

SuperOp build_liouvillian(const LindbladModel& model) {
  model.validate();
  const Complex minus_i(0.0, -1.0);
  SuperOp l = minus_i * (left_mult(model.hamiltonian) - right_mult(model.hamiltonian));
  for (const auto& jump : model.jumps) {
    if (jump.rate == 0.0) continue;
    const OperatorMatrix lda = jump.op.adjoint() * jump.op;
    l += jump.rate * (Eigen::kroneckerProduct(jump.op, jump.op.conjugate()).eval() -
                      0.5 * (left_mult(lda) + right_mult(lda)));
  }
  return l;
}

SuperOp matrix_exp(const SuperOp& s, double t) {
  if (!(t >= 0.0)) throw DomainError("matrix_exp requires t >= 0, got " + std::to_string(t));
  if (t == 0.0) return SuperOp::Identity(s.rows(), s.cols());
  const SuperOp scaled = s * t;
  return scaled.exp();
}

}  // namespace opennca::liouville
