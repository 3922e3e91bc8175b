#pragma once

#include <vector>

#include "opennca/types.hpp"

/// Vectorized (Liouville-space) operator algebra.
///
/// Operators are flattened row-major: the component of |n><m| sits at index
/// n*N + m. With that layout the superoperator rho -> A rho B is the matrix
/// A (x) B^T.
namespace opennca::liouville {

VectorizedOperator vectorize(const OperatorMatrix& rho);

/// Throws DimensionError if the length is not a perfect square.
OperatorMatrix unvectorize(const VectorizedOperator& v);

/// rho -> A rho, i.e. A (x) 1.
SuperOp left_mult(const OperatorMatrix& a);
/// rho -> rho B, i.e. 1 (x) B^T.
SuperOp right_mult(const OperatorMatrix& b);

/// Impurity dimension N of a superoperator of size N^2 x N^2.
int impurity_dim(const SuperOp& s);

SuperOp identity_superop(int dim);

/// Row vector <<1| with <<1|rho>> = tr(rho).
Eigen::RowVectorXcd trace_functional(int dim);

enum class Ladder { annihilate, create };

/// Contour-labelled ladder superoperators built from the annihilator d:
///   (annihilate, +) = d (x) 1      (create, +) = d^dag (x) 1
///   (annihilate, -) = 1 (x) d^T    (create, -) = 1 (x) d^*
SuperOp contour_superop(Ladder kind, Branch branch, const OperatorMatrix& d);

/// The four contour superoperators of one flavor, precomputed.
struct ContourOps {
  SuperOp annihilate_plus;
  SuperOp annihilate_minus;
  SuperOp create_plus;
  SuperOp create_minus;

  explicit ContourOps(const OperatorMatrix& d);

  const SuperOp& annihilate(Branch b) const {
    return b == Branch::plus ? annihilate_plus : annihilate_minus;
  }
  const SuperOp& create(Branch b) const { return b == Branch::plus ? create_plus : create_minus; }
};

struct JumpOperator {
  OperatorMatrix op;
  double rate = 0.0;
};

struct LindbladModel {
  OperatorMatrix hamiltonian;
  std::vector<JumpOperator> jumps;

  /// Throws ModelError on negative rates, dimension mismatch or non-Hermitian H.
  void validate() const;
};

/// -i[H, .] + sum_a g_a (L_a . L_a^dag - 1/2 {L_a^dag L_a, .}) as an N^2 x N^2 matrix.
SuperOp build_liouvillian(const LindbladModel& model);

/// exp(S t) for t >= 0 (DomainError otherwise). exp(S*0) is the exact identity.
SuperOp matrix_exp(const SuperOp& s, double t);

bool is_hermitian(const OperatorMatrix& m, double rel_tol = 1e-12);

}  // namespace opennca::liouville
