#pragma once

#include <complex>

#include <Eigen/Dense>

namespace opennca {

using Complex = std::complex<double>;

/// Dense N x N operator on the impurity Hilbert space.
using OperatorMatrix = Eigen::MatrixXcd;
/// Operator flattened to N^2 entries, index n*N + m holds |n><m|.
using VectorizedOperator = Eigen::VectorXcd;
/// Dense N^2 x N^2 matrix acting on vectorized operators.
using SuperOp = Eigen::MatrixXcd;

/// Keldysh contour branch. `plus` acts left of the density matrix, `minus` right.
enum class Branch { plus, minus };

inline constexpr Branch kBranches[] = {Branch::plus, Branch::minus};

constexpr int sign(Branch b) noexcept { return b == Branch::plus ? 1 : -1; }

constexpr char symbol(Branch b) noexcept { return b == Branch::plus ? '+' : '-'; }

}  // namespace opennca
