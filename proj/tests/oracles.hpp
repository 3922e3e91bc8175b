#pragma once

// Test-only reference implementations. Nothing here calls into the code path
// it is used to check.

#include <cmath>
#include <complex>
#include <functional>
#include <random>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace oracle {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;

/// Matrix of a linear map on N x N operators, columns indexed by |n><m| -> n*N+m.
inline Mat superop_from_action(int n, const std::function<Mat(const Mat&)>& action) {
  Mat s = Mat::Zero(n * n, n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Mat basis = Mat::Zero(n, n);
      basis(a, b) = 1.0;
      const Mat out = action(basis);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) s(r * n + c, a * n + b) = out(r, c);
    }
  return s;
}

inline Eigen::VectorXcd flatten(const Mat& rho) {
  const auto n = rho.rows();
  Eigen::VectorXcd v(n * n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) v(r * n + c) = rho(r, c);
  return v;
}

inline Mat unflatten(const Eigen::VectorXcd& v, int n) {
  Mat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = v(r * n + c);
  return m;
}

/// exp(S t) through an eigendecomposition; valid for diagonalizable S.
inline Mat exp_by_eigen(const Mat& s, double t) {
  Eigen::ComplexEigenSolver<Mat> es(s);
  const Mat& p = es.eigenvectors();
  Eigen::VectorXcd e = es.eigenvalues();
  for (Eigen::Index k = 0; k < e.size(); ++k) e(k) = std::exp(e(k) * t);
  return p * e.asDiagonal() * p.inverse();
}

/// exp(S t) by a plain Taylor series with squaring; for small ||S t||.
inline Mat exp_by_taylor(const Mat& s, double t) {
  int squarings = 0;
  double norm = (s * t).cwiseAbs().rowwise().sum().maxCoeff();
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const Mat a = s * (t / std::pow(2.0, squarings));
  Mat term = Mat::Identity(s.rows(), s.cols());
  Mat sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int k = 0; k < squarings; ++k) sum = sum * sum;
  return sum;
}

inline Mat random_matrix(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Mat m(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m(r, c) = Complex(g(rng), g(rng));
  return m;
}

inline Mat random_hermitian(std::mt19937& rng, int n) {
  const Mat m = random_matrix(rng, n);
  return 0.5 * (m + m.adjoint());
}

/// Random density matrix: positive, unit trace.
inline Mat random_density(std::mt19937& rng, int n) {
  const Mat m = random_matrix(rng, n);
  Mat rho = m * m.adjoint();
  return rho / rho.trace();
}

/// Markovian single-level occupation: rate equation dn/dt = gp (1-n) - gl n.
inline double markov_occupation(double n0, double gl, double gp, double t) {
  const double ns = gp / (gl + gp);
  return ns + (n0 - ns) * std::exp(-(gl + gp) * t);
}

inline double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace oracle
