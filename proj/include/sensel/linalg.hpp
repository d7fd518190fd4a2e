#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace sensel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Tolerances shared by every module.
inline constexpr double kSymmetryTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;

inline Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

bool is_finite(const Matrix& m);

/// Max |m_ij - m_ji|; +inf if m is not square.
double asymmetry(const Matrix& m);

/// Smallest eigenvalue of the symmetric part of a square matrix.
double min_eigenvalue(const Matrix& m);

bool is_symmetric_psd(const Matrix& m, double tol = kPsdTol);

/// Throws NumericalError if m is not symmetric PSD within kPsdTol.
void require_psd(const Matrix& m, std::string_view what);

/// Square root factor F with F F^T = m for symmetric PSD m, via the
/// eigendecomposition, so zero and rank-deficient covariances are accepted.
/// Throws NumericalError if m has an eigenvalue below -kPsdTol.
Matrix psd_factor(const Matrix& m);

/// Solves X * S = rhs for symmetric positive definite S without forming
/// S^{-1}. Throws NumericalError with S's condition estimate on failure.
Matrix solve_right_spd(const Matrix& rhs, const Matrix& S, std::string_view what);

/// Solves S * X = rhs for symmetric positive definite S.
Matrix solve_left_spd(const Matrix& S, const Matrix& rhs, std::string_view what);

}  // namespace sensel
