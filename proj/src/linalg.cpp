#include "sensel/linalg.hpp"

#include "sensel/errors.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace sensel {

namespace {

double condition_estimate(const Matrix& S) {
  if (S.rows() == 0) return 1.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(S), Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  const double lo = std::abs(ev.minCoeff());
  const double hi = ev.cwiseAbs().maxCoeff();
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace

bool is_finite(const Matrix& m) { return m.allFinite(); }

double asymmetry(const Matrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  if (m.size() == 0) return 0.0;
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Matrix& m) {
  if (m.rows() != m.cols() || m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(m), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

bool is_symmetric_psd(const Matrix& m, double tol) {
  return m.rows() == m.cols() && is_finite(m) && asymmetry(m) <= kSymmetryTol &&
         min_eigenvalue(m) >= -tol;
}

void require_psd(const Matrix& m, std::string_view what) {
  if (!is_finite(m)) {
    throw NumericalError(std::string(what) + " has non-finite entries",
                         std::numeric_limits<double>::infinity());
  }
  const double lo = min_eigenvalue(m);
  if (asymmetry(m) > kSymmetryTol || lo < -kPsdTol) {
    throw NumericalError(std::string(what) + " left the PSD cone (min eigenvalue " +
                             std::to_string(lo) + ")",
                         condition_estimate(m));
  }
}

Matrix psd_factor(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("psd_factor: matrix is not square");
  if (m.size() == 0) return m;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(symmetrized(m));
  if (eig.info() != Eigen::Success) {
    throw NumericalError("psd_factor: eigendecomposition failed", condition_estimate(m));
  }
  const Vector& ev = eig.eigenvalues();
  if (ev.minCoeff() < -kPsdTol) {
    throw NumericalError("psd_factor: matrix is not PSD (min eigenvalue " +
                             std::to_string(ev.minCoeff()) + ")",
                         condition_estimate(m));
  }
  const Vector root = ev.cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

Matrix solve_left_spd(const Matrix& S, const Matrix& rhs, std::string_view what) {
  if (S.rows() != S.cols() || S.rows() != rhs.rows()) {
    throw DimensionError(std::string(what) + ": solve dimension mismatch");
  }
  Eigen::LLT<Matrix> llt(symmetrized(S));
  if (llt.info() != Eigen::Success) {
    const double cond = condition_estimate(S);
    throw NumericalError(std::string(what) + " is not positive definite (condition estimate " +
                             std::to_string(cond) + ")",
                         cond);
  }
  Matrix x = llt.solve(rhs);
  if (!x.allFinite()) {
    const double cond = condition_estimate(S);
    throw NumericalError(std::string(what) + " solve produced non-finite values (condition "
                                             "estimate " + std::to_string(cond) + ")",
                         cond);
  }
  return x;
}

Matrix solve_right_spd(const Matrix& rhs, const Matrix& S, std::string_view what) {
  // X S = rhs  <=>  S X^T = rhs^T for symmetric S.
  return solve_left_spd(S, rhs.transpose(), what).transpose();
}

}  // namespace sensel
