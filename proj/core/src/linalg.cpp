#include "otsense/error.hpp"
#include "otsense/solvers.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <stdexcept>

namespace otsense {

Matrix matrix_sqrt_psd(const Matrix& s) {
  if (s.rows() != s.cols()) throw std::invalid_argument("matrix_sqrt_psd: matrix must be square");
  const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
  if ((s - s.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw NumericalError("matrix_sqrt_psd: matrix is not symmetric");
  }
  if (s.rows() == 1) {
    const double v = s(0, 0);
    if (v < 0.0 && v < -1e-10 * std::abs(v)) {
      throw NumericalError("matrix_sqrt_psd: negative eigenvalue");
    }
    return Matrix::Constant(1, 1, std::sqrt(std::max(v, 0.0)));
  }
  const Matrix sym = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
  if (es.info() != Eigen::Success) throw NumericalError("matrix_sqrt_psd: eigensolver failed");
  Vector lambda = es.eigenvalues();
  const double lmax = std::max(0.0, lambda.maxCoeff());
  for (Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] < 0.0) {
      if (lambda[i] < -1e-10 * lmax) {
        throw NumericalError("matrix_sqrt_psd: eigenvalue " + std::to_string(lambda[i]) +
                             " is too negative for a covariance matrix");
      }
      lambda[i] = 0.0;
    }
  }
  const Matrix& q = es.eigenvectors();
  Matrix r = q * lambda.cwiseSqrt().asDiagonal() * q.transpose();
  return 0.5 * (r + r.transpose());
}

BuresCost bures_cost(const Vector& m_a, const Matrix& s_a, const Vector& m_b, const Matrix& s_b) {
  const Index k = m_a.size();
  if (m_b.size() != k || s_a.rows() != k || s_a.cols() != k || s_b.rows() != k || s_b.cols() != k) {
    throw std::invalid_argument("bures_cost: dimension mismatch");
  }
  BuresCost out;
  out.advective = (m_a - m_b).squaredNorm();
  double cross;
  if (k == 1) {
    cross = std::sqrt(std::max(s_a(0, 0), 0.0) * std::max(s_b(0, 0), 0.0));
  } else {
    const Matrix ra = matrix_sqrt_psd(s_a);
    const Matrix inner = ra * s_b * ra;
    cross = matrix_sqrt_psd(0.5 * (inner + inner.transpose())).trace();
  }
  double diff = s_a.trace() + s_b.trace() - 2.0 * cross;
  // Roundoff can push a zero distance slightly below 0.
  if (diff < 0.0) diff = 0.0;
  out.diffusive = diff;
  out.total = out.advective + out.diffusive;
  return out;
}

}  // namespace otsense
