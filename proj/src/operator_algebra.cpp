#include "choigram/operator_algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace choigram {

void require_finite(const ComplexMatrix& m, const std::string& what) {
  if (!m.allFinite()) {
    throw std::invalid_argument(what + ": non-finite matrix entries rejected");
  }
}

ComplexVector vec(const ComplexMatrix& m) {
  // Eigen's default storage is column-major, so the raw data already is
  // the column-stacked vector.
  return Eigen::Map<const ComplexVector>(m.data(), m.size());
}

ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols) {
  if (v.size() != rows * cols) {
    throw std::invalid_argument("unvec: vector length does not match rows * cols");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

ComplexMatrix matrix_unit(Eigen::Index dim, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= dim || j >= dim) {
    throw std::invalid_argument("matrix_unit: index out of range");
  }
  ComplexMatrix e = ComplexMatrix::Zero(dim, dim);
  e(i, j) = 1.0;
  return e;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix pauli_i() { return ComplexMatrix::Identity(2, 2); }

ComplexMatrix pauli_x() {
  ComplexMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

ComplexMatrix pauli_y() {
  ComplexMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

ComplexMatrix pauli_z() {
  ComplexMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

HermitianMatrix::HermitianMatrix(const ComplexMatrix& a, double rel_tol) {
  if (a.rows() == 0 || a.rows() != a.cols()) {
    throw std::invalid_argument("HermitianMatrix: nonempty square matrix required");
  }
  require_finite(a, "HermitianMatrix");
  const ComplexMatrix adj = a.adjoint();
  defect_ = (a - adj).cwiseAbs().maxCoeff();
  const double scale = a.cwiseAbs().maxCoeff();
  if (defect_ > rel_tol * scale) {
    std::ostringstream msg;
    msg << "HermitianMatrix: Hermiticity defect " << defect_ << " exceeds " << rel_tol
        << " * max|entry| (" << scale << ")";
    throw std::invalid_argument(msg.str());
  }
  mat_ = 0.5 * (a + adj);
}

std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(a.matrix(), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    std::ostringstream msg;
    msg << "hermitian_eigenvalues: QR iteration did not converge for dim " << a.dim()
        << " (iteration budget 30 * dim = " << 30 * a.dim() << ")";
    throw EigensolverError(msg.str());
  }
  std::vector<double> evs(solver.eigenvalues().data(),
                          solver.eigenvalues().data() + a.dim());
  const double sum = std::accumulate(evs.begin(), evs.end(), 0.0);
  const double scale = a.matrix().cwiseAbs().maxCoeff();
  const double budget = 1e-10 * static_cast<double>(a.dim()) * scale;
  if (std::abs(sum - a.trace()) > budget) {
    std::ostringstream msg;
    msg << "hermitian_eigenvalues: eigenvalue sum " << sum << " deviates from trace "
        << a.trace() << " beyond " << budget;
    throw EigensolverError(msg.str());
  }
  return evs;
}

double trace_norm(const ComplexMatrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("trace_norm: square matrix required");
  }
  if (a.rows() == 0) return 0.0;
  require_finite(a, "trace_norm");
  return Eigen::JacobiSVD<ComplexMatrix>(a).singularValues().sum();
}

double condition_estimate(const ComplexMatrix& a) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("condition_estimate: nonempty square matrix required");
  }
  const Eigen::VectorXd sv = Eigen::JacobiSVD<ComplexMatrix>(a).singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (smin <= 0.0 || smax <= 0.0) return std::numeric_limits<double>::infinity();
  return smax / smin;
}

ComplexMatrix invert(const ComplexMatrix& a, double cond_limit) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw std::invalid_argument("invert: nonempty square matrix required");
  }
  require_finite(a, "invert");
  Eigen::JacobiSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  const double cond = (smin <= 0.0 || smax <= 0.0)
                          ? std::numeric_limits<double>::infinity()
                          : smax / smin;
  if (!(cond <= cond_limit)) {
    std::ostringstream msg;
    msg << "invert: condition estimate " << cond << " exceeds limit " << cond_limit;
    throw SingularMapError(msg.str(), cond);
  }
  return svd.matrixV() * sv.cwiseInverse().cast<Complex>().asDiagonal() *
         svd.matrixU().adjoint();
}

}  // namespace choigram
