#pragma once

// Dense complex linear-algebra substrate shared by every module.
//
// Vectorization convention, fixed once for the whole project: column
// stacking.
//
//   vec(M)[j * rows + i] = M(i, j)
//
// Under this convention vec(A X B) = (B^T (x) A) vec(X), so the
// superoperator of rho -> K rho K^dag is conj(K) (x) K. Every
// superoperator matrix in this project is written against this
// convention; mixing conventions is the classic silent bug, so nothing
// below offers a row-stacking variant.

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace choigram {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

// Relative Hermiticity-defect budget: below typical accumulation from
// O(10^3) double-precision flops.
inline constexpr double kHermitianRelTol = 1e-12;

// Shared verdict tolerance for positivity checks.
inline constexpr double kDefaultTol = 1e-10;

// Default refusal threshold for generic matrix inversion.
inline constexpr double kDefaultCondLimit = 1e12;

/// Inversion or an intermediate-map construction was refused because the
/// map is numerically singular. Carries the condition estimate that
/// tripped the limit.
class SingularMapError : public std::runtime_error {
 public:
  SingularMapError(const std::string& msg, double cond_estimate)
      : std::runtime_error(msg), cond_estimate_(cond_estimate) {}

  double condition_estimate() const { return cond_estimate_; }

 private:
  double cond_estimate_;
};

class EigensolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two algebraically equivalent computation routes disagreed beyond
/// tolerance. Signals a convention bug, never a data problem.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Rejects NaN/Inf entries with a message naming the offending value.
void require_finite(const ComplexMatrix& m, const std::string& what);

/// Column-stacking vec and its inverse.
ComplexVector vec(const ComplexMatrix& m);
ComplexMatrix unvec(const ComplexVector& v, Eigen::Index rows, Eigen::Index cols);

/// |i><j| on a dim-dimensional space.
ComplexMatrix matrix_unit(Eigen::Index dim, Eigen::Index i, Eigen::Index j);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

ComplexMatrix pauli_i();
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();

/// Hermitian carrier. Construction symmetrizes (A + A^dag)/2 and records
/// the pre-symmetrization defect max|A - A^dag|; inputs whose defect
/// exceeds rel_tol * max|entry| are rejected.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(const ComplexMatrix& a, double rel_tol = kHermitianRelTol);

  const ComplexMatrix& matrix() const { return mat_; }
  double defect() const { return defect_; }
  Eigen::Index dim() const { return mat_.rows(); }
  double trace() const { return mat_.trace().real(); }

 private:
  ComplexMatrix mat_;
  double defect_ = 0.0;
};

/// Real eigenvalues in ascending order. The eigenvalue sum is checked
/// against the trace (within 1e-10 * dim * max|entry|) as a solver
/// sanity gate.
std::vector<double> hermitian_eigenvalues(const HermitianMatrix& a);

/// Sum of singular values. For Hermitian input this is the sum of
/// absolute eigenvalues.
double trace_norm(const ComplexMatrix& a);

/// sigma_max / sigma_min from a full SVD; +inf when singular.
double condition_estimate(const ComplexMatrix& a);

/// SVD-based inverse. Throws SingularMapError when the condition
/// estimate exceeds cond_limit.
ComplexMatrix invert(const ComplexMatrix& a, double cond_limit = kDefaultCondLimit);

}  // namespace choigram
