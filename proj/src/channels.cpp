#include "choigram/channels.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace choigram {

namespace {

// Deterministic standard-normal stream: Box-Muller over mt19937_64 so
// the draw sequence does not depend on the standard library's
// distribution internals.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : rng_(seed) {}

  double next() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform01();  // (0, 1]
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform01() {  // [0, 1)
    return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 rng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace

Superoperator::Superoperator(Eigen::Index d, ComplexMatrix m)
    : dim(d), matrix(std::move(m)) {
  if (dim < 1) throw std::invalid_argument("Superoperator: dim >= 1 required");
  if (matrix.rows() != dim * dim || matrix.cols() != dim * dim) {
    throw std::invalid_argument("Superoperator: matrix must be d^2 x d^2");
  }
  require_finite(matrix, "Superoperator");
}

ComplexMatrix Superoperator::apply(const ComplexMatrix& rho) const {
  if (rho.rows() != dim || rho.cols() != dim) {
    throw std::invalid_argument("Superoperator::apply: state dimension mismatch");
  }
  return unvec(matrix * vec(rho), dim, dim);
}

KrausChannel::KrausChannel(Eigen::Index d, std::vector<ComplexMatrix> ops, double tol)
    : dim(d), kraus_ops(std::move(ops)) {
  if (dim < 1) throw std::invalid_argument("KrausChannel: dim >= 1 required");
  if (kraus_ops.empty()) {
    throw std::invalid_argument("KrausChannel: at least one Kraus operator required");
  }
  ComplexMatrix sum = ComplexMatrix::Zero(dim, dim);
  for (const auto& k : kraus_ops) {
    if (k.rows() != dim || k.cols() != dim) {
      throw std::invalid_argument("KrausChannel: Kraus operators must be d x d");
    }
    require_finite(k, "KrausChannel");
    sum += k.adjoint() * k;
  }
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  completeness_defect = (sum - id).cwiseAbs().maxCoeff();
  trace_preserving = completeness_defect <= tol;
  if (!trace_preserving) {
    // Trace-non-increasing stacks are admitted; I - sum must stay PSD.
    const auto evs = hermitian_eigenvalues(HermitianMatrix(id - sum));
    if (evs.front() < -tol) {
      std::ostringstream msg;
      msg << "KrausChannel: completeness sum exceeds the identity (min eigenvalue of "
             "I - sum K^dag K is "
          << evs.front() << ")";
      throw std::invalid_argument(msg.str());
    }
  }
}

ChoiOperator::ChoiOperator(Eigen::Index d, HermitianMatrix m, bool is_normalized)
    : dim(d), matrix(std::move(m)), normalized(is_normalized) {
  if (dim < 1) throw std::invalid_argument("ChoiOperator: dim >= 1 required");
  if (matrix.dim() != dim * dim) {
    throw std::invalid_argument("ChoiOperator: matrix must be d^2 x d^2");
  }
}

ComplexVector max_entangled_state(Eigen::Index d) {
  if (d < 2) throw std::invalid_argument("max_entangled_state: dimension >= 2 required");
  ComplexVector v = ComplexVector::Zero(d * d);
  const double amp = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index i = 0; i < d; ++i) v(i * d + i) = amp;
  return v;
}

ChoiOperator choi_from_superop(const Superoperator& s, double hermit_rel_tol) {
  const Eigen::Index d = s.dim;
  ComplexMatrix j(d * d, d * d);
  // J = (1/d) sum_ij Phi(E_ij) (x) E_ij; entry by entry this is the
  // reshuffle J(m*d+i, n*d+jj) = (1/d) S(n*d+m, jj*d+i).
  const double inv_d = 1.0 / static_cast<double>(d);
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index n = 0; n < d; ++n) {
        for (Eigen::Index jj = 0; jj < d; ++jj) {
          j(m * d + i, n * d + jj) = inv_d * s.matrix(n * d + m, jj * d + i);
        }
      }
    }
  }
  try {
    return ChoiOperator(d, HermitianMatrix(j, hermit_rel_tol), false);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(
        std::string("choi_from_superop: map is not Hermiticity-preserving (") +
        e.what() + ")");
  }
}

ChoiOperator normalize_choi(const ChoiOperator& j) {
  if (j.normalized) {
    throw std::invalid_argument("normalize_choi: input already normalized");
  }
  const double inv_d = 1.0 / static_cast<double>(j.dim);
  return ChoiOperator(j.dim, HermitianMatrix(inv_d * j.matrix.matrix()), true);
}

Superoperator superop_from_choi(const ChoiOperator& j) {
  const Eigen::Index d = j.dim;
  const double scale =
      j.normalized ? static_cast<double>(d * d) : static_cast<double>(d);
  ComplexMatrix s(d * d, d * d);
  const ComplexMatrix& jm = j.matrix.matrix();
  for (Eigen::Index m = 0; m < d; ++m) {
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index n = 0; n < d; ++n) {
        for (Eigen::Index jj = 0; jj < d; ++jj) {
          s(n * d + m, jj * d + i) = scale * jm(m * d + i, n * d + jj);
        }
      }
    }
  }
  return Superoperator(d, std::move(s));
}

Superoperator kraus_to_superop(const KrausChannel& k) {
  const Eigen::Index d = k.dim;
  ComplexMatrix s = ComplexMatrix::Zero(d * d, d * d);
  for (const auto& op : k.kraus_ops) {
    s += kron(op.conjugate(), op);
  }
  return Superoperator(d, std::move(s));
}

CpVerdict is_completely_positive(const ChoiOperator& j, double tol) {
  const auto evs = hermitian_eigenvalues(j.matrix);
  const double min_ev = evs.front();
  return CpVerdict{min_ev >= -tol, min_ev};
}

bool is_trace_preserving(const Superoperator& s, double tol) {
  const Eigen::Index d = s.dim;
  // Partial trace of the Choi matrix over the output factor, computed
  // straight from the superoperator so non-Hermiticity-preserving maps
  // are still testable.
  double worst = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index jj = 0; jj < d; ++jj) {
      Complex acc = 0.0;
      for (Eigen::Index m = 0; m < d; ++m) {
        acc += s.matrix(m * d + m, jj * d + i);
      }
      acc /= static_cast<double>(d);
      const Complex expected = (i == jj) ? Complex(1.0 / static_cast<double>(d), 0.0)
                                         : Complex(0.0, 0.0);
      worst = std::max(worst, std::abs(acc - expected));
    }
  }
  return worst <= tol;
}

Superoperator compose(const Superoperator& a, const Superoperator& b) {
  if (a.dim != b.dim) {
    throw std::invalid_argument("compose: dimension mismatch");
  }
  return Superoperator(a.dim, a.matrix * b.matrix);
}

KrausChannel random_cp_channel(Eigen::Index d, Eigen::Index rank, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_cp_channel: dim >= 1 required");
  if (rank < 1 || rank > d * d) {
    throw std::invalid_argument("random_cp_channel: 1 <= rank <= d^2 required");
  }
  GaussianStream g(seed);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  std::vector<ComplexMatrix> stack;
  stack.reserve(static_cast<std::size_t>(rank));
  for (Eigen::Index k = 0; k < rank; ++k) {
    ComplexMatrix a(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        const double re = g.next();
        const double im = g.next();
        a(i, j) = Complex(re, im) * inv_sqrt2;
      }
    }
    stack.push_back(std::move(a));
  }
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (const auto& a : stack) m += a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m);
  if (es.info() != Eigen::Success) {
    throw EigensolverError("random_cp_channel: whitening eigensolve failed");
  }
  const ComplexMatrix white =
      es.eigenvectors() *
      es.eigenvalues().cwiseSqrt().cwiseInverse().cast<Complex>().asDiagonal() *
      es.eigenvectors().adjoint();
  for (auto& a : stack) a = a * white;
  return KrausChannel(d, std::move(stack));
}

Superoperator identity_superop(Eigen::Index d) {
  return Superoperator(d, ComplexMatrix::Identity(d * d, d * d));
}

Superoperator transpose_superop(Eigen::Index d) {
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      m(j * d + i, i * d + j) = 1.0;
    }
  }
  return Superoperator(d, std::move(m));
}

Superoperator depolarizing_superop(Eigen::Index d) {
  const ComplexVector id_vec = vec(ComplexMatrix::Identity(d, d));
  ComplexMatrix m = (id_vec * id_vec.transpose()) / static_cast<double>(d);
  return Superoperator(d, std::move(m));
}

}  // namespace choigram
