#pragma once

// Quantum channel representations (Kraus, superoperator, Choi), the
// conversions among them, and Choi's complete-positivity test.

#include "choigram/operator_algebra.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace choigram {

/// Matrix acting on column-stacked density operators.
struct Superoperator {
  Superoperator(Eigen::Index d, ComplexMatrix m);

  Eigen::Index dim;      // Hilbert-space dimension d; matrix is d^2 x d^2
  ComplexMatrix matrix;

  ComplexMatrix apply(const ComplexMatrix& rho) const;
};

/// Kraus representation. Construction checks the completeness sum
/// sum_k K_k^dag K_k: equal to the identity within tol means trace
/// preserving; merely bounded by the identity is admitted with
/// trace_preserving == false; anything larger is rejected.
struct KrausChannel {
  KrausChannel(Eigen::Index d, std::vector<ComplexMatrix> ops, double tol = kDefaultTol);

  Eigen::Index dim;
  std::vector<ComplexMatrix> kraus_ops;
  bool trace_preserving;
  double completeness_defect;  // max|sum K^dag K - I|
};

/// Choi matrix carrier. `normalized` distinguishes J(Phi) from its
/// 1/d rescaling; both traces are worth reporting since they differ by
/// that factor for trace-preserving maps.
struct ChoiOperator {
  ChoiOperator(Eigen::Index d, HermitianMatrix m, bool is_normalized);

  Eigen::Index dim;       // d; matrix lives on the doubled space, d^2 x d^2
  HermitianMatrix matrix;
  bool normalized;

  double trace() const { return matrix.trace(); }
};

struct CpVerdict {
  bool cp;
  double min_eigenvalue;
};

/// (1/sqrt(d)) sum_i |i> (x) |i>, length d^2.
ComplexVector max_entangled_state(Eigen::Index d);

/// Reshuffle a superoperator into its (unnormalized) Choi matrix
/// J = (Phi (x) I)(|Omega><Omega|). Trace-preserving maps give trace 1.
/// hermit_rel_tol is the symmetrization budget passed through to the
/// HermitianMatrix carrier; loosen it only for matrices assembled from
/// ill-conditioned inversions.
ChoiOperator choi_from_superop(const Superoperator& s,
                               double hermit_rel_tol = kHermitianRelTol);

/// Scale by 1/d and set the normalized flag.
ChoiOperator normalize_choi(const ChoiOperator& j);

/// Inverse reshuffle; exact round-trip partner of choi_from_superop.
Superoperator superop_from_choi(const ChoiOperator& j);

Superoperator kraus_to_superop(const KrausChannel& k);

/// Choi criterion: completely positive iff the Choi matrix is positive
/// semidefinite (min eigenvalue >= -tol).
CpVerdict is_completely_positive(const ChoiOperator& j, double tol = kDefaultTol);

/// Partial trace of J over the output factor must equal I/d.
bool is_trace_preserving(const Superoperator& s, double tol = kDefaultTol);

/// Map composition a after b.
Superoperator compose(const Superoperator& a, const Superoperator& b);

/// Deterministic trace-preserving CP channel: a Gaussian Kraus stack
/// whitened by (sum K^dag K)^{-1/2}. rank = 1 yields a Haar-ish random
/// unitary conjugation.
KrausChannel random_cp_channel(Eigen::Index d, Eigen::Index rank, std::uint64_t seed);

Superoperator identity_superop(Eigen::Index d);
Superoperator transpose_superop(Eigen::Index d);
Superoperator depolarizing_superop(Eigen::Index d);

}  // namespace choigram
