#pragma once

// Unitary operator bases on the doubled space, the map-dependent
// characteristic function chi(U) = Tr(Omega U), the associated Gram
// matrix G_{mu nu} = Tr(Omega U_mu^dag U_nu), and the equivalence of
// Gram positivity with complete positivity.

#include "choigram/channels.hpp"
#include "choigram/operator_algebra.hpp"

#include <string>
#include <vector>

namespace choigram {

/// Family of D^2 unitaries spanning the operators on a D-dimensional
/// space. Elements are stored in a deterministic documented order so
/// exported Gram entries are stable across runs.
struct UnitaryBasis {
  std::string name;                     // "pauli" | "weyl" | "custom"
  Eigen::Index space_dim;               // D
  std::vector<ComplexMatrix> elements;  // D^2 elements, each D x D
  double ortho_constant;                // Tr(U_mu^dag U_nu) = c * delta
  bool orthogonal;                      // Hilbert-Schmidt orthogonal family
};

/// All 4^n tensor products of {I, X, Y, Z} in lexicographic order
/// (I < X < Y < Z per factor, leftmost factor most significant).
/// ortho_constant = 2^n.
UnitaryBasis pauli_basis(int qubit_count);

/// Clock-and-shift basis U_{ab} = X^a Z^b, ordered with a major, for
/// any space dimension D >= 2. ortho_constant = D.
UnitaryBasis weyl_basis(Eigen::Index space_dim);

/// Wraps a user-supplied unitary family. Unitarity is enforced;
/// Hilbert-Schmidt orthogonality is measured and recorded in the
/// `orthogonal` flag (a non-orthogonal family still supports the
/// positivity check but not the spectral correspondence).
UnitaryBasis custom_basis(std::string name, std::vector<ComplexMatrix> elements);

double max_unitarity_defect(const UnitaryBasis& basis);
double max_orthogonality_defect(const UnitaryBasis& basis);

struct GramMatrix {
  HermitianMatrix entries;  // D^2 x D^2
  double min_eigenvalue;
  double source_trace;      // trace of the Choi matrix the entries came from
  Eigen::Index source_dim;  // channel dimension d
};

struct CharFunctionTable {
  std::string basis;
  std::vector<Complex> values;  // index-aligned with the basis elements
};

/// Tr(Omega U). At the identity this is trace(Omega).
Complex char_function(const ChoiOperator& omega, const ComplexMatrix& u);

CharFunctionTable char_function_table(const ChoiOperator& omega, const UnitaryBasis& basis);

/// G_{mu nu} = Tr(Omega U_mu^dag U_nu) with its minimum eigenvalue.
GramMatrix gram_matrix(const ChoiOperator& omega, const UnitaryBasis& basis);

/// sum_{mu nu} conj(c_mu) G_{mu nu} c_nu, evaluated both through the
/// Gram matrix and as Tr(Omega X^dag X) with X = sum c_mu U_mu. The two
/// routes must agree within 1e-10 (and carry imaginary residue below
/// 1e-12), otherwise a ConsistencyError reports a convention bug.
double quadratic_form(const ChoiOperator& omega, const UnitaryBasis& basis,
                      const ComplexVector& coeffs);

/// (1/ortho_constant) sum_mu chi(U_mu) U_mu^dag; reproduces Omega for a
/// Hilbert-Schmidt orthogonal basis.
ComplexMatrix reconstruct_from_char(const CharFunctionTable& table, const UnitaryBasis& basis);

struct BochnerReport {
  double choi_min;   // min eigenvalue of the normalized Choi matrix
  double gram_min;   // min eigenvalue of the Gram matrix
  bool agree;        // both verdicts coincide at the tolerance
  bool cp;
  double trace_j;
  double trace_omega;
  std::string basis;
  // eig(G) = {D * eig(Omega)}, each D-fold, holds only for orthogonal
  // bases; false suppresses that interpretation of gram_min.
  bool spectral_correspondence;
};

/// Positivity check of a trace-preserving map through both the Choi
/// spectrum and the Gram spectrum. Non-trace-preserving input violates
/// the theorem hypothesis and is rejected.
BochnerReport bochner_choi_check(const Superoperator& phi, const UnitaryBasis& basis,
                                 double tol = kDefaultTol);

}  // namespace choigram
