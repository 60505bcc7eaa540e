#include "choigram/charfunc.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>

namespace choigram {

namespace {

// Tr(A B) without forming the product.
Complex trace_of_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.transpose().cwiseProduct(b).sum();
}

void check_basis_dim(const ChoiOperator& omega, const UnitaryBasis& basis,
                     const char* where) {
  if (basis.space_dim != omega.dim * omega.dim) {
    std::ostringstream msg;
    msg << where << ": basis space dimension " << basis.space_dim
        << " does not match the doubled space d^2 = " << omega.dim * omega.dim;
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

UnitaryBasis pauli_basis(int qubit_count) {
  if (qubit_count < 1) {
    throw std::invalid_argument("pauli_basis: qubit_count >= 1 required");
  }
  const std::array<ComplexMatrix, 4> single = {pauli_i(), pauli_x(), pauli_y(),
                                               pauli_z()};
  const Eigen::Index dim = Eigen::Index(1) << qubit_count;
  const std::size_t count = std::size_t(1) << (2 * qubit_count);
  std::vector<ComplexMatrix> elements;
  elements.reserve(count);
  for (std::size_t idx = 0; idx < count; ++idx) {
    ComplexMatrix u = single[(idx >> (2 * (qubit_count - 1))) & 3];
    for (int factor = qubit_count - 2; factor >= 0; --factor) {
      u = kron(u, single[(idx >> (2 * factor)) & 3]);
    }
    elements.push_back(std::move(u));
  }
  return UnitaryBasis{"pauli", dim, std::move(elements), static_cast<double>(dim), true};
}

UnitaryBasis weyl_basis(Eigen::Index space_dim) {
  if (space_dim < 2) {
    throw std::invalid_argument("weyl_basis: space dimension >= 2 required");
  }
  const Eigen::Index d = space_dim;
  std::vector<ComplexMatrix> elements;
  elements.reserve(static_cast<std::size_t>(d * d));
  const double step = 2.0 * std::numbers::pi / static_cast<double>(d);
  // U_{ab}(r, c) = omega^{b c} when r == c + a (mod d), zero otherwise.
  for (Eigen::Index a = 0; a < d; ++a) {
    for (Eigen::Index b = 0; b < d; ++b) {
      ComplexMatrix u = ComplexMatrix::Zero(d, d);
      for (Eigen::Index c = 0; c < d; ++c) {
        u((c + a) % d, c) = std::polar(1.0, step * static_cast<double>(b * c));
      }
      elements.push_back(std::move(u));
    }
  }
  return UnitaryBasis{"weyl", d, std::move(elements), static_cast<double>(d), true};
}

UnitaryBasis custom_basis(std::string name, std::vector<ComplexMatrix> elements) {
  if (elements.empty()) {
    throw std::invalid_argument("custom_basis: at least one element required");
  }
  const Eigen::Index d = elements.front().rows();
  if (static_cast<Eigen::Index>(elements.size()) != d * d) {
    throw std::invalid_argument("custom_basis: a basis on a D-dim space needs D^2 elements");
  }
  const ComplexMatrix id = ComplexMatrix::Identity(d, d);
  for (const auto& u : elements) {
    if (u.rows() != d || u.cols() != d) {
      throw std::invalid_argument("custom_basis: elements must share one dimension");
    }
    require_finite(u, "custom_basis");
    if ((u.adjoint() * u - id).cwiseAbs().maxCoeff() > 1e-12) {
      throw std::invalid_argument("custom_basis: element is not unitary within 1e-12");
    }
  }
  UnitaryBasis basis{std::move(name), d, std::move(elements), static_cast<double>(d),
                     true};
  basis.orthogonal = max_orthogonality_defect(basis) <= 1e-10;
  return basis;
}

double max_unitarity_defect(const UnitaryBasis& basis) {
  const ComplexMatrix id = ComplexMatrix::Identity(basis.space_dim, basis.space_dim);
  double worst = 0.0;
  for (const auto& u : basis.elements) {
    worst = std::max(worst, (u.adjoint() * u - id).cwiseAbs().maxCoeff());
  }
  return worst;
}

double max_orthogonality_defect(const UnitaryBasis& basis) {
  double worst = 0.0;
  for (std::size_t mu = 0; mu < basis.elements.size(); ++mu) {
    for (std::size_t nu = 0; nu < basis.elements.size(); ++nu) {
      const Complex overlap =
          trace_of_product(basis.elements[mu].adjoint(), basis.elements[nu]);
      const double expected = (mu == nu) ? basis.ortho_constant : 0.0;
      worst = std::max(worst, std::abs(overlap - expected));
    }
  }
  return worst;
}

Complex char_function(const ChoiOperator& omega, const ComplexMatrix& u) {
  const Eigen::Index dd = omega.dim * omega.dim;
  if (u.rows() != dd || u.cols() != dd) {
    throw std::invalid_argument("char_function: unitary dimension mismatch");
  }
  return trace_of_product(omega.matrix.matrix(), u);
}

CharFunctionTable char_function_table(const ChoiOperator& omega,
                                      const UnitaryBasis& basis) {
  check_basis_dim(omega, basis, "char_function_table");
  CharFunctionTable table{basis.name, {}};
  table.values.reserve(basis.elements.size());
  for (const auto& u : basis.elements) {
    table.values.push_back(trace_of_product(omega.matrix.matrix(), u));
  }
  return table;
}

GramMatrix gram_matrix(const ChoiOperator& omega, const UnitaryBasis& basis) {
  check_basis_dim(omega, basis, "gram_matrix");
  const ComplexMatrix& om = omega.matrix.matrix();
  const std::size_t n = basis.elements.size();

  // G_{mu nu} = Tr(Omega U_mu^dag U_nu) = <U_mu, U_nu Omega>_HS.
  std::vector<ComplexMatrix> right;
  right.reserve(n);
  for (const auto& u : basis.elements) right.push_back(u * om);

  ComplexMatrix g(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t mu = 0; mu < n; ++mu) {
    const ComplexMatrix left = basis.elements[mu].conjugate();
    for (std::size_t nu = 0; nu < n; ++nu) {
      g(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu)) =
          left.cwiseProduct(right[nu]).sum();
    }
  }
  HermitianMatrix entries(g);
  const double min_ev = hermitian_eigenvalues(entries).front();
  return GramMatrix{std::move(entries), min_ev, omega.trace(), omega.dim};
}

double quadratic_form(const ChoiOperator& omega, const UnitaryBasis& basis,
                      const ComplexVector& coeffs) {
  check_basis_dim(omega, basis, "quadratic_form");
  if (coeffs.size() != static_cast<Eigen::Index>(basis.elements.size())) {
    throw std::invalid_argument("quadratic_form: coefficient count mismatch");
  }
  const GramMatrix g = gram_matrix(omega, basis);
  const Complex via_gram = (coeffs.adjoint() * g.entries.matrix() * coeffs).value();

  ComplexMatrix x = ComplexMatrix::Zero(basis.space_dim, basis.space_dim);
  for (Eigen::Index mu = 0; mu < coeffs.size(); ++mu) {
    x += coeffs(mu) * basis.elements[static_cast<std::size_t>(mu)];
  }
  const Complex via_trace = trace_of_product(omega.matrix.matrix(), x.adjoint() * x);

  if (std::abs(via_gram.imag()) > 1e-12 || std::abs(via_trace.imag()) > 1e-12) {
    std::ostringstream msg;
    msg << "quadratic_form: imaginary residue (" << via_gram.imag() << ", "
        << via_trace.imag() << ") exceeds 1e-12";
    throw ConsistencyError(msg.str());
  }
  if (std::abs(via_gram.real() - via_trace.real()) > 1e-10) {
    std::ostringstream msg;
    msg << "quadratic_form: Gram route " << via_gram.real() << " and trace route "
        << via_trace.real() << " disagree beyond 1e-10";
    throw ConsistencyError(msg.str());
  }
  return via_gram.real();
}

ComplexMatrix reconstruct_from_char(const CharFunctionTable& table,
                                    const UnitaryBasis& basis) {
  if (table.values.size() != basis.elements.size()) {
    throw std::invalid_argument("reconstruct_from_char: table/basis size mismatch");
  }
  ComplexMatrix m = ComplexMatrix::Zero(basis.space_dim, basis.space_dim);
  for (std::size_t mu = 0; mu < basis.elements.size(); ++mu) {
    m += table.values[mu] * basis.elements[mu].adjoint();
  }
  return m / basis.ortho_constant;
}

BochnerReport bochner_choi_check(const Superoperator& phi, const UnitaryBasis& basis,
                                 double tol) {
  if (!is_trace_preserving(phi, tol)) {
    throw std::invalid_argument(
        "bochner_choi_check: hypothesis violated, the map must be trace-preserving");
  }
  const ChoiOperator j = choi_from_superop(phi);
  const ChoiOperator omega = normalize_choi(j);
  const double choi_min = hermitian_eigenvalues(omega.matrix).front();
  const GramMatrix g = gram_matrix(omega, basis);
  const bool choi_ok = choi_min >= -tol;
  const bool gram_ok = g.min_eigenvalue >= -tol;
  return BochnerReport{choi_min,  g.min_eigenvalue, choi_ok == gram_ok, choi_ok,
                       j.trace(), omega.trace(),    basis.name,         basis.orthogonal};
}

}  // namespace choigram
