#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <iosfwd>
#include <vector>

#include "vibron/fock_basis.hpp"
#include "vibron/quantum_state.hpp"

namespace vibron {

using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Sparse complex matrix acting from a domain basis into a codomain basis.
///
/// Rows index the codomain, columns the domain. The two bases differ for operators that
/// change magnetization or particle number. When the hermitian flag is set the
/// constructor verifies max|A - A^dag| <= 1e-12 * max(1, max|A|).
class SparseOperator {
 public:
  SparseOperator(BasisPtr domain, BasisPtr codomain, SparseMatrix matrix, bool hermitian = false);

  /// Zero operator between two bases.
  static SparseOperator zero(BasisPtr domain, BasisPtr codomain);
  static SparseOperator identity(BasisPtr basis);

  const BasisPtr& domain() const { return domain_; }
  const BasisPtr& codomain() const { return codomain_; }
  const SparseMatrix& matrix() const { return matrix_; }
  bool hermitian() const { return hermitian_; }
  bool square() const { return same_basis(domain_, codomain_); }

  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  QuantumState apply(const QuantumState& state) const;
  /// <psi|A|psi>; codomain entries are matched to the domain by occupation, so this also
  /// works for rectangular operators (only the overlap with the domain contributes).
  Complex expectation(const QuantumState& state) const;

  SparseOperator adjoint() const;
  Eigen::MatrixXcd dense() const { return Eigen::MatrixXcd(matrix_); }

  /// max|A - A^dag| over entries; requires a square operator.
  double hermiticity_defect() const;
  /// Largest |entry|; zero for the zero operator.
  double max_abs() const;

  SparseOperator with_hermitian_flag(bool flag) const;

 private:
  BasisPtr domain_;
  BasisPtr codomain_;
  SparseMatrix matrix_;
  bool hermitian_ = false;
};

/// Composition A*B; requires A.domain == B.codomain.
SparseOperator operator*(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator+(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator-(const SparseOperator& a, const SparseOperator& b);
SparseOperator operator*(Complex s, const SparseOperator& a);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);

/// max|A - B| entrywise; requires identical domain and codomain.
double max_abs_diff(const SparseOperator& a, const SparseOperator& b);

/// Coordinate-list dump: header comment, then `row,col,re,im` for every stored entry.
void write_coo(std::ostream& os, const SparseOperator& op);

}  // namespace vibron
