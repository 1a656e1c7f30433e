#include "vibron/sparse_operator.hpp"

#include <algorithm>
#include <ostream>

#include "vibron/error.hpp"

namespace vibron {

namespace {

Eigen::Index dim(const BasisPtr& b) { return static_cast<Eigen::Index>(b->size()); }

void require_same(const BasisPtr& a, const BasisPtr& b, const char* what) {
  if (!same_basis(a, b)) throw ConfigError(std::string(what) + ": basis mismatch");
}

}  // namespace

SparseOperator::SparseOperator(BasisPtr domain, BasisPtr codomain, SparseMatrix matrix,
                               bool hermitian)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != dim(codomain_) || matrix_.cols() != dim(domain_))
    throw ConfigError("operator matrix shape does not match its bases");
  matrix_.makeCompressed();
  if (hermitian) {
    if (!square()) throw ConfigError("a hermitian operator must be square");
    const double tol = 1e-12 * std::max(1.0, max_abs());
    const double defect = hermiticity_defect();
    if (defect > tol)
      throw NumericError("operator flagged hermitian has |A - A^dag| = " + std::to_string(defect));
    hermitian_ = true;
  }
}

SparseOperator SparseOperator::zero(BasisPtr domain, BasisPtr codomain) {
  SparseMatrix m(dim(codomain), dim(domain));
  return {std::move(domain), std::move(codomain), std::move(m)};
}

SparseOperator SparseOperator::identity(BasisPtr basis) {
  SparseMatrix m(dim(basis), dim(basis));
  m.setIdentity();
  return {basis, basis, std::move(m), true};
}

Eigen::VectorXcd SparseOperator::apply(const Eigen::VectorXcd& v) const {
  if (v.size() != matrix_.cols()) throw ConfigError("vector length does not match operator domain");
  return matrix_ * v;
}

QuantumState SparseOperator::apply(const QuantumState& state) const {
  require_same(state.basis, domain_, "apply");
  return {codomain_, matrix_ * state.amplitudes};
}

Complex SparseOperator::expectation(const QuantumState& state) const {
  require_same(state.basis, domain_, "expectation");
  const Eigen::VectorXcd image = matrix_ * state.amplitudes;
  if (square()) return state.amplitudes.dot(image);
  Complex acc{};
  for (std::size_t i = 0; i < codomain_->size(); ++i) {
    auto j = domain_->index_of(codomain_->state(i));
    if (j) acc += std::conj(state.amplitudes[static_cast<Eigen::Index>(*j)]) *
                  image[static_cast<Eigen::Index>(i)];
  }
  return acc;
}

SparseOperator SparseOperator::adjoint() const {
  SparseMatrix m = matrix_.adjoint();
  return {codomain_, domain_, std::move(m), hermitian_};
}

double SparseOperator::hermiticity_defect() const {
  if (!square()) throw ConfigError("hermiticity is only defined for square operators");
  SparseMatrix diff = matrix_ - SparseMatrix(matrix_.adjoint());
  double worst = 0.0;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  return worst;
}

double SparseOperator::max_abs() const {
  double worst = 0.0;
  for (int k = 0; k < matrix_.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(matrix_, k); it; ++it)
      worst = std::max(worst, std::abs(it.value()));
  return worst;
}

SparseOperator SparseOperator::with_hermitian_flag(bool flag) const {
  return {domain_, codomain_, matrix_, flag};
}

SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
  require_same(a.domain(), b.codomain(), "operator product");
  SparseMatrix m = (a.matrix() * b.matrix()).pruned();
  return {b.domain(), a.codomain(), std::move(m)};
}

SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
  require_same(a.domain(), b.domain(), "operator sum");
  require_same(a.codomain(), b.codomain(), "operator sum");
  SparseMatrix m = a.matrix() + b.matrix();
  return {a.domain(), a.codomain(), std::move(m)};
}

SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) {
  return a + Complex{-1.0} * b;
}

SparseOperator operator*(Complex s, const SparseOperator& a) {
  SparseMatrix m = s * a.matrix();
  return {a.domain(), a.codomain(), std::move(m)};
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) { return a * b - b * a; }

double max_abs_diff(const SparseOperator& a, const SparseOperator& b) {
  return (a - b).max_abs();
}

void write_coo(std::ostream& os, const SparseOperator& op) {
  const auto old_precision = os.precision(17);
  os << "# domain: " << op.domain()->describe() << "\n";
  os << "# codomain: " << op.codomain()->describe() << "\n";
  os << "row,col,re,im\n";
  const SparseMatrix& m = op.matrix();
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      os << it.row() << ',' << it.col() << ',' << it.value().real() << ',' << it.value().imag() << '\n';
  os.precision(old_precision);
}

}  // namespace vibron
