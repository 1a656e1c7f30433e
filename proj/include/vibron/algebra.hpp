#pragma once

#include <map>
#include <string>
#include <vector>

#include "vibron/sparse_operator.hpp"

namespace vibron {

/// Single-particle modes. sigma is shared by both conventions; plus/minus are native
/// to circular bases and x/y to cartesian ones. Non-native modes are expanded through
///   tau_x = -(tau_+ - tau_-)/sqrt2,  tau_y = -i(tau_+ + tau_-)/sqrt2.
enum class Mode { sigma, plus, minus, x, y };

enum class LadderKind { create, annihilate };

struct LadderFactor {
  Mode mode;
  LadderKind kind;
};

/// coefficient * f_0 f_1 ... f_k, applied right to left as in the written product.
struct OperatorTerm {
  Complex coefficient{1.0};
  std::vector<LadderFactor> factors;
};

using OperatorExpr = std::vector<OperatorTerm>;

/// a_i^dag a_j
OperatorExpr bilinear(Mode i, Mode j, Complex coefficient = 1.0);
OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b);
OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b);
OperatorExpr operator*(Complex s, OperatorExpr a);

/// What to do when a term maps a domain state outside the codomain basis.
enum class OutOfRange { raise, drop };

/// Builds the matrix of `expr` from `domain` into `codomain`.
SparseOperator build_operator(const OperatorExpr& expr, const BasisPtr& domain,
                              const BasisPtr& codomain, bool hermitian = false,
                              OutOfRange policy = OutOfRange::raise);

/// Same, with the codomain derived from the particle-number and magnetization change of
/// `expr`: full bases map to full bases, l blocks to the shifted band, truncated-pair
/// bases to themselves (leaving the cutoff is dropped).
SparseOperator build_operator(const OperatorExpr& expr, const BasisPtr& domain,
                              bool hermitian = false);

/// Codomain that build_operator(expr, domain) would use.
BasisPtr image_basis(const OperatorExpr& expr, const BasisPtr& domain);

/// Product L*R evaluated on `basis`: R maps basis into its image, L maps back onto
/// `basis`, and components of L*R leaving `basis` are dropped.
SparseOperator product_on(const OperatorExpr& left, const OperatorExpr& right,
                          const BasisPtr& basis, bool hermitian = false);

/// Single ladder operator for a mode native to the basis convention. On number-conserving
/// bases the codomain has N +/- 1 particles.
SparseOperator ladder(Mode mode, LadderKind kind, const BasisPtr& basis);

bool is_native(Mode mode, ModeConvention convention);

using OperatorSet = std::map<std::string, SparseOperator>;

/// n, l, Q+, Q-, n_s, D+, D-, R+, R-, W2.
OperatorSet u3_generators(const BasisPtr& basis);

/// Jx, Jy, Jz, Qxy, Qyz, Qzx, Y, Dxy, J2, N0, Nplus, Nminus.
OperatorSet su3_generators(const BasisPtr& basis);

enum class Subalgebra { mode_x, mode_y, L };

/// Keys "x", "y", "z".
OperatorSet su2_subalgebra(Subalgebra which, const BasisPtr& basis);

/// e^{i pi N0 / 2}
SparseOperator rotation_pi_half_mode0(const BasisPtr& basis);

/// Expressions behind the generator sets, for callers that need products on other bases.
namespace expr {
OperatorExpr number(Mode m);
OperatorExpr Jx();
OperatorExpr Jy();
OperatorExpr Jz();
OperatorExpr Dplus();
OperatorExpr Dminus();
OperatorExpr su2(Subalgebra which, char component);
}  // namespace expr

/// Jx^2 + Jy^2 + Jz^2 and 1/2(D+D- + D-D+) + l^2, assembled from generator products.
SparseOperator total_spin_squared(const BasisPtr& basis);
SparseOperator w_squared(const BasisPtr& basis);

}  // namespace vibron
