#include "vibron/algebra.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <optional>
#include <set>

#include "vibron/error.hpp"

namespace vibron {

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);
const Complex kI{0.0, 1.0};

enum class Slot { first, zero, second };

struct NativeFactor {
  Slot slot;
  bool create;
};

struct NativeTerm {
  Complex coefficient;
  std::vector<NativeFactor> factors;
};

bool native_to(Mode m, ModeConvention c) {
  switch (m) {
    case Mode::sigma: return true;
    case Mode::plus:
    case Mode::minus: return c == ModeConvention::circular;
    case Mode::x:
    case Mode::y: return c == ModeConvention::cartesian;
  }
  return false;
}

Slot slot_of(Mode m) {
  switch (m) {
    case Mode::sigma: return Slot::zero;
    case Mode::plus:
    case Mode::x: return Slot::first;
    default: return Slot::second;
  }
}

// Annihilator of a non-native mode as a combination of the two native ones
// (first, second). Creators use the complex conjugates.
std::array<Complex, 2> expansion(Mode m) {
  const double s = kInvSqrt2;
  switch (m) {
    case Mode::x: return {-s, s};                    // in terms of tau_+, tau_-
    case Mode::y: return {-kI * s, -kI * s};
    case Mode::plus: return {-s, kI * s};            // in terms of tau_x, tau_y
    case Mode::minus: return {s, kI * s};
    default: throw std::logic_error("sigma has no expansion");
  }
}

std::vector<NativeTerm> expand(const OperatorExpr& expr, ModeConvention convention) {
  std::vector<NativeTerm> out;
  for (const auto& term : expr) {
    std::vector<NativeTerm> partial{{term.coefficient, {}}};
    for (const auto& f : term.factors) {
      const bool create = f.kind == LadderKind::create;
      std::vector<NativeTerm> next;
      if (native_to(f.mode, convention)) {
        for (auto t : partial) {
          t.factors.push_back({slot_of(f.mode), create});
          next.push_back(std::move(t));
        }
      } else {
        const auto c = expansion(f.mode);
        for (const auto& t : partial) {
          for (int k = 0; k < 2; ++k) {
            const Complex w = create ? std::conj(c[k]) : c[k];
            NativeTerm u = t;
            u.coefficient *= w;
            u.factors.push_back({k == 0 ? Slot::first : Slot::second, create});
            next.push_back(std::move(u));
          }
        }
      }
      partial = std::move(next);
    }
    for (auto& t : partial)
      if (t.coefficient != Complex{}) out.push_back(std::move(t));
  }
  return out;
}

int& occupation_slot(Occupation& o, Slot s) {
  switch (s) {
    case Slot::first: return o.first;
    case Slot::zero: return o.zero;
    default: return o.second;
  }
}

// Applies the factors right to left; nullopt if an annihilator meets an empty mode.
std::optional<std::pair<Occupation, double>> act(const NativeTerm& t, Occupation o) {
  double amp = 1.0;
  for (auto it = t.factors.rbegin(); it != t.factors.rend(); ++it) {
    int& n = occupation_slot(o, it->slot);
    if (it->create) {
      ++n;
      amp *= std::sqrt(static_cast<double>(n));
    } else {
      if (n == 0) return std::nullopt;
      amp *= std::sqrt(static_cast<double>(n));
      --n;
    }
  }
  return std::make_pair(o, amp);
}

int delta_n(const NativeTerm& t) {
  int d = 0;
  for (const auto& f : t.factors) d += f.create ? 1 : -1;
  return d;
}

int delta_l(const NativeTerm& t) {
  int d = 0;
  for (const auto& f : t.factors) {
    if (f.slot == Slot::zero) continue;
    const int sign = f.slot == Slot::first ? 1 : -1;
    d += f.create ? sign : -sign;
  }
  return d;
}

SparseOperator assemble(const std::vector<NativeTerm>& terms, const BasisPtr& domain,
                        const BasisPtr& codomain, bool hermitian, OutOfRange policy) {
  std::vector<Eigen::Triplet<Complex>> entries;
  double scale = 0.0;
  for (std::size_t j = 0; j < domain->size(); ++j) {
    for (const auto& t : terms) {
      auto r = act(t, domain->state(j));
      if (!r) continue;
      auto i = codomain->index_of(r->first);
      if (!i) {
        if (policy == OutOfRange::raise)
          throw ConfigError("operator leaves the codomain basis (" + codomain->describe() + ")");
        continue;
      }
      const Complex v = t.coefficient * r->second;
      scale = std::max(scale, std::abs(v));
      entries.emplace_back(static_cast<int>(*i), static_cast<int>(j), v);
    }
  }
  SparseMatrix m(static_cast<Eigen::Index>(codomain->size()), static_cast<Eigen::Index>(domain->size()));
  m.setFromTriplets(entries.begin(), entries.end());
  // cancellations between expanded terms leave rounding residue
  m.prune([&](Eigen::Index, Eigen::Index, const Complex& v) { return std::abs(v) > 1e-14 * scale; });
  return {domain, codomain, std::move(m), hermitian};
}

}  // namespace

OperatorExpr bilinear(Mode i, Mode j, Complex coefficient) {
  return {{coefficient, {{i, LadderKind::create}, {j, LadderKind::annihilate}}}};
}

OperatorExpr operator+(OperatorExpr a, const OperatorExpr& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

OperatorExpr operator*(Complex s, OperatorExpr a) {
  for (auto& t : a) t.coefficient *= s;
  return a;
}

OperatorExpr operator-(OperatorExpr a, const OperatorExpr& b) { return std::move(a) + Complex{-1.0} * b; }

bool is_native(Mode mode, ModeConvention convention) { return native_to(mode, convention); }

BasisPtr image_basis(const OperatorExpr& expr, const BasisPtr& domain) {
  if (!domain->number_conserving()) return domain;
  const auto terms = expand(expr, domain->convention());
  if (terms.empty()) return domain;
  std::set<int> dn;
  int lo = 0, hi = 0;
  bool first = true;
  for (const auto& t : terms) {
    dn.insert(delta_n(t));
    const int dl = delta_l(t);
    lo = first ? dl : std::min(lo, dl);
    hi = first ? dl : std::max(hi, dl);
    first = false;
  }
  if (dn.size() != 1) throw ConfigError("operator mixes particle-number sectors");
  const int n = domain->total_n() + *dn.begin();
  if (n < 0) throw ConfigError("operator annihilates every state of " + domain->describe());
  if (domain->is_full()) return FockBasis::enumerate(n, domain->convention());
  const auto& f = domain->filter();
  return FockBasis::band(n, f.l_min + lo, f.l_max + hi);
}

SparseOperator build_operator(const OperatorExpr& expr, const BasisPtr& domain,
                              const BasisPtr& codomain, bool hermitian, OutOfRange policy) {
  if (domain->convention() != codomain->convention())
    throw ConfigError("domain and codomain use different mode conventions");
  return assemble(expand(expr, domain->convention()), domain, codomain, hermitian, policy);
}

SparseOperator build_operator(const OperatorExpr& expr, const BasisPtr& domain, bool hermitian) {
  const BasisPtr codomain = image_basis(expr, domain);
  const auto policy = domain->number_conserving() ? OutOfRange::raise : OutOfRange::drop;
  return build_operator(expr, domain, codomain, hermitian && same_basis(domain, codomain), policy);
}

SparseOperator product_on(const OperatorExpr& left, const OperatorExpr& right, const BasisPtr& basis,
                          bool hermitian) {
  const SparseOperator r = build_operator(right, basis);
  const SparseOperator l = build_operator(left, r.codomain(), basis, false, OutOfRange::drop);
  return (l * r).with_hermitian_flag(hermitian);
}

SparseOperator ladder(Mode mode, LadderKind kind, const BasisPtr& basis) {
  if (!is_native(mode, basis->convention()))
    throw ConfigError("mode is not part of the " + to_string(basis->convention()) + " convention");
  return build_operator({{1.0, {{mode, kind}}}}, basis);
}

namespace expr {

OperatorExpr number(Mode m) { return bilinear(m, m); }

OperatorExpr Jx() {
  using M = Mode;
  return kInvSqrt2 * (bilinear(M::sigma, M::plus) + bilinear(M::sigma, M::minus) +
                      bilinear(M::plus, M::sigma) + bilinear(M::minus, M::sigma));
}

OperatorExpr Jy() {
  using M = Mode;
  return (kI * kInvSqrt2) * (bilinear(M::sigma, M::minus) - bilinear(M::sigma, M::plus) +
                             bilinear(M::plus, M::sigma) - bilinear(M::minus, M::sigma));
}

OperatorExpr Jz() { return number(Mode::plus) - number(Mode::minus); }

OperatorExpr Dplus() {
  return std::sqrt(2.0) * (bilinear(Mode::plus, Mode::sigma) - bilinear(Mode::sigma, Mode::minus));
}

OperatorExpr Dminus() {
  return std::sqrt(2.0) * (bilinear(Mode::sigma, Mode::plus) - bilinear(Mode::minus, Mode::sigma));
}

OperatorExpr su2(Subalgebra which, char component) {
  Mode a = Mode::sigma, b = Mode::x;  // (a, b) with z = (a^dag a - b^dag b)/2
  if (which == Subalgebra::mode_y) b = Mode::y;
  if (which == Subalgebra::L) {
    a = Mode::plus;
    b = Mode::minus;
  }
  switch (component) {
    case 'x': return 0.5 * (bilinear(a, b) + bilinear(b, a));
    case 'y': return (-0.5 * kI) * (bilinear(a, b) - bilinear(b, a));
    case 'z': return 0.5 * (number(a) - number(b));
    default: throw ConfigError(std::string("unknown SU(2) component ") + component);
  }
}

}  // namespace expr

namespace {

void put(OperatorSet& set, const std::string& name, SparseOperator op) {
  set.insert_or_assign(name, std::move(op));
}

void require_number_conserving(const BasisPtr& basis) {
  if (!basis->number_conserving()) throw ConfigError("generators need a number-conserving basis");
}

}  // namespace

SparseOperator w_squared(const BasisPtr& basis) {
  require_number_conserving(basis);
  const SparseOperator pm = product_on(expr::Dplus(), expr::Dminus(), basis);
  const SparseOperator mp = product_on(expr::Dminus(), expr::Dplus(), basis);
  const SparseOperator ll = product_on(expr::Jz(), expr::Jz(), basis);
  return (Complex{0.5} * (pm + mp) + ll).with_hermitian_flag(true);
}

SparseOperator total_spin_squared(const BasisPtr& basis) {
  require_number_conserving(basis);
  const SparseOperator xx = product_on(expr::Jx(), expr::Jx(), basis);
  const SparseOperator yy = product_on(expr::Jy(), expr::Jy(), basis);
  const SparseOperator zz = product_on(expr::Jz(), expr::Jz(), basis);
  return (xx + yy + zz).with_hermitian_flag(true);
}

OperatorSet u3_generators(const BasisPtr& basis) {
  require_number_conserving(basis);
  using M = Mode;
  const double r2 = std::sqrt(2.0);
  OperatorSet g;
  put(g, "n", build_operator(expr::number(M::plus) + expr::number(M::minus), basis, true));
  put(g, "l", build_operator(expr::Jz(), basis, true));
  put(g, "Q+", build_operator(bilinear(M::plus, M::minus, r2), basis));
  put(g, "Q-", build_operator(bilinear(M::minus, M::plus, r2), basis));
  put(g, "n_s", build_operator(expr::number(M::sigma), basis, true));
  put(g, "D+", build_operator(expr::Dplus(), basis));
  put(g, "D-", build_operator(expr::Dminus(), basis));
  put(g, "R+", build_operator(r2 * (bilinear(M::plus, M::sigma) + bilinear(M::sigma, M::minus)), basis));
  put(g, "R-", build_operator(r2 * (bilinear(M::minus, M::sigma) + bilinear(M::sigma, M::plus)), basis));
  put(g, "W2", w_squared(basis));
  return g;
}

OperatorSet su3_generators(const BasisPtr& basis) {
  require_number_conserving(basis);
  using M = Mode;
  const double s = kInvSqrt2;
  OperatorSet g;
  put(g, "Jx", build_operator(expr::Jx(), basis, true));
  put(g, "Jy", build_operator(expr::Jy(), basis, true));
  put(g, "Jz", build_operator(expr::Jz(), basis, true));
  put(g, "Qxy", build_operator(kI * (bilinear(M::plus, M::minus) - bilinear(M::minus, M::plus)), basis, true));
  put(g, "Qyz", build_operator((kI * s) * (bilinear(M::minus, M::sigma) - bilinear(M::sigma, M::minus) +
                                           bilinear(M::plus, M::sigma) - bilinear(M::sigma, M::plus)),
                               basis, true));
  put(g, "Qzx", build_operator(s * (bilinear(M::plus, M::sigma) + bilinear(M::sigma, M::plus) -
                                    bilinear(M::sigma, M::minus) - bilinear(M::minus, M::sigma)),
                               basis, true));
  put(g, "Y", build_operator((1.0 / std::sqrt(3.0)) * (expr::number(M::plus) + expr::number(M::minus) -
                                                       Complex{2.0} * expr::number(M::sigma)),
                             basis, true));
  put(g, "Dxy", build_operator(bilinear(M::plus, M::minus) + bilinear(M::minus, M::plus), basis, true));
  put(g, "J2", total_spin_squared(basis));
  put(g, "N0", build_operator(expr::number(M::sigma), basis, true));
  put(g, "Nplus", build_operator(expr::number(M::plus), basis, true));
  put(g, "Nminus", build_operator(expr::number(M::minus), basis, true));
  return g;
}

OperatorSet su2_subalgebra(Subalgebra which, const BasisPtr& basis) {
  OperatorSet g;
  for (char c : {'x', 'y', 'z'}) put(g, std::string(1, c), build_operator(expr::su2(which, c), basis, true));
  return g;
}

SparseOperator rotation_pi_half_mode0(const BasisPtr& basis) {
  static const std::array<Complex, 4> powers{Complex{1, 0}, Complex{0, 1}, Complex{-1, 0}, Complex{0, -1}};
  std::vector<Eigen::Triplet<Complex>> entries;
  for (std::size_t i = 0; i < basis->size(); ++i)
    entries.emplace_back(static_cast<int>(i), static_cast<int>(i), powers[basis->state(i).zero % 4]);
  SparseMatrix m(static_cast<Eigen::Index>(basis->size()), static_cast<Eigen::Index>(basis->size()));
  m.setFromTriplets(entries.begin(), entries.end());
  return {basis, basis, std::move(m)};
}

}  // namespace vibron
