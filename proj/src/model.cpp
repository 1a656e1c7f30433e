#include "vibron/model.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vibron/algebra.hpp"
#include "vibron/error.hpp"

namespace vibron {

void ModelParams::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
  if (w2_sign != 1.0 && w2_sign != -1.0) throw ConfigError("w2_sign must be +1 or -1");
}

double ModelParams::q_over_c() const {
  if (gamma <= 0.0) throw ConfigError("q/c is only defined for gamma > 0");
  return 2.0 * (1.0 - gamma) / gamma;
}

HamiltonianKind parse_kind(const std::string& name) {
  if (name == "essential") return HamiltonianKind::essential;
  if (name == "general") return HamiltonianKind::general;
  if (name == "chain1") return HamiltonianKind::chain1;
  if (name == "chain2") return HamiltonianKind::chain2;
  if (name == "spinor_rotated") return HamiltonianKind::spinor_rotated;
  if (name == "n0_only") return HamiltonianKind::n0_only;
  if (name == "low_depletion") return HamiltonianKind::low_depletion;
  throw ConfigError("unknown hamiltonian kind '" + name + "'");
}

std::string to_string(HamiltonianKind kind) {
  switch (kind) {
    case HamiltonianKind::essential: return "essential";
    case HamiltonianKind::general: return "general";
    case HamiltonianKind::chain1: return "chain1";
    case HamiltonianKind::chain2: return "chain2";
    case HamiltonianKind::spinor_rotated: return "spinor_rotated";
    case HamiltonianKind::n0_only: return "n0_only";
    case HamiltonianKind::low_depletion: return "low_depletion";
  }
  return "?";
}

Normalization parse_normalization(const std::string& name) {
  if (name == "n_minus_1") return Normalization::n_minus_1;
  if (name == "n") return Normalization::n;
  throw ConfigError("normalization must be 'n_minus_1' or 'n'");
}

std::string to_string(Normalization n) { return n == Normalization::n ? "n" : "n_minus_1"; }

Normalization default_normalization(HamiltonianKind kind) {
  return kind == HamiltonianKind::spinor_rotated ? Normalization::n : Normalization::n_minus_1;
}

double divisor(Normalization norm, int n_total) {
  if (norm == Normalization::n) {
    if (n_total < 1) throw ConfigError("normalization n needs N >= 1");
    return n_total;
  }
  if (n_total < 2) throw ConfigError("normalization n_minus_1 needs N >= 2");
  return n_total - 1.0;
}

namespace {

SparseOperator scaled(double s, const SparseOperator& op) { return Complex{s} * op; }

SparseOperator n_tau(const BasisPtr& b) {
  return build_operator(expr::number(Mode::plus) + expr::number(Mode::minus), b, true);
}

SparseOperator l_squared(const BasisPtr& b) { return product_on(expr::Jz(), expr::Jz(), b); }

SparseOperator chain1_part(const ChainCoefficients& c, const BasisPtr& b) {
  const auto n = n_tau(b);
  const auto id = SparseOperator::identity(b);
  return scaled(c.E0, id) + scaled(c.epsilon, n) + scaled(c.alpha, n * n + n) + scaled(c.beta, l_squared(b));
}

SparseOperator finish(const SparseOperator& h) { return h.with_hermitian_flag(true); }

}  // namespace

LowDepletionParts low_depletion_parts(const BasisPtr& basis) {
  if (basis->number_conserving() || basis->convention() != ModeConvention::cartesian)
    throw ConfigError("low_depletion needs a truncated-pair cartesian basis");
  auto part = [&](Mode m) {
    const OperatorExpr e = Complex{-2.0} * expr::number(m) +
                           OperatorExpr{{1.0, {{m, LadderKind::annihilate}, {m, LadderKind::annihilate}}},
                                        {1.0, {{m, LadderKind::create}, {m, LadderKind::create}}}};
    return build_operator(e, basis, true);
  };
  return {part(Mode::x), part(Mode::y)};
}

SparseOperator build(HamiltonianKind kind, const ModelParams& p, const BasisPtr& basis) {
  p.validate();
  if (kind == HamiltonianKind::low_depletion) {
    auto parts = low_depletion_parts(basis);
    return finish(parts.hx + parts.hy);
  }
  if (!basis->number_conserving()) throw ConfigError(to_string(kind) + " needs a number-conserving basis");
  const int n_total = basis->total_n();
  const Normalization norm = p.normalization.value_or(default_normalization(kind));

  switch (kind) {
    case HamiltonianKind::essential: {
      const double d = divisor(norm, n_total);
      return finish(scaled(1.0 - p.gamma, n_tau(basis)) + scaled(p.w2_sign * p.gamma / d, w_squared(basis)));
    }
    case HamiltonianKind::general:
      return finish(chain1_part(p.chain, basis) + scaled(p.chain.A, w_squared(basis)));
    case HamiltonianKind::chain1:
      return finish(chain1_part(p.chain, basis));
    case HamiltonianKind::chain2:
      return finish(scaled(p.chain.E0, SparseOperator::identity(basis)) + scaled(p.chain.beta, l_squared(basis)) +
                    scaled(p.chain.A, w_squared(basis)));
    case HamiltonianKind::spinor_rotated: {
      if (p.gamma <= 0.0)
        throw ConfigError("spinor_rotated is singular at gamma = 0; use the n0_only kind for that limit");
      const double d = divisor(norm, n_total);
      const auto u = rotation_pi_half_mode0(basis);
      const auto j2_rot = u * total_spin_squared(basis) * u.adjoint();
      const auto n0 = build_operator(expr::number(Mode::sigma), basis, true);
      return finish(scaled(-(1.0 - p.gamma) / p.gamma, n0) + scaled(-1.0 / d, j2_rot));
    }
    case HamiltonianKind::n0_only:
      return finish(scaled(-p.alpha_n0, build_operator(expr::number(Mode::sigma), basis, true)));
    case HamiltonianKind::low_depletion: break;
  }
  throw ConfigError("unhandled hamiltonian kind");
}

double chain1_energy(int n_total, int n, int l, const ChainCoefficients& c) {
  if (n < 0 || n > n_total || std::abs(l) > n || (n - l) % 2 != 0)
    throw ConfigError("chain1 quantum numbers need 0 <= n <= N and l in {-n, -n+2, ..., n}");
  return c.E0 + c.epsilon * n + c.alpha * n * (n + 1.0) + c.beta * l * static_cast<double>(l);
}

namespace {

void check_chain2(int n_total, int v, int l) {
  if (v < 0 || 2 * v > n_total || std::abs(l) > n_total - 2 * v)
    throw ConfigError("chain2 quantum numbers need 0 <= v <= N/2 and |l| <= N - 2v");
}

}  // namespace

double chain2_energy(int n_total, int v, int l, const ChainCoefficients& c) {
  check_chain2(n_total, v, l);
  const double w = n_total - 2.0 * v;
  return c.E0 + c.beta * l * static_cast<double>(l) + c.A * w * (w + 1.0);
}

double chain2_energy_rewritten(int n_total, int v, int l, const ChainCoefficients& c) {
  check_chain2(n_total, v, l);
  const double n = n_total;
  return c.E0 + c.A * n * (n + 1.0) - 4.0 * c.A * ((n + 0.5) * v - static_cast<double>(v) * v) +
         c.beta * l * static_cast<double>(l);
}

std::vector<double> chain_spectrum(HamiltonianKind kind, int n_total, const ChainCoefficients& c,
                                   std::optional<int> l) {
  std::vector<double> out;
  if (kind == HamiltonianKind::chain1) {
    for (int n = 0; n <= n_total; ++n)
      for (int m = -n; m <= n; m += 2)
        if (!l || *l == m) out.push_back(chain1_energy(n_total, n, m, c));
  } else if (kind == HamiltonianKind::chain2) {
    for (int v = 0; 2 * v <= n_total; ++v)
      for (int m = -(n_total - 2 * v); m <= n_total - 2 * v; ++m)
        if (!l || *l == m) out.push_back(chain2_energy(n_total, v, m, c));
  } else {
    throw ConfigError("closed-form spectra exist only for chain1 and chain2");
  }
  std::sort(out.begin(), out.end());
  return out;
}

Spectrum spectral_decomposition(const SparseOperator& h, std::size_t cap) {
  if (!h.hermitian()) throw ConfigError("spectral_decomposition needs an operator flagged hermitian");
  const std::size_t dim = h.domain()->size();
  if (dim > cap)
    throw NumericError("block dimension " + std::to_string(dim) + " exceeds the dense cap " + std::to_string(cap) +
                       "; restrict the basis to a magnetization block");
  Spectrum s;
  const SparseMatrix& m = h.matrix();
  bool real = true;
  for (int k = 0; k < m.outerSize() && real; ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it)
      if (it.value().imag() != 0.0) {
        real = false;
        break;
      }
  if (real) {
    const Eigen::MatrixXd dense = Eigen::MatrixXcd(m).real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed to converge");
    s.values = es.eigenvalues();
    s.real_vectors = es.eigenvectors();
    s.vectors = s.real_vectors.cast<Complex>();
  } else {
    const Eigen::MatrixXcd dense = m;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(dense);
    if (es.info() != Eigen::Success) throw NumericError("eigensolver failed to converge");
    s.values = es.eigenvalues();
    s.vectors = es.eigenvectors();
  }
  if (dim > 0) {
    const double scale = std::max(1.0, s.values.cwiseAbs().maxCoeff());
    const Eigen::MatrixXcd residual = m * s.vectors - s.vectors * s.values.cast<Complex>().asDiagonal();
    const double worst = residual.colwise().norm().maxCoeff();
    if (worst > 1e-9 * scale) throw NumericError("eigenpair residual " + std::to_string(worst) + " too large");
  }
  return s;
}

std::vector<ScanColumn> spectrum_scan(HamiltonianKind kind, int n_total, int l, const std::vector<double>& gamma_grid,
                                      ModelParams params, const ParallelFor& parallel) {
  for (double g : gamma_grid)
    if (!(g >= 0.0 && g <= 1.0)) throw ConfigError("gamma grid values must lie in [0,1]");
  const auto basis = FockBasis::enumerate(n_total, ModeConvention::circular, BlockFilter::fixed_l(l));
  std::vector<ScanColumn> out(gamma_grid.size());
  parallel(gamma_grid.size(), [&](std::size_t i) {
    ModelParams p = params;
    p.gamma = gamma_grid[i];
    const Spectrum s = spectral_decomposition(build(kind, p, basis));
    out[i].gamma = p.gamma;
    out[i].energy_normalized = (s.values.array() - s.values[0]) / static_cast<double>(std::max(n_total, 1));
  });
  return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<ScanColumn>& scan) {
  const auto old = os.precision(17);
  os << "gamma,level_index,energy_normalized\n";
  for (const auto& col : scan)
    for (Eigen::Index k = 0; k < col.energy_normalized.size(); ++k)
      os << col.gamma << ',' << k << ',' << col.energy_normalized[k] << '\n';
  os.precision(old);
}

}  // namespace vibron
