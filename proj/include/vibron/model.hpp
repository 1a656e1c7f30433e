#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "vibron/parallel.hpp"
#include "vibron/sparse_operator.hpp"

namespace vibron {

enum class HamiltonianKind { essential, general, chain1, chain2, spinor_rotated, n0_only, low_depletion };

/// Divisor of the two-body term: N-1 or N.
enum class Normalization { n_minus_1, n };

struct ChainCoefficients {
  double E0 = 0.0;
  double epsilon = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double A = 0.0;
};

struct ModelParams {
  double gamma = 0.5;
  /// Unset means the kind's default: n_minus_1 for essential, n for spinor_rotated.
  std::optional<Normalization> normalization;
  ChainCoefficients chain;
  /// Strength of the -alpha N0 protocol.
  double alpha_n0 = 1.0;
  /// Sign in front of the W^2 term of the essential Hamiltonian. -1 reproduces the
  /// level structure of the zero-magnetization spectrum; +1 is the other written form.
  double w2_sign = -1.0;

  /// Throws ConfigError for gamma outside [0,1] or a sign other than +/-1.
  void validate() const;
  /// Quadratic-Zeeman ratio 2(1-gamma)/gamma; ConfigError for gamma = 0.
  double q_over_c() const;
};

HamiltonianKind parse_kind(const std::string& name);
std::string to_string(HamiltonianKind kind);
Normalization parse_normalization(const std::string& name);
std::string to_string(Normalization n);
Normalization default_normalization(HamiltonianKind kind);

/// Divisor for `n_total` particles; ConfigError for N-1 with N < 2.
double divisor(Normalization norm, int n_total);

/// Hamiltonian of the requested kind on `basis`. Every kind except low_depletion needs a
/// number-conserving basis; low_depletion needs a truncated-pair cartesian basis.
/// spinor_rotated at gamma = 0 raises ConfigError pointing at n0_only.
SparseOperator build(HamiltonianKind kind, const ModelParams& params, const BasisPtr& basis);

struct LowDepletionParts {
  SparseOperator hx;
  SparseOperator hy;
};

/// H_j = -2 N_j + tau_j^2 + tau_j^dag^2 on a truncated-pair basis (constants dropped).
LowDepletionParts low_depletion_parts(const BasisPtr& basis);

/// E0 + eps n + alpha n(n+1) + beta l^2 with n <= N, l in {-n, -n+2, ..., n}.
double chain1_energy(int n_total, int n, int l, const ChainCoefficients& c);
/// E0 + beta l^2 + A w(w+1), w = N - 2v, |l| <= w.
double chain2_energy(int n_total, int v, int l, const ChainCoefficients& c);
/// E0 + A N(N+1) - 4A[(N+1/2)v - v^2] + beta l^2.
double chain2_energy_rewritten(int n_total, int v, int l, const ChainCoefficients& c);

/// Closed-form spectrum of a chain on the full space or on a single l block
/// (`l` unset means all l), ascending, with multiplicities.
std::vector<double> chain_spectrum(HamiltonianKind kind, int n_total, const ChainCoefficients& c,
                                   std::optional<int> l = std::nullopt);

struct Spectrum {
  Eigen::VectorXd values;      ///< ascending
  Eigen::MatrixXcd vectors;    ///< orthonormal columns
  Eigen::MatrixXd real_vectors;///< same columns when H is real, else empty
  bool is_real() const { return real_vectors.size() > 0; }
};

inline constexpr std::size_t kDenseCap = 8192;

/// Dense Hermitian eigendecomposition. NumericError when the dimension exceeds `cap`
/// or residuals exceed 1e-9 * |H|.
Spectrum spectral_decomposition(const SparseOperator& h, std::size_t cap = kDenseCap);

struct ScanColumn {
  double gamma;
  Eigen::VectorXd energy_normalized;  ///< (E_k - E_0)/N, ascending
};

/// Spectrum of `kind` on the fixed-l block of N particles for each gamma.
std::vector<ScanColumn> spectrum_scan(HamiltonianKind kind, int n_total, int l,
                                      const std::vector<double>& gamma_grid, ModelParams params = {},
                                      const ParallelFor& parallel = serial_for);

/// Columns gamma, level_index, energy_normalized.
void write_spectrum_csv(std::ostream& os, const std::vector<ScanColumn>& scan);

}  // namespace vibron
