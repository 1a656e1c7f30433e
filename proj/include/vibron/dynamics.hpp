#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "vibron/model.hpp"
#include "vibron/parallel.hpp"

namespace vibron {

/// psi(t) = sum_k e^{-i E_k t} <v_k|psi0> |v_k> for every t.
std::vector<QuantumState> evolve(const SparseOperator& h, const QuantumState& psi0, const std::vector<double>& times,
                                 std::size_t cap = kDenseCap);

/// Sigma_ij = 2<X_i X_j + X_j X_i>/N over the mode-x subalgebra directions x, y.
struct Covariance {
  Eigen::Matrix2d sigma;
  double lambda_minus = 0.0;
  double lambda_plus = 0.0;
  /// Columns: eigenvectors for lambda_minus, lambda_plus (directions in the xy plane).
  Eigen::Matrix2d directions;
};

/// Eigen-decomposition of a symmetric 2x2 matrix, ascending.
Covariance covariance_from(const Eigen::Matrix2d& sigma);

/// The X operators map a state on any magnetization block into the adjacent blocks;
/// their codomain is derived from the input basis, so no band is ever too narrow.
Covariance covariance_xy(const QuantumState& psi);

struct Criteria {
  double xi2 = 0.0;    ///< N^2 lambda_- / (4 <X_z>^2), +inf when sentinel
  double zeta2 = 0.0;  ///< 1 / lambda_+
  bool sentinel = false;
  double xz_mean = 0.0;
  Covariance covariance;
};

inline constexpr double kSentinelFraction = 1e-8;

/// Evaluates the witnesses from the second moments. ConfigError if the mean spin of the
/// mode-x subalgebra is not along z; NumericError if 1/N <= zeta2 <= xi2 fails by more
/// than 1e-9.
Criteria criteria_from_moments(double xz, double xx_mean, double xy_mean, const Eigen::Matrix2d& sigma, int n_total);
Criteria entanglement_criteria(const QuantumState& psi);

struct TimeSeries {
  int n_total = 0;
  double gamma = 0.0;
  std::vector<double> t;
  std::vector<double> xz_mean, lambda_minus, lambda_plus, xi2, zeta2, energy, norm, jz_mean;
  std::vector<bool> sentinel;
  // extra diagnostics
  std::vector<double> xx_mean, xy_mean, nx_mean, n0_mean;
  std::optional<std::vector<double>> quad_x, quad_p;
  /// false when the run skipped xi2/zeta2 (those columns are NaN)
  bool has_criteria = true;

  std::size_t size() const { return t.size(); }
};

/// Uniform grid of `points` values from 0 to t_max inclusive.
std::vector<double> linear_time_grid(double t_max, std::size_t points);

struct QuenchConfig {
  double gamma = 0.3;
  int n_total = 100;
  HamiltonianKind kind = HamiltonianKind::spinor_rotated;
  ModelParams params;  ///< gamma is overwritten by the field above
  /// Initial state; unset means |0,N,0> on the zero-magnetization block.
  std::optional<QuantumState> initial;
  std::vector<double> times = linear_time_grid(1000.0, 10000);
  /// Also record <X>, <P_X> of the projected state (costly: projects every sample).
  bool quadratures = false;
  /// xi2/zeta2 need the mean spin along z; switch off for tilted states (e.g. the n0_only protocol).
  bool criteria = true;
  std::size_t chunk = 256;

  void validate() const;
};

/// Evolves in the basis of the initial state by one dense eigendecomposition; observables
/// come from sparse operators applied to blocks of time samples.
TimeSeries quench(const QuenchConfig& config);

struct GapResult {
  double max_gap;
  std::size_t sentinel_count;
};

/// max_t (xi2 - zeta2) over non-sentinel rows; NumericError if every row is a sentinel,
/// ConfigError if the series was run without criteria.
GapResult max_gap(const TimeSeries& series);

struct SweepRow {
  double gamma;
  int n_total;
  double max_gap;
  std::size_t sentinel_count;
};

/// Quench + max_gap on every (gamma, N) cell.
std::vector<SweepRow> sweep(const std::vector<double>& gamma_grid, const std::vector<int>& n_list,
                            const std::vector<double>& frame, const ParallelFor& parallel = serial_for);

/// Columns t, Xz_mean, lambda_minus, lambda_plus, xi2_opt, zeta2_opt, energy, norm,
/// Jz_mean, sentinel_flag (plus X_mean, P_mean when recorded).
void write_timeseries_csv(std::ostream& os, const TimeSeries& series);
/// Columns gamma, N, max_gap, sentinel_count.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

/// <N_x>(t) from the vacuum under H_x = -2 N_x + tau_x^2 + tau_x^dag^2: 4 t^2.
double low_depletion_nx(double t);
/// Same under -w N_x + tau_x^2 + tau_x^dag^2: (4/k^2) sinh^2(k t) with k = sqrt(4 - w^2)
/// (sin for w^2 > 4).
double squeezing_nx(double t, double w);

}  // namespace vibron
