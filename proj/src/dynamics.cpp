#include "vibron/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "vibron/algebra.hpp"
#include "vibron/error.hpp"
#include "vibron/phasespace.hpp"

namespace vibron {

namespace {

// <psi| P A P |psi> for states on `basis`: components leaving the basis are dropped.
SparseOperator compressed(const OperatorExpr& e, const BasisPtr& basis) {
  return build_operator(e, basis, basis, false, OutOfRange::drop);
}

Eigen::MatrixXcd propagate(const Spectrum& s, const Eigen::VectorXcd& coeffs, const double* times, Eigen::Index m) {
  const Eigen::Index dim = coeffs.size();
  Eigen::MatrixXcd c(dim, m);
  for (Eigen::Index b = 0; b < m; ++b)
    for (Eigen::Index k = 0; k < dim; ++k) c(k, b) = coeffs[k] * std::polar(1.0, -s.values[k] * times[b]);
  if (s.is_real()) {
    Eigen::MatrixXcd out(dim, m);
    out.real() = s.real_vectors * c.real();
    out.imag() = s.real_vectors * c.imag();
    return out;
  }
  return s.vectors * c;
}

Eigen::RowVectorXd column_expectation(const SparseOperator& a, const Eigen::MatrixXcd& psi) {
  const Eigen::MatrixXcd image = a.matrix() * psi;
  return psi.conjugate().cwiseProduct(image).colwise().sum().real();
}

}  // namespace

std::vector<QuantumState> evolve(const SparseOperator& h, const QuantumState& psi0, const std::vector<double>& times,
                                 std::size_t cap) {
  if (!same_basis(h.domain(), psi0.basis)) throw ConfigError("initial state is not on the Hamiltonian's basis");
  const Spectrum s = spectral_decomposition(h, cap);
  const Eigen::VectorXcd coeffs = s.vectors.adjoint() * psi0.amplitudes;
  const Eigen::MatrixXcd psi = propagate(s, coeffs, times.data(), static_cast<Eigen::Index>(times.size()));
  std::vector<QuantumState> out;
  out.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (times[k] == 0.0) {
      out.emplace_back(psi0.basis, psi0.amplitudes);
    } else {
      out.emplace_back(psi0.basis, psi.col(static_cast<Eigen::Index>(k)));
    }
  }
  return out;
}

Covariance covariance_from(const Eigen::Matrix2d& sigma) {
  Covariance c;
  c.sigma = sigma;
  const double a = sigma(0, 0), b = 0.5 * (sigma(0, 1) + sigma(1, 0)), d = sigma(1, 1);
  const double mean = 0.5 * (a + d);
  const double r = std::hypot(0.5 * (a - d), b);
  c.lambda_minus = mean - r;
  c.lambda_plus = mean + r;
  // eigenvector of lambda_plus
  Eigen::Vector2d vp = (r == 0.0) ? Eigen::Vector2d(1.0, 0.0)
                       : (a >= d) ? Eigen::Vector2d(a - c.lambda_minus, b).normalized()
                                  : Eigen::Vector2d(b, d - c.lambda_minus).normalized();
  c.directions.col(1) = vp;
  c.directions.col(0) = Eigen::Vector2d(-vp[1], vp[0]);
  return c;
}

Covariance covariance_xy(const QuantumState& psi) {
  const int n = psi.basis->total_n();
  if (!psi.basis->number_conserving() || n < 1) throw ConfigError("covariance needs a number-conserving state with N >= 1");
  const auto xx = build_operator(expr::su2(Subalgebra::mode_x, 'x'), psi.basis);
  const auto xy = build_operator(expr::su2(Subalgebra::mode_x, 'y'), psi.basis);
  const Eigen::VectorXcd u = xx.matrix() * psi.amplitudes;
  const Eigen::VectorXcd w = xy.matrix() * psi.amplitudes;
  Eigen::Matrix2d sigma;
  sigma(0, 0) = 4.0 * u.squaredNorm() / n;
  sigma(1, 1) = 4.0 * w.squaredNorm() / n;
  sigma(0, 1) = sigma(1, 0) = 4.0 * u.dot(w).real() / n;
  return covariance_from(sigma);
}

Criteria criteria_from_moments(double xz, double xx_mean, double xy_mean, const Eigen::Matrix2d& sigma, int n_total) {
  const double tol = kSentinelFraction * n_total;
  if (std::abs(xx_mean) > tol || std::abs(xy_mean) > tol)
    throw ConfigError("the mean spin of the mode-x subalgebra is not along z; xi2/zeta2 are undefined here (disable criteria)");
  Criteria c;
  c.covariance = covariance_from(sigma);
  c.xz_mean = xz;
  c.zeta2 = 1.0 / c.covariance.lambda_plus;
  if (std::abs(xz) < tol) {
    c.sentinel = true;
    c.xi2 = std::numeric_limits<double>::infinity();
  } else {
    c.xi2 = static_cast<double>(n_total) * n_total * c.covariance.lambda_minus / (4.0 * xz * xz);
  }
  const double slack = 1e-9;
  if (c.zeta2 < 1.0 / n_total - slack || (!c.sentinel && c.zeta2 > c.xi2 + slack))
    throw NumericError("witness ordering 1/N <= zeta2 <= xi2 violated (zeta2=" + std::to_string(c.zeta2) +
                       ", xi2=" + std::to_string(c.xi2) + ")");
  return c;
}

Criteria entanglement_criteria(const QuantumState& psi) {
  const auto& b = psi.basis;
  const Covariance cov = covariance_xy(psi);
  const double xz = compressed(expr::su2(Subalgebra::mode_x, 'z'), b).expectation(psi).real();
  const double mx = compressed(expr::su2(Subalgebra::mode_x, 'x'), b).expectation(psi).real();
  const double my = compressed(expr::su2(Subalgebra::mode_x, 'y'), b).expectation(psi).real();
  return criteria_from_moments(xz, mx, my, cov.sigma, b->total_n());
}

std::vector<double> linear_time_grid(double t_max, std::size_t points) {
  if (points < 2 || !(t_max > 0.0)) throw ConfigError("time grid needs t_max > 0 and at least two points");
  std::vector<double> t(points);
  for (std::size_t k = 0; k < points; ++k) t[k] = t_max * static_cast<double>(k) / static_cast<double>(points - 1);
  t.back() = t_max;
  return t;
}

void QuenchConfig::validate() const {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
  if (kind == HamiltonianKind::spinor_rotated && gamma == 0.0)
    throw ConfigError("gamma = 0 makes the spinor Hamiltonian singular; use the n0_only protocol");
  if (kind == HamiltonianKind::low_depletion) throw ConfigError("quench needs a number-conserving Hamiltonian");
  if (n_total < 1) throw ConfigError("N must be at least 1");
  if (times.empty() || times.front() != 0.0) throw ConfigError("time grid must start at 0");
  for (std::size_t k = 1; k < times.size(); ++k)
    if (!(times[k] > times[k - 1])) throw ConfigError("time grid must be strictly increasing");
  if (chunk == 0) throw ConfigError("chunk must be positive");
  if (initial && initial->basis->total_n() != n_total) throw ConfigError("initial state has a different N");
}

TimeSeries quench(const QuenchConfig& config) {
  config.validate();
  const int n = config.n_total;
  const BasisPtr basis = config.initial ? config.initial->basis
                                        : FockBasis::enumerate(n, ModeConvention::circular, BlockFilter::fixed_l(0));
  const QuantumState psi0 = config.initial ? *config.initial : number_state(basis, {0, n, 0});

  ModelParams params = config.params;
  params.gamma = config.gamma;
  const SparseOperator h = build(config.kind, params, basis);
  const Spectrum spec = spectral_decomposition(h);
  const Eigen::VectorXcd coeffs = spec.vectors.adjoint() * psi0.amplitudes;

  const auto xz_op = compressed(expr::su2(Subalgebra::mode_x, 'z'), basis);
  const auto xx_mean_op = compressed(expr::su2(Subalgebra::mode_x, 'x'), basis);
  const auto xy_mean_op = compressed(expr::su2(Subalgebra::mode_x, 'y'), basis);
  const auto jz_op = compressed(expr::Jz(), basis);
  const auto nx_op = compressed(expr::number(Mode::x), basis);
  const auto n0_op = compressed(expr::number(Mode::sigma), basis);
  const auto xx_op = build_operator(expr::su2(Subalgebra::mode_x, 'x'), basis);
  const auto xy_op = build_operator(expr::su2(Subalgebra::mode_x, 'y'), basis);

  TimeSeries ts;
  ts.n_total = n;
  ts.gamma = config.gamma;
  ts.has_criteria = config.criteria;
  const std::size_t total = config.times.size();
  auto reserve = [total](std::vector<double>& v) { v.reserve(total); };
  for (auto* v : {&ts.t, &ts.xz_mean, &ts.lambda_minus, &ts.lambda_plus, &ts.xi2, &ts.zeta2, &ts.energy, &ts.norm,
                  &ts.jz_mean, &ts.xx_mean, &ts.xy_mean, &ts.nx_mean, &ts.n0_mean})
    reserve(*v);
  if (config.quadratures) {
    ts.quad_x.emplace();
    ts.quad_p.emplace();
  }

  for (std::size_t start = 0; start < total; start += config.chunk) {
    const auto m = static_cast<Eigen::Index>(std::min(config.chunk, total - start));
    Eigen::MatrixXcd psi = propagate(spec, coeffs, config.times.data() + start, m);
    if (start == 0) psi.col(0) = psi0.amplitudes;  // exact initial row

    const Eigen::RowVectorXd norms = psi.colwise().norm();
    const Eigen::RowVectorXd energy = column_expectation(h, psi);
    const Eigen::RowVectorXd xz = column_expectation(xz_op, psi);
    const Eigen::RowVectorXd mx = column_expectation(xx_mean_op, psi);
    const Eigen::RowVectorXd my = column_expectation(xy_mean_op, psi);
    const Eigen::RowVectorXd jz = column_expectation(jz_op, psi);
    const Eigen::RowVectorXd nx = column_expectation(nx_op, psi);
    const Eigen::RowVectorXd n0 = column_expectation(n0_op, psi);
    const Eigen::MatrixXcd u = xx_op.matrix() * psi;
    const Eigen::MatrixXcd w = xy_op.matrix() * psi;
    const Eigen::RowVectorXd uu = u.colwise().squaredNorm();
    const Eigen::RowVectorXd ww = w.colwise().squaredNorm();
    const Eigen::RowVectorXd uw = u.conjugate().cwiseProduct(w).colwise().sum().real();

    for (Eigen::Index b = 0; b < m; ++b) {
      Eigen::Matrix2d sigma;
      sigma << 4.0 * uu[b] / n, 4.0 * uw[b] / n, 4.0 * uw[b] / n, 4.0 * ww[b] / n;
      Criteria c;
      if (config.criteria) {
        c = criteria_from_moments(xz[b], mx[b], my[b], sigma, n);
      } else {
        c.covariance = covariance_from(sigma);
        c.xi2 = c.zeta2 = std::numeric_limits<double>::quiet_NaN();
      }
      ts.t.push_back(config.times[start + static_cast<std::size_t>(b)]);
      ts.xz_mean.push_back(xz[b]);
      ts.lambda_minus.push_back(c.covariance.lambda_minus);
      ts.lambda_plus.push_back(c.covariance.lambda_plus);
      ts.xi2.push_back(c.xi2);
      ts.zeta2.push_back(c.zeta2);
      ts.energy.push_back(energy[b]);
      ts.norm.push_back(norms[b]);
      ts.jz_mean.push_back(jz[b]);
      ts.sentinel.push_back(c.sentinel);
      ts.xx_mean.push_back(mx[b]);
      ts.xy_mean.push_back(my[b]);
      ts.nx_mean.push_back(nx[b]);
      ts.n0_mean.push_back(n0[b]);
      if (config.quadratures) {
        const auto q = quadrature_means(QuantumState{basis, psi.col(b)});
        ts.quad_x->push_back(q.x);
        ts.quad_p->push_back(q.p);
      }
    }
  }
  return ts;
}

GapResult max_gap(const TimeSeries& series) {
  if (!series.has_criteria) throw ConfigError("max_gap needs a series run with criteria enabled");
  GapResult r{-std::numeric_limits<double>::infinity(), 0};
  for (std::size_t k = 0; k < series.size(); ++k) {
    if (series.sentinel[k]) {
      ++r.sentinel_count;
      continue;
    }
    r.max_gap = std::max(r.max_gap, series.xi2[k] - series.zeta2[k]);
  }
  if (r.sentinel_count == series.size()) throw NumericError("every sample of the series is a sentinel");
  return r;
}

std::vector<SweepRow> sweep(const std::vector<double>& gamma_grid, const std::vector<int>& n_list,
                            const std::vector<double>& frame, const ParallelFor& parallel) {
  std::vector<SweepRow> rows(gamma_grid.size() * n_list.size());
  for (double g : gamma_grid) {
    QuenchConfig probe;
    probe.gamma = g;
    probe.times = frame;
    probe.validate();
  }
  parallel(rows.size(), [&](std::size_t idx) {
    QuenchConfig c;
    c.gamma = gamma_grid[idx / n_list.size()];
    c.n_total = n_list[idx % n_list.size()];
    c.times = frame;
    const GapResult g = max_gap(quench(c));
    rows[idx] = {c.gamma, c.n_total, g.max_gap, g.sentinel_count};
  });
  return rows;
}

void write_timeseries_csv(std::ostream& os, const TimeSeries& s) {
  const auto old = os.precision(17);
  const bool quad = s.quad_x.has_value();
  os << "t,Xz_mean,lambda_minus,lambda_plus,xi2_opt,zeta2_opt,energy,norm,Jz_mean,sentinel_flag";
  if (quad) os << ",X_mean,P_mean";
  os << '\n';
  for (std::size_t k = 0; k < s.size(); ++k) {
    os << s.t[k] << ',' << s.xz_mean[k] << ',' << s.lambda_minus[k] << ',' << s.lambda_plus[k] << ',';
    if (s.sentinel[k]) {
      os << "inf";
    } else {
      os << s.xi2[k];
    }
    os << ',' << s.zeta2[k] << ',' << s.energy[k] << ',' << s.norm[k] << ',' << s.jz_mean[k] << ','
       << (s.sentinel[k] ? 1 : 0);
    if (quad) os << ',' << (*s.quad_x)[k] << ',' << (*s.quad_p)[k];
    os << '\n';
  }
  os.precision(old);
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  const auto old = os.precision(17);
  os << "gamma,N,max_gap,sentinel_count\n";
  for (const auto& r : rows) os << r.gamma << ',' << r.n_total << ',' << r.max_gap << ',' << r.sentinel_count << '\n';
  os.precision(old);
}

double low_depletion_nx(double t) { return 4.0 * t * t; }

double squeezing_nx(double t, double w) {
  const double k2 = 4.0 - w * w;
  if (k2 == 0.0) return 4.0 * t * t;
  if (k2 > 0.0) {
    const double k = std::sqrt(k2);
    const double s = std::sinh(k * t);
    return 4.0 / k2 * s * s;
  }
  const double k = std::sqrt(-k2);
  const double s = std::sin(k * t);
  return 4.0 / (-k2) * s * s;
}

}  // namespace vibron
