#pragma once

// Dense reference implementations used by the unit and acceptance tests. Everything here
// works on the full cartesian basis with hand-built matrices and shares no observable code
// with the library.

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <tuple>
#include <vector>

#include "vibron/dynamics.hpp"
#include "vibron/model.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

/// (n_x, n_0, n_y) triples with n_x + n_0 + n_y = N, indexed in the library's order.
struct CartesianSpace {
  int n = 0;
  vibron::BasisPtr basis;
  std::vector<std::tuple<int, int, int>> states;
  std::map<std::tuple<int, int, int>, int> index;

  explicit CartesianSpace(int n_total)
      : n(n_total), basis(vibron::FockBasis::enumerate(n_total, vibron::ModeConvention::cartesian)) {
    for (std::size_t i = 0; i < basis->size(); ++i) {
      const auto& o = basis->state(i);
      states.emplace_back(o.first, o.zero, o.second);
      index[states.back()] = static_cast<int>(i);
    }
  }
  int dim() const { return static_cast<int>(states.size()); }

  /// a_to^dag a_from, modes 0 = x, 1 = sigma, 2 = y.
  MatrixXcd hop(int to, int from) const {
    MatrixXcd m = MatrixXcd::Zero(dim(), dim());
    for (int j = 0; j < dim(); ++j) {
      int occ[3] = {std::get<0>(states[j]), std::get<1>(states[j]), std::get<2>(states[j])};
      if (occ[from] == 0) continue;
      double amp = std::sqrt(static_cast<double>(occ[from]));
      --occ[from];
      amp *= std::sqrt(static_cast<double>(occ[to] + 1));
      ++occ[to];
      m(index.at({occ[0], occ[1], occ[2]}), j) += amp;
    }
    return m;
  }
};

struct Observables {
  MatrixXcd xx, xy, xz, jz, h;
};

inline Observables observables(const CartesianSpace& s, const MatrixXcd& h) {
  const Complex i{0.0, 1.0};
  Observables o;
  o.xx = 0.5 * (s.hop(1, 0) + s.hop(0, 1));
  o.xy = -0.5 * i * (s.hop(1, 0) - s.hop(0, 1));
  o.xz = 0.5 * (s.hop(1, 1) - s.hop(0, 0));
  o.jz = i * (s.hop(2, 0) - s.hop(0, 2));
  o.h = h;
  return o;
}

/// Quench from |0,N,0> on the full cartesian basis: dense propagation, dense observables.
/// Runs in long double so that the reference is tighter than the code under test.
inline vibron::TimeSeries brute_force_quench(double gamma, int n, const std::vector<double>& times) {
  using Real = long double;
  using CL = std::complex<Real>;
  using ML = Eigen::Matrix<CL, Eigen::Dynamic, Eigen::Dynamic>;
  using VL = Eigen::Matrix<CL, Eigen::Dynamic, 1>;
  const CartesianSpace space(n);
  vibron::ModelParams p;
  p.gamma = gamma;
  const MatrixXcd hd = vibron::build(vibron::HamiltonianKind::spinor_rotated, p, space.basis).dense();
  const Observables od = observables(space, hd);
  auto widen = [](const MatrixXcd& m) -> ML { return m.cast<CL>(); };
  const ML h = widen(od.h), xx = widen(od.xx), xy = widen(od.xy), xz_op = widen(od.xz), jz = widen(od.jz);
  Eigen::SelfAdjointEigenSolver<ML> es(h);
  VL psi0 = VL::Zero(space.dim());
  psi0[space.index.at({0, n, 0})] = 1.0L;
  const VL c = es.eigenvectors().adjoint() * psi0;

  vibron::TimeSeries ts;
  ts.n_total = n;
  ts.gamma = gamma;
  for (double t : times) {
    VL phased = c;
    for (int k = 0; k < c.size(); ++k) phased[k] *= std::polar(Real(1), -es.eigenvalues()[k] * Real(t));
    const VL psi = es.eigenvectors() * phased;
    auto ev = [&](const ML& a) { return psi.dot(a * psi).real(); };
    const Real xx2 = ev(xx * xx), yy2 = ev(xy * xy);
    const Real sym = 0.5L * ev(xx * xy + xy * xx);
    const Real a = 4 * xx2 / n, d = 4 * yy2 / n, b = 4 * sym / n;
    const Real mid = 0.5L * (a + d), rad = std::hypot(0.5L * (a - d), b);
    const Real lm = mid - rad, lp = mid + rad;
    const Real xz = ev(xz_op);
    ts.t.push_back(t);
    ts.xz_mean.push_back(double(xz));
    ts.lambda_minus.push_back(double(lm));
    ts.lambda_plus.push_back(double(lp));
    const bool sentinel = std::abs(xz) < 1e-8L * n;
    ts.sentinel.push_back(sentinel);
    ts.xi2.push_back(sentinel ? std::numeric_limits<double>::infinity() : double(Real(n) * n * lm / (4 * xz * xz)));
    ts.zeta2.push_back(double(1 / lp));
    ts.energy.push_back(double(ev(h)));
    ts.norm.push_back(double(psi.norm()));
    ts.jz_mean.push_back(double(ev(jz)));
    ts.xx_mean.push_back(double(ev(xx)));
    ts.xy_mean.push_back(double(ev(xy)));
  }
  return ts;
}

/// Largest difference over the columns shared with the library's TimeSeries, scaled by
/// max(1, |b|) so that xi2 near a sentinel (where it grows like 1/<Xz>^2) is compared relatively.
inline double max_column_difference(const vibron::TimeSeries& a, const vibron::TimeSeries& b) {
  if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  auto cmp = [&](const std::vector<double>& x, const std::vector<double>& y) {
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (std::isinf(x[k]) && std::isinf(y[k])) continue;
      worst = std::max(worst, std::abs(x[k] - y[k]) / std::max(1.0, std::abs(y[k])));
    }
  };
  cmp(a.t, b.t);
  cmp(a.xz_mean, b.xz_mean);
  cmp(a.lambda_minus, b.lambda_minus);
  cmp(a.lambda_plus, b.lambda_plus);
  cmp(a.xi2, b.xi2);
  cmp(a.zeta2, b.zeta2);
  cmp(a.energy, b.energy);
  cmp(a.norm, b.norm);
  cmp(a.jz_mean, b.jz_mean);
  for (std::size_t k = 0; k < a.size(); ++k)
    if (a.sentinel[k] != b.sentinel[k]) worst = std::numeric_limits<double>::infinity();
  return worst;
}

/// |psi(x)|^2 of a single-mode state for X = (a + a^dag)/2, i.e. Hermite functions with
/// vacuum density sqrt(2/pi) e^{-2x^2}.
inline double position_density(const VectorXcd& c, double x) {
  // orthonormal Hermite functions psi_n(q) at q = sqrt(2) x, scaled by 2^{1/4}
  const double q = std::sqrt(2.0) * x;
  double prev = 0.0, cur = std::pow(M_PI, -0.25) * std::exp(-0.5 * q * q);
  Complex amp = c[0] * cur;
  for (int k = 1; k < c.size(); ++k) {
    const double next = std::sqrt(2.0 / k) * q * cur - std::sqrt((k - 1.0) / k) * prev;
    prev = cur;
    cur = next;
    amp += c[k] * cur;
  }
  return std::sqrt(2.0) * std::norm(amp);
}

}  // namespace oracle
