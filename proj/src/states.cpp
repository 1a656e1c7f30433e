#include "vibron/states.hpp"

#include <cmath>
#include <numbers>

#include "vibron/error.hpp"

namespace vibron {

namespace {

double log_factorial(int n) { return std::lgamma(n + 1.0); }

// x^k as (log|x|^k, sign); false when the power vanishes
bool signed_power(double x, int k, double& log_mag, double& sign) {
  sign = 1.0;
  log_mag = 0.0;
  if (k == 0) return true;
  if (x == 0.0) return false;
  log_mag = k * std::log(std::abs(x));
  sign = (x < 0.0 && k % 2 == 1) ? -1.0 : 1.0;
  return true;
}

}  // namespace

QuantumState coherent3(double x, double y, int n_total) {
  if (!std::isfinite(x) || !std::isfinite(y)) throw ConfigError("coherent3 needs finite x and y");
  const auto basis = FockBasis::enumerate(n_total, ModeConvention::cartesian);
  const double log_norm = 0.5 * n_total * std::log1p(x * x + y * y);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const auto [nx, n0, ny] = basis->state(i);
    double lx, sx, ly, sy;
    if (!signed_power(x, nx, lx, sx) || !signed_power(y, ny, ly, sy)) continue;
    const double log_amp = 0.5 * (log_factorial(n_total) - log_factorial(nx) - log_factorial(n0) - log_factorial(ny)) +
                           lx + ly - log_norm;
    amps[static_cast<Eigen::Index>(i)] = sx * sy * std::exp(log_amp);
  }
  return {basis, std::move(amps)};
}

QuantumState spin_coherent2(double theta, double phi, int n_total) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw ConfigError("theta must lie in [0, pi]");
  const auto basis = FockBasis::enumerate(n_total, ModeConvention::cartesian);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  const double s = std::sin(theta / 2.0);
  const double c = std::cos(theta / 2.0);
  for (int nx = 0; nx <= n_total; ++nx) {
    double ls, ss, lc, sc;
    if (!signed_power(s, nx, ls, ss) || !signed_power(c, n_total - nx, lc, sc)) continue;
    const double log_amp =
        0.5 * (log_factorial(n_total) - log_factorial(nx) - log_factorial(n_total - nx)) + ls + lc;
    const auto idx = *basis->index_of({nx, n_total - nx, 0});
    amps[static_cast<Eigen::Index>(idx)] = ss * sc * std::exp(log_amp) * std::polar(1.0, -(n_total - nx) * phi);
  }
  return {basis, std::move(amps)};
}

double theta_of_x(double x) {
  if (!(x >= 0.0)) throw ConfigError("theta_of_x needs x >= 0; use bloch_angles for negative x");
  return 2.0 * std::atan(x);
}

BlochAngles bloch_angles(double x) {
  if (!std::isfinite(x)) throw ConfigError("x must be finite");
  return {2.0 * std::atan(std::abs(x)), x < 0.0 ? std::numbers::pi : 0.0};
}

}  // namespace vibron
