#include "vibron/quantum_state.hpp"

#include <array>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "vibron/error.hpp"

namespace vibron {

QuantumState::QuantumState(BasisPtr b, Eigen::VectorXcd amps)
    : basis(std::move(b)), amplitudes(std::move(amps)) {
  if (!basis) throw ConfigError("state requires a basis");
  if (static_cast<std::size_t>(amplitudes.size()) != basis->size())
    throw ConfigError("amplitude vector length does not match basis dimension");
}

Complex QuantumState::amplitude(const Occupation& occ) const {
  auto idx = basis->index_of(occ);
  return idx ? amplitudes[static_cast<Eigen::Index>(*idx)] : Complex{};
}

void QuantumState::normalize() {
  const double n = norm();
  if (n == 0.0) throw NumericError("cannot normalize the zero vector");
  amplitudes /= n;
}

QuantumState number_state(const BasisPtr& basis, const Occupation& occ) {
  auto idx = basis->index_of(occ);
  if (!idx) throw ConfigError("basis does not contain the requested occupation");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  amps[static_cast<Eigen::Index>(*idx)] = 1.0;
  return {basis, std::move(amps)};
}

QuantumState embed(const QuantumState& state, const BasisPtr& target, bool allow_truncation) {
  if (state.basis->convention() != target->convention())
    throw ConfigError("embed requires matching mode conventions");
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target->size()));
  for (std::size_t i = 0; i < state.basis->size(); ++i) {
    const Complex a = state.amplitudes[static_cast<Eigen::Index>(i)];
    auto j = target->index_of(state.basis->state(i));
    if (j) {
      amps[static_cast<Eigen::Index>(*j)] = a;
    } else if (a != Complex{} && !allow_truncation) {
      throw ConfigError("state has support outside the target basis");
    }
  }
  return {target, std::move(amps)};
}

TwoModeProjection project_two_mode(const QuantumState& state) {
  const auto& basis = *state.basis;
  if (basis.convention() != ModeConvention::cartesian || !basis.number_conserving())
    throw ConfigError("two-mode projection needs a number-conserving cartesian basis");
  const int n = basis.total_n();
  TwoModeProjection out;
  out.amplitudes = Eigen::VectorXcd::Zero(n + 1);
  for (int nx = 0; nx <= n; ++nx) out.amplitudes[nx] = state.amplitude({nx, n - nx, 0});
  out.retained_weight = out.amplitudes.squaredNorm();
  if (out.retained_weight <= std::numeric_limits<double>::min())
    throw NumericError("two-mode projection: the n_y = 0 subspace carries no weight");
  out.amplitudes /= std::sqrt(out.retained_weight);
  return out;
}

namespace {

// Row r gives the old creation operator r (first, second) in terms of the new ones:
// old_r^dag = m[r][0] new_first^dag + m[r][1] new_second^dag.
using ModeMap = std::array<std::array<Complex, 2>, 2>;

ModeMap mode_map(ModeConvention from) {
  const double s = 1.0 / std::sqrt(2.0);
  const Complex i{0.0, 1.0};
  if (from == ModeConvention::circular) {
    // tau_+^dag = -(tau_x^dag + i tau_y^dag)/sqrt2, tau_-^dag = (tau_x^dag - i tau_y^dag)/sqrt2
    return {{{-s, -i * s}, {s, -i * s}}};
  }
  // tau_x^dag = -(tau_+^dag - tau_-^dag)/sqrt2, tau_y^dag = i(tau_+^dag + tau_-^dag)/sqrt2
  return {{{-s, s}, {i * s, i * s}}};
}

// u^k as (log|u|^k, phase^k); returns false when u == 0 and k > 0.
bool power_of(Complex u, int k, double& log_mag, Complex& phase) {
  if (k == 0) {
    log_mag = 0.0;
    phase = 1.0;
    return true;
  }
  const double a = std::abs(u);
  if (a == 0.0) return false;
  log_mag = k * std::log(a);
  phase = std::polar(1.0, k * std::arg(u));
  return true;
}

double log_binomial(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

QuantumState convert_convention(const QuantumState& state, const BasisPtr& target) {
  const auto& src = *state.basis;
  if (!src.number_conserving()) throw ConfigError("cannot convert a truncated-pair state");
  if (!target->is_full() || target->total_n() != src.total_n())
    throw ConfigError("convert_convention: target must be the full basis with the same N "
                      "(the mode rotation does not preserve magnetization blocks)");
  if (target->convention() == src.convention()) return embed(state, target);

  const ModeMap m = mode_map(src.convention());
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(target->size()));

  for (std::size_t s = 0; s < src.size(); ++s) {
    const Complex amp = state.amplitudes[static_cast<Eigen::Index>(s)];
    if (amp == Complex{}) continue;
    const auto [a, b, d] = src.state(s);
    const double log_norm_in = 0.5 * (std::lgamma(a + 1.0) + std::lgamma(d + 1.0));
    for (int i = 0; i <= a; ++i) {
      double l1, l2;
      Complex p1, p2;
      if (!power_of(m[0][0], i, l1, p1) || !power_of(m[0][1], a - i, l2, p2)) continue;
      for (int j = 0; j <= d; ++j) {
        double l3, l4;
        Complex p3, p4;
        if (!power_of(m[1][0], j, l3, p3) || !power_of(m[1][1], d - j, l4, p4)) continue;
        const int p = i + j;
        const int q = a + d - p;
        const double log_mag = log_binomial(a, i) + log_binomial(d, j) + l1 + l2 + l3 + l4 +
                               0.5 * (std::lgamma(p + 1.0) + std::lgamma(q + 1.0)) - log_norm_in;
        const auto idx = target->index_of({p, b, q});
        out[static_cast<Eigen::Index>(*idx)] += amp * std::exp(log_mag) * p1 * p2 * p3 * p4;
      }
    }
  }
  return {target, std::move(out)};
}

QuantumState convert_convention(const QuantumState& state, ModeConvention target) {
  return convert_convention(state, FockBasis::enumerate(state.basis->total_n(), target));
}

void write_state_csv(std::ostream& os, const QuantumState& state) {
  const auto old_precision = os.precision(17);
  os << "# " << state.basis->describe() << "\n";
  os << "index,re,im\n";
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    os << i << ',' << state.amplitudes[i].real() << ',' << state.amplitudes[i].imag() << '\n';
  os.precision(old_precision);
}

QuantumState read_state_csv(std::istream& is, const BasisPtr& basis) {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis->size()));
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("index", 0) == 0) continue;
    std::istringstream row(line);
    std::string a, b, c;
    if (!std::getline(row, a, ',') || !std::getline(row, b, ',') || !std::getline(row, c))
      throw ConfigError("malformed state row: " + line);
    const long idx = std::stol(a);
    if (idx < 0 || idx >= amps.size()) throw ConfigError("state index out of range: " + a);
    amps[idx] = Complex{std::stod(b), std::stod(c)};
  }
  return {basis, std::move(amps)};
}

}  // namespace vibron
