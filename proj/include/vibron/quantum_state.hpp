#pragma once

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>

#include "vibron/fock_basis.hpp"

namespace vibron {

using Complex = std::complex<double>;

/// Complex amplitude vector bound to a basis.
struct QuantumState {
  BasisPtr basis;
  Eigen::VectorXcd amplitudes;

  QuantumState() = default;
  QuantumState(BasisPtr b, Eigen::VectorXcd amps);

  double norm() const { return amplitudes.norm(); }
  Complex amplitude(const Occupation& occ) const;
  /// Throws NumericError when the norm is zero.
  void normalize();
};

/// |occ> on `basis`. Throws ConfigError if the basis does not contain it.
QuantumState number_state(const BasisPtr& basis, const Occupation& occ);

/// Copies the amplitudes of `state` onto `target` by occupation lookup. With
/// `allow_truncation == false`, any nonzero amplitude that has no slot in `target`
/// raises ConfigError.
QuantumState embed(const QuantumState& state, const BasisPtr& target, bool allow_truncation = false);

/// The n_y = 0 slice of a cartesian three-mode state, relabelled as |n_x>, n_x = 0..N.
struct TwoModeProjection {
  Eigen::VectorXcd amplitudes;  ///< renormalized
  double retained_weight = 0.0; ///< sum |c|^2 of the slice before renormalization
};

/// Throws ConfigError for non-cartesian input and NumericError when the slice is empty.
TwoModeProjection project_two_mode(const QuantumState& state);

/// Re-expresses a state in the other mode convention via the Fock-space lift of the
/// single-particle rotation between (tau_plus, tau_minus) and (tau_x, tau_y).
/// The target is the full basis of the requested convention; block-filtered inputs are
/// accepted (their image is generally spread over all l).
QuantumState convert_convention(const QuantumState& state, ModeConvention target);

/// Same, but into an explicit target basis. Throws ConfigError unless `target` is the
/// full number-conserving basis with matching N.
QuantumState convert_convention(const QuantumState& state, const BasisPtr& target);

/// CSV dump: header comment with the basis description, then `index,re,im` rows.
void write_state_csv(std::ostream& os, const QuantumState& state);
QuantumState read_state_csv(std::istream& is, const BasisPtr& basis);

}  // namespace vibron
