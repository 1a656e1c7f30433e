#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <string>

#include "vibron/quantum_state.hpp"

namespace vibron {

/// Single-mode (or two-mode, indexed by n_x) amplitude vector c_n, n = 0..N.
using ModeVector = Eigen::VectorXcd;

/// Mode-x amplitudes of any number-conserving state: circular inputs are embedded into
/// the full basis and rotated to the cartesian convention, then the n_y = 0 slice is
/// taken and renormalized.
TwoModeProjection two_mode_state(const QuantumState& state);

struct QuadratureMeans {
  double x = 0.0;  ///< <X>, X = (a + a^dag)/2
  double p = 0.0;  ///< <P_X>, P_X = (a - a^dag)/2i
};

QuadratureMeans quadrature_means(const ModeVector& c);
/// Projects first (see two_mode_state).
QuadratureMeans quadrature_means(const QuantumState& state);

struct Axis {
  double min = 0.0;
  double max = 0.0;
  int count = 0;
  double at(int i) const { return count == 1 ? min : min + (max - min) * i / (count - 1); }
  double step() const { return count > 1 ? (max - min) / (count - 1) : 0.0; }
};

enum class GridKind { planar, spherical };

/// Values indexed (first axis, second axis): (x, p) for planar, (theta, phi) for spherical.
struct WignerGrid {
  GridKind kind = GridKind::planar;
  Axis first;
  Axis second;
  Eigen::MatrixXd values;
  /// Largest |imaginary part| met before it was discarded.
  double imag_residue = 0.0;
  /// Planar grids only: step wider than 1/4 of the vacuum width (1/2).
  bool coarse = false;

  /// Integration weight of node (i, j): dx dp, or trapezoidal sin(theta) dtheta dphi.
  double weight(int i, int j) const;
  double integral() const;
  /// Node with the largest value.
  std::pair<int, int> argmax() const;
  /// Node with the smallest value.
  double min_value() const { return values.minCoeff(); }
};

/// W(x, p) = (2/pi) sum_{mn} c_m^* c_n <m| D(a) Pi D(a)^dag |n>, a = x + i p, with the
/// displaced-parity elements written through associated Laguerre polynomials and
/// evaluated by a normalized recurrence with a running log scale.
WignerGrid wigner_planar(const ModeVector& c, const Axis& x, const Axis& p);

/// Default axes: 181 polar by 361 azimuthal nodes, both ends included.
inline Axis default_theta_axis() { return {0.0, 3.14159265358979323846, 181}; }
inline Axis default_phi_axis() { return {0.0, 2.0 * 3.14159265358979323846, 361}; }

/// Stratonovich-Weyl Wigner function of a spin j = N/2 state given in n_x order
/// (m = j - n_x), normalized so the sphere integral is 1.
WignerGrid wigner_sphere(const ModeVector& c, const Axis& theta = default_theta_axis(),
                         const Axis& phi = default_phi_axis());
/// Same for a density matrix in n_x order.
WignerGrid wigner_sphere(const Eigen::MatrixXcd& rho, const Axis& theta = default_theta_axis(),
                         const Axis& phi = default_phi_axis());

/// Integral of |min(W, 0)| with the grid's weights.
double negativity_volume(const WignerGrid& grid);

/// Header lines (# kind, # axis0, # axis1), then one CSV row per first-axis node.
void write_grid_csv(std::ostream& os, const WignerGrid& grid);
WignerGrid read_grid_csv(std::istream& is);

}  // namespace vibron
