#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace vibron {

/// Point on the mode-x Bloch sphere: azimuth phi and z = cos(theta).
struct MeanFieldPoint {
  double phi = 0.0;
  double z = 1.0;
};

enum class TrajectoryKind { below_separatrix, above_separatrix, separatrix };
std::string to_string(TrajectoryKind kind);

struct Trajectory {
  std::vector<MeanFieldPoint> points;
  std::vector<double> times;  ///< empty for level-set curves
  double energy = 0.0;
  TrajectoryKind kind = TrajectoryKind::below_separatrix;
};

/// -(1-g)/(1+r^2) + g((1-r^2)/(1+r^2))^2
double energy_density_3mode(double r, double gamma);
/// 0 for gamma <= 1/5, sqrt((5g-1)/(3g+1)) above.
double r_min(double gamma);

/// h = -(1-g)(1+z)/2 - g(1-z^2)cos^2(phi)
double energy_density_2mode(const MeanFieldPoint& p, double gamma);
/// Lowest value of h over the sphere.
double minimum_energy_2mode(double gamma);
/// -(1-g), the level through the pole z = 1.
double separatrix_energy(double gamma);
/// separatrix within 1e-9 relative, otherwise below/above.
TrajectoryKind classify(double eta, double gamma);

struct FlowVelocity {
  double phi_dot;
  double z_dot;
};

/// Canonical flow: phi' = dh/dz, z' = -dh/dphi.
FlowVelocity flow(const MeanFieldPoint& p, double gamma);

struct StationaryPoint {
  MeanFieldPoint point;
  double energy;
  /// true for the gamma = 1 family cos(phi) = 0: every z on that meridian is stationary.
  bool meridian = false;
};

/// Empty for gamma < 1/5. Azimuths are reported in [0, 2 pi).
std::vector<StationaryPoint> stationary_points(double gamma);

struct FlowOptions {
  double abs_tol = 1e-12;
  double rel_tol = 1e-12;
  double initial_step = 1e-3;
  double min_step = 1e-13;
  std::size_t samples = 1001;  ///< output points including both ends
};

/// Dormand-Prince integration of the flow; NumericError on step-size underflow.
Trajectory integrate_flow(const MeanFieldPoint& start, double gamma, double t_span, const FlowOptions& options = {});

/// Contours h = eta on the (phi, z) rectangle [0, 2pi] x [-1, 1] by marching squares on a
/// resolution x resolution grid of cells. Crossing points are refined by bisection so they
/// lie on the level set to ~1e-13. ConfigError for eta outside [min h, 0].
std::vector<Trajectory> level_set(double eta, double gamma, int resolution = 1024);

struct PhasePlanePoint {
  double x;
  double p;
};

/// R(theta, N) = sum_{k<N} sqrt(N-k) C(N,k) sin^{2k+1}(theta/2) cos^{2N-2k-1}(theta/2),
/// i.e. |<a>| of the spin-coherent state, evaluated in log space.
double phase_space_radius(double theta, int n_total);
/// (cos(phi) R, sin(phi) R) with theta = arccos z. Meaningful for theta up to theta_max(N).
std::vector<PhasePlanePoint> to_phase_space(const std::vector<MeanFieldPoint>& points, int n_total);
/// argmax of R(theta, N) over [0, pi].
double theta_max(int n_total);

/// Columns trajectory, phi, z, eta, kind.
void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajectories);
/// Columns trajectory, X, P_X, eta.
void write_phase_space_csv(std::ostream& os, const std::vector<Trajectory>& trajectories, int n_total);

}  // namespace vibron
