#include "vibron/meanfield.hpp"

#include <boost/math/tools/minima.hpp>
#include <boost/numeric/odeint.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <ostream>
#include <unordered_map>

#include "vibron/error.hpp"

namespace vibron {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0,1]");
}

double wrap_angle(double phi) {
  double w = std::fmod(phi, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

}  // namespace

std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::below_separatrix: return "below_separatrix";
    case TrajectoryKind::above_separatrix: return "above_separatrix";
    case TrajectoryKind::separatrix: return "separatrix";
  }
  return "?";
}

double energy_density_3mode(double r, double gamma) {
  if (!(r >= 0.0)) throw ConfigError("r must be non-negative");
  const double r2 = r * r;
  const double a = (1.0 - r2) / (1.0 + r2);
  return -(1.0 - gamma) / (1.0 + r2) + gamma * a * a;
}

double r_min(double gamma) {
  check_gamma(gamma);
  if (gamma <= 0.2) return 0.0;
  return std::sqrt((5.0 * gamma - 1.0) / (3.0 * gamma + 1.0));
}

double energy_density_2mode(const MeanFieldPoint& p, double gamma) {
  const double c = std::cos(p.phi);
  return -(1.0 - gamma) * (1.0 + p.z) / 2.0 - gamma * (1.0 - p.z * p.z) * c * c;
}

double minimum_energy_2mode(double gamma) {
  check_gamma(gamma);
  if (gamma <= 0.2) return -(1.0 - gamma);
  return -(3.0 * gamma + 1.0) * (3.0 * gamma + 1.0) / (16.0 * gamma);
}

double separatrix_energy(double gamma) { return -(1.0 - gamma); }

TrajectoryKind classify(double eta, double gamma) {
  const double s = separatrix_energy(gamma);
  if (std::abs(eta - s) <= 1e-9 * std::max(1.0, std::abs(s))) return TrajectoryKind::separatrix;
  return eta < s ? TrajectoryKind::below_separatrix : TrajectoryKind::above_separatrix;
}

FlowVelocity flow(const MeanFieldPoint& p, double gamma) {
  const double c = std::cos(p.phi);
  const double dh_dz = -(1.0 - gamma) / 2.0 + 2.0 * gamma * p.z * c * c;
  const double dh_dphi = gamma * (1.0 - p.z * p.z) * std::sin(2.0 * p.phi);
  return {dh_dz, -dh_dphi};
}

std::vector<StationaryPoint> stationary_points(double gamma) {
  check_gamma(gamma);
  std::vector<StationaryPoint> out;
  if (gamma < 0.2) return out;
  auto add = [&](double phi, double z, bool meridian = false) {
    MeanFieldPoint p{wrap_angle(phi), z};
    for (const auto& q : out)
      if (std::abs(q.point.phi - p.phi) < 1e-14 && q.point.z == p.z && q.meridian == meridian) return;
    out.push_back({p, energy_density_2mode(p, gamma), meridian});
  };
  // pole: cos^2(phi) = (1-g)/(4g)
  const double a = std::acos(std::min(1.0, std::sqrt((1.0 - gamma) / (4.0 * gamma))));
  for (double phi : {a, kPi - a, kPi + a, kTwoPi - a}) add(phi, 1.0);
  const double z0 = (1.0 / gamma - 1.0) / 4.0;
  add(0.0, z0);
  add(kPi, z0);
  if (gamma == 1.0) {
    add(kPi / 2.0, 0.0, true);
    add(3.0 * kPi / 2.0, 0.0, true);
  }
  return out;
}

Trajectory integrate_flow(const MeanFieldPoint& start, double gamma, double t_span, const FlowOptions& opt) {
  check_gamma(gamma);
  if (!(t_span > 0.0)) throw ConfigError("t_span must be positive");
  if (opt.samples < 2) throw ConfigError("need at least two output samples");
  using State = std::array<double, 2>;
  namespace ode = boost::numeric::odeint;
  auto rhs = [gamma](const State& s, State& ds, double) {
    const auto v = flow({s[0], s[1]}, gamma);
    ds[0] = v.phi_dot;
    ds[1] = v.z_dot;
  };
  auto stepper = ode::make_dense_output(opt.abs_tol, opt.rel_tol, ode::runge_kutta_dopri5<State>());
  State s{start.phi, start.z};
  stepper.initialize(s, 0.0, opt.initial_step);

  Trajectory traj;
  traj.energy = energy_density_2mode(start, gamma);
  traj.kind = classify(traj.energy, gamma);
  const std::size_t n = opt.samples;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = t_span * static_cast<double>(k) / static_cast<double>(n - 1);
    while (stepper.current_time() < t) {
      stepper.do_step(rhs);
      if (stepper.current_time_step() < opt.min_step)
        throw NumericError("flow integration step size underflow at t = " + std::to_string(stepper.current_time()));
    }
    State out = s;
    if (t == 0.0) {
      out = {start.phi, start.z};
    } else {
      stepper.calc_state(t, out);
    }
    traj.times.push_back(t);
    traj.points.push_back({wrap_angle(out[0]), out[1]});
  }
  return traj;
}

namespace {

// Marching squares over phi in [-pi/2, 3pi/2) (periodic) and z in [-1, 1]. The seam sits
// on cos(phi) = 0 so the loops around phi = 0 and phi = pi stay in one piece.
class Contour {
 public:
  Contour(double eta, double gamma, int res) : eta_(eta), gamma_(gamma), r_(res) {
    values_.resize(static_cast<std::size_t>(r_) * (r_ + 1));
    for (int j = 0; j <= r_; ++j)
      for (int i = 0; i < r_; ++i) values_[node(i, j)] = f(phi_at(i), z_at(j));
  }

  std::vector<Trajectory> trace() {
    for (int j = 0; j < r_; ++j)
      for (int i = 0; i < r_; ++i) cell(i, j);
    return chain();
  }

 private:
  double phi_at(double i) const { return -kPi / 2.0 + kTwoPi * i / r_; }
  double z_at(double j) const { return -1.0 + 2.0 * j / r_; }
  double f(double phi, double z) const { return energy_density_2mode({phi, z}, gamma_) - eta_; }
  std::size_t node(int i, int j) const { return static_cast<std::size_t>(j) * r_ + ((i % r_ + r_) % r_); }
  bool above(int i, int j) const { return values_[node(i, j)] >= 0.0; }

  // horizontal edge (i,j)-(i+1,j) and vertical edge (i,j)-(i,j+1)
  long h_edge(int i, int j) const { return static_cast<long>(j) * r_ + (i % r_); }
  long v_edge(int i, int j) const { return static_cast<long>(r_) * (r_ + 1) + static_cast<long>(j) * r_ + (i % r_); }

  MeanFieldPoint crossing(long id) {
    auto it = points_.find(id);
    if (it != points_.end()) return it->second;
    const long hcount = static_cast<long>(r_) * (r_ + 1);
    double p0, z0, p1, z1;
    if (id < hcount) {
      const int j = static_cast<int>(id / r_), i = static_cast<int>(id % r_);
      p0 = phi_at(i), p1 = phi_at(i + 1), z0 = z1 = z_at(j);
    } else {
      const long k = id - hcount;
      const int j = static_cast<int>(k / r_), i = static_cast<int>(k % r_);
      p0 = p1 = phi_at(i), z0 = z_at(j), z1 = z_at(j + 1);
    }
    double lo = 0.0, hi = 1.0;
    const bool lo_above = f(p0, z0) >= 0.0;
    for (int it2 = 0; it2 < 200 && hi - lo > 1e-16; ++it2) {
      const double mid = 0.5 * (lo + hi);
      const bool m_above = f(p0 + mid * (p1 - p0), z0 + mid * (z1 - z0)) >= 0.0;
      (m_above == lo_above ? lo : hi) = mid;
    }
    // the node at the crossing side may sit exactly on the level
    double s = 0.5 * (lo + hi);
    if (f(p0, z0) == 0.0) s = 0.0;
    if (f(p1, z1) == 0.0 && f(p0, z0) != 0.0) s = 1.0;
    MeanFieldPoint p{p0 + s * (p1 - p0), z0 + s * (z1 - z0)};
    points_.emplace(id, p);
    return p;
  }

  void segment(long a, long b) {
    const std::size_t idx = segments_.size();
    segments_.push_back({a, b});
    adjacency_[a].push_back(idx);
    adjacency_[b].push_back(idx);
  }

  void cell(int i, int j) {
    const bool a = above(i, j), b = above(i + 1, j), c = above(i + 1, j + 1), d = above(i, j + 1);
    const long bottom = h_edge(i, j), right = v_edge(i + 1, j), top = h_edge(i, j + 1), left = v_edge(i, j);
    std::vector<long> hit;
    if (a != b) hit.push_back(bottom);
    if (b != c) hit.push_back(right);
    if (c != d) hit.push_back(top);
    if (d != a) hit.push_back(left);
    if (hit.size() == 2) {
      segment(hit[0], hit[1]);
    } else if (hit.size() == 4) {
      const bool center = f(phi_at(i + 0.5), z_at(j + 0.5)) >= 0.0;
      if (center == a) {
        segment(bottom, right);
        segment(top, left);
      } else {
        segment(left, bottom);
        segment(right, top);
      }
    }
  }

  std::vector<Trajectory> chain() {
    std::vector<bool> used(segments_.size(), false);
    std::vector<Trajectory> out;
    auto walk = [&](std::size_t first, long start_edge) {
      Trajectory t;
      t.energy = eta_;
      t.kind = classify(eta_, gamma_);
      long edge = start_edge;
      std::size_t seg = first;
      t.points.push_back(crossing(edge));
      while (true) {
        used[seg] = true;
        const auto [a, b] = segments_[seg];
        edge = (a == edge) ? b : a;
        t.points.push_back(crossing(edge));
        std::size_t next = segments_.size();
        for (std::size_t s : adjacency_[edge])
          if (!used[s]) next = s;
        if (next == segments_.size()) break;
        seg = next;
      }
      for (auto& p : t.points) p.phi = wrap_angle(p.phi);
      out.push_back(std::move(t));
    };
    // open curves first, starting from an end, then closed loops
    std::vector<long> ends;
    for (const auto& [edge, segs] : adjacency_)
      if (segs.size() == 1) ends.push_back(edge);
    std::sort(ends.begin(), ends.end());
    for (long e : ends)
      if (!used[adjacency_[e][0]]) walk(adjacency_[e][0], e);
    for (std::size_t s = 0; s < segments_.size(); ++s)
      if (!used[s]) walk(s, segments_[s].first);
    return out;
  }

  double eta_, gamma_;
  int r_;
  std::vector<double> values_;
  std::vector<std::pair<long, long>> segments_;
  std::unordered_map<long, std::vector<std::size_t>> adjacency_;
  std::unordered_map<long, MeanFieldPoint> points_;
};

}  // namespace

std::vector<Trajectory> level_set(double eta, double gamma, int resolution) {
  check_gamma(gamma);
  if (resolution < 4) throw ConfigError("level-set resolution must be at least 4");
  const double lo = minimum_energy_2mode(gamma);
  if (!(eta >= lo - 1e-12 && eta <= 1e-12))
    throw ConfigError("eta must lie in [" + std::to_string(lo) + ", 0]");
  return Contour(eta, gamma, resolution).trace();
}

double phase_space_radius(double theta, int n_total) {
  if (n_total < 1) throw ConfigError("phase-space radius needs N >= 1");
  const double s = std::sin(theta / 2.0), c = std::cos(theta / 2.0);
  if (s == 0.0 || c == 0.0) return 0.0;
  const double ls = std::log(std::abs(s)), lc = std::log(std::abs(c));
  double sum = 0.0;
  for (int k = 0; k < n_total; ++k) {
    const double lb = std::lgamma(n_total + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n_total - k + 1.0);
    sum += std::exp(0.5 * std::log(n_total - static_cast<double>(k)) + lb + (2.0 * k + 1.0) * ls +
                    (2.0 * n_total - 2.0 * k - 1.0) * lc);
  }
  return sum;
}

std::vector<PhasePlanePoint> to_phase_space(const std::vector<MeanFieldPoint>& points, int n_total) {
  std::vector<PhasePlanePoint> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const double r = phase_space_radius(std::acos(std::clamp(p.z, -1.0, 1.0)), n_total);
    out.push_back({std::cos(p.phi) * r, std::sin(p.phi) * r});
  }
  return out;
}

double theta_max(int n_total) {
  // coarse scan, then Brent on the bracketing interval
  const int samples = 2000;
  int best = 0;
  double best_r = -1.0;
  for (int k = 0; k <= samples; ++k) {
    const double r = phase_space_radius(kPi * k / samples, n_total);
    if (r > best_r) best_r = r, best = k;
  }
  const double lo = kPi * std::max(0, best - 1) / samples, hi = kPi * std::min(samples, best + 1) / samples;
  auto neg = [n_total](double t) { return -phase_space_radius(t, n_total); };
  return boost::math::tools::brent_find_minima(neg, lo, hi, 50).first;
}

void write_trajectories_csv(std::ostream& os, const std::vector<Trajectory>& trajectories) {
  const auto old = os.precision(17);
  os << "trajectory,phi,z,eta,kind\n";
  for (std::size_t k = 0; k < trajectories.size(); ++k)
    for (const auto& p : trajectories[k].points)
      os << k << ',' << p.phi << ',' << p.z << ',' << trajectories[k].energy << ',' << to_string(trajectories[k].kind)
         << '\n';
  os.precision(old);
}

void write_phase_space_csv(std::ostream& os, const std::vector<Trajectory>& trajectories, int n_total) {
  const auto old = os.precision(17);
  os << "trajectory,X,P_X,eta\n";
  for (std::size_t k = 0; k < trajectories.size(); ++k)
    for (const auto& q : to_phase_space(trajectories[k].points, n_total))
      os << k << ',' << q.x << ',' << q.p << ',' << trajectories[k].energy << '\n';
  os.precision(old);
}

}  // namespace vibron
