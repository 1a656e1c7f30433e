// Acceptance suite: one PASS/FAIL line per criterion. Tolerances are fixed here.

#include <CLI11.hpp>
#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "oracle.hpp"
#include "vibron/algebra.hpp"
#include "vibron/dynamics.hpp"
#include "vibron/meanfield.hpp"
#include "vibron/model.hpp"
#include "vibron/phasespace.hpp"
#include "vibron/states.hpp"

using namespace vibron;

namespace {

constexpr double kPi = std::numbers::pi;
const Complex I{0.0, 1.0};

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  // records a sub-check; the first failing label is kept in the detail line
  void require(bool ok, const std::string& label) {
    if (!ok) {
      if (pass) detail << "failed: ";
      detail << label << "; ";
      pass = false;
    }
  }
};

using Criterion = std::function<void(Outcome&)>;

std::string sci(double v) {
  std::ostringstream os;
  os << std::setprecision(3) << std::scientific << v;
  return os.str();
}

std::string fix(double v, int digits = 4) {
  std::ostringstream os;
  os << std::setprecision(digits) << std::fixed << v;
  return os.str();
}

BasisPtr l0(int n) { return FockBasis::enumerate(n, ModeConvention::circular, BlockFilter::fixed_l(0)); }

double rel_spread(const std::vector<double>& v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return (*hi - *lo) / std::abs(*lo);
}

// 1 ------------------------------------------------------------------------------------
void operator_correspondence(Outcome& o) {
  constexpr double tol = 1e-12;
  double w2 = 0.0;
  for (int n = 3; n <= 6; ++n) {
    const auto b = FockBasis::enumerate(n, ModeConvention::circular);
    const auto u = rotation_pi_half_mode0(b);
    w2 = std::max(w2, max_abs_diff(w_squared(b), u * total_spin_squared(b) * u.adjoint()));
  }
  o.require(w2 < tol, "W2 vs rotated J2");
  o.detail << "W2 defect " << sci(w2) << "; ";

  const auto b = FockBasis::enumerate(5, ModeConvention::circular);
  const auto u = u3_generators(b);
  const auto s = su3_generators(b);
  const double r2 = std::sqrt(2.0), r3 = std::sqrt(3.0);
  // each line exactly as the mapping list writes it
  const std::vector<std::pair<std::string, double>> lines = {
      {"Jx=(R+ + R-)/2", max_abs_diff(s.at("Jx"), Complex{0.5} * (u.at("R+") + u.at("R-")))},
      {"Jy=(i/2)(R- - R+)", max_abs_diff(s.at("Jy"), (0.5 * I) * (u.at("R-") - u.at("R+")))},
      {"Jz=l", max_abs_diff(s.at("Jz"), u.at("l"))},
      {"Qxy=(i/sqrt2)(Q- - Q+)", max_abs_diff(s.at("Qxy"), (I / r2) * (u.at("Q-") - u.at("Q+")))},
      {"Qyz=(R- + R+)/2i", max_abs_diff(s.at("Qyz"), (Complex{1.0} / (2.0 * I)) * (u.at("R-") + u.at("R+")))},
      {"Qzx=(D+ + D-)/2", max_abs_diff(s.at("Qzx"), Complex{0.5} * (u.at("D+") + u.at("D-")))},
      {"Dxy=(Q+ + Q-)/sqrt2", max_abs_diff(s.at("Dxy"), Complex{1.0 / r2} * (u.at("Q+") + u.at("Q-")))},
      {"Y=(n - 2 n_s)/sqrt3", max_abs_diff(s.at("Y"), Complex{1.0 / r3} * (u.at("n") - Complex{2.0} * u.at("n_s")))},
      {"N0=n_s", max_abs_diff(s.at("N0"), u.at("n_s"))},
  };
  int held = 0;
  for (const auto& [name, defect] : lines) {
    if (defect < tol) {
      ++held;
    } else {
      o.require(false, name + " off by " + sci(defect));
    }
  }
  o.detail << held << "/9 mapping identities hold";
}

// 2 ------------------------------------------------------------------------------------
void transition_locus(Outcome& o) {
  constexpr double tol = 1e-6;
  const int points = 50;
  double worst = 0.0, switch_gamma = -1.0;
  for (int k = 0; k < points; ++k) {
    const double g = static_cast<double>(k) / (points - 1);
    // minimize over u = r^2 so the minimizer is not flattened near r = 0
    auto f = [g](double u) { return energy_density_3mode(std::sqrt(u), g); };
    auto [u, e] = boost::math::tools::brent_find_minima(f, 0.0, 4.0, 60);
    // Brent only closes in on a boundary minimum to sqrt(eps); the endpoint is compared directly
    if (f(0.0) <= e) u = 0.0;
    const double r_num = std::sqrt(std::max(u, 0.0));
    worst = std::max(worst, std::abs(r_num - r_min(g)));
    if (switch_gamma < 0.0 && r_num > tol) switch_gamma = g;
  }
  const double step = 1.0 / (points - 1);
  o.require(worst < tol, "minimizer mismatch");
  o.require(std::abs(switch_gamma - 0.2) <= step, "switch location");
  o.detail << "max |r_num - r_min| " << sci(worst) << ", switch at gamma " << fix(switch_gamma) << " (grid step "
           << fix(step) << ")";
}

// 3 ------------------------------------------------------------------------------------
void meanfield_tables(Outcome& o) {
  constexpr double tol = 1e-10;
  double worst = 0.0;
  for (double g : {0.25, 0.5, 0.75, 1.0}) {
    const double z_bent = (1.0 / g - 1.0) / 4.0;
    const double c_pole = std::sqrt(1.0 / g - 1.0) / 2.0;
    int pole = 0, bent = 0;
    for (const auto& s : stationary_points(g)) {
      if (s.meridian) continue;
      const auto v = flow(s.point, g);
      worst = std::max(worst, std::abs(v.phi_dot) + std::abs(v.z_dot));
      if (std::abs(s.point.z - 1.0) < tol) {
        ++pole;
        worst = std::max({worst, std::abs(std::abs(std::cos(s.point.phi)) - c_pole), std::abs(s.energy + (1.0 - g))});
      } else {
        ++bent;
        worst = std::max({worst, std::abs(s.point.z - z_bent), std::abs(std::abs(std::cos(s.point.phi)) - 1.0),
                          std::abs(s.energy + (3 * g + 1) * (3 * g + 1) / (16 * g))});
      }
    }
    o.require(pole == (c_pole == 0.0 ? 2 : 4) && bent == 2, "stationary point count at gamma " + fix(g, 2));
    worst = std::max(worst, std::abs(minimum_energy_2mode(g) + (3 * g + 1) * (3 * g + 1) / (16 * g)));
    worst = std::max(worst, std::abs(energy_density_2mode({1.234, -1.0}, g)));
  }
  o.require(stationary_points(0.1).empty(), "points below 1/5");
  o.require(std::abs(minimum_energy_2mode(0.5) + 0.78125) < tol, "gamma 0.5 minimum");
  // maximum 0 at z = -1: no grid point exceeds it
  double top = -1.0;
  for (int i = 0; i <= 200; ++i)
    for (int j = 0; j <= 200; ++j) top = std::max(top, energy_density_2mode({2 * kPi * i / 200, -1 + 2.0 * j / 200}, 0.5));
  o.require(std::abs(top) < tol, "maximum");
  o.require(worst < tol, "table values");

  double drift = 0.0;
  for (double g : {0.1, 0.3, 0.5, 0.9})
    for (MeanFieldPoint start : {MeanFieldPoint{0.0, 0.9}, MeanFieldPoint{kPi / 2, 0.5}, MeanFieldPoint{2.5, -0.3}}) {
      const auto t = integrate_flow(start, g, 100.0);
      for (const auto& p : t.points) drift = std::max(drift, std::abs(energy_density_2mode(p, g) - t.energy));
    }
  o.require(drift < 1e-8, "flow energy drift");
  o.detail << "table defect " << sci(worst) << ", flow drift " << sci(drift) << " over t_span 100";
}

// 4 ------------------------------------------------------------------------------------
std::map<long, int> multiplicities(const std::vector<double>& v) {
  std::map<long, int> m;
  for (double e : v) ++m[std::lround(e * 1e6)];
  return m;
}

void chain_eigenvalues(Outcome& o) {
  const ChainCoefficients c{0.37, 1.13, 0.071, -0.29, 0.043};
  ModelParams p;
  p.chain = c;
  double worst = 0.0;
  bool degeneracies = true;
  for (int n = 1; n <= 20; ++n) {
    const auto b = FockBasis::enumerate(n, ModeConvention::circular);
    for (auto kind : {HamiltonianKind::chain1, HamiltonianKind::chain2}) {
      const Spectrum s = spectral_decomposition(build(kind, p, b));
      const std::vector<double> num(s.values.data(), s.values.data() + s.values.size());
      const auto closed = chain_spectrum(kind, n, c);
      if (closed.size() != num.size()) {
        worst = std::numeric_limits<double>::infinity();
        continue;
      }
      for (std::size_t k = 0; k < num.size(); ++k) worst = std::max(worst, std::abs(num[k] - closed[k]));
      degeneracies = degeneracies && multiplicities(num) == multiplicities(closed);
    }
  }
  o.require(worst < 1e-9, "eigenvalue mismatch");
  o.require(degeneracies, "degeneracy counts");
  o.detail << "max |E_closed - E_diag| " << sci(worst) << " over N = 1..20, both chains";
}

// 5 ------------------------------------------------------------------------------------
void oscillation_protocol(Outcome& o) {
  const int n = 50;
  const auto psi0 = spin_coherent2(kPi / 2, 0.0, n);
  const auto h = build(HamiltonianKind::n0_only, {}, psi0.basis);
  std::vector<double> times;
  for (int k = 0; k <= 400; ++k) times.push_back(4 * kPi * k / 400);
  const auto states = evolve(h, psi0, times);
  const double x0 = quadrature_means(psi0).x;
  double dev = 0.0;
  for (std::size_t k = 0; k < times.size(); ++k)
    dev = std::max(dev, std::abs(quadrature_means(states[k]).x - x0 * std::cos(times[k])));
  o.require(dev < 1e-10, "oscillation law");

  const Axis ax{-6.5, 6.5, 131};
  double worst_cells = 0.0;
  for (std::size_t k = 0; k < times.size(); k += 25) {
    const auto m = quadrature_means(states[k]);
    const auto w = wigner_planar(two_mode_state(states[k]).amplitudes, ax, ax);
    double sx = 0, sp = 0, s0 = 0;
    for (int i = 0; i < ax.count; ++i)
      for (int j = 0; j < ax.count; ++j) {
        const double wt = w.values(i, j) * w.weight(i, j);
        s0 += wt;
        sx += wt * ax.at(i);
        sp += wt * ax.at(j);
      }
    worst_cells = std::max({worst_cells, std::abs(sx / s0 - m.x) / ax.step(), std::abs(sp / s0 - m.p) / ax.step()});
  }
  o.require(worst_cells <= 1.0, "centroid tracking");
  o.detail << "<X>(0) = " << fix(x0) << ", max deviation from cos law " << sci(dev)
           << ", centroid offset " << fix(worst_cells, 3) << " cells";
}

// 6 ------------------------------------------------------------------------------------
void spectrum_structure(Outcome& o) {
  const int n = 100;
  std::vector<double> grid;
  for (int k = 0; k <= 90; ++k) grid.push_back(0.05 + 0.005 * k);
  const auto scan = spectrum_scan(HamiltonianKind::essential, n, 0, grid, {});
  double best = 1e300, at = 0.0;
  for (const auto& col : scan)
    if (col.energy_normalized[1] < best) {
      best = col.energy_normalized[1];
      at = col.gamma;
    }
  o.require(at >= 0.18 && at <= 0.25, "gap minimum location");

  auto interior_minimum = [&](double g) {
    ModelParams p;
    p.gamma = g;
    const Spectrum s = spectral_decomposition(build(HamiltonianKind::essential, p, l0(n)));
    const Eigen::Index m = s.values.size();
    Eigen::VectorXd gaps = s.values.tail(m - 1) - s.values.head(m - 1);
    Eigen::Index k = 0;
    gaps.minCoeff(&k);
    // the smallest spacing must sit strictly inside the spectrum, away from both ends
    return std::pair{k > 2 && k < gaps.size() - 3, static_cast<double>(k) / gaps.size()};
  };
  const auto [esqpt, where] = interior_minimum(0.5);
  const auto [spurious, where_low] = interior_minimum(0.1);
  o.require(esqpt, "interior spacing minimum at gamma 0.5");
  o.require(!spurious, "no interior minimum at gamma 0.1");
  o.detail << "lowest gap minimal at gamma " << fix(at, 3) << "; smallest spacing at relative level " << fix(where, 3)
           << " (gamma 0.5) vs " << fix(where_low, 3) << " (gamma 0.1)";
}

// 7 and 8 share the N = 1000 runs
const TimeSeries& reference_run(double gamma) {
  static std::map<double, TimeSeries> cache;
  auto it = cache.find(gamma);
  if (it == cache.end()) {
    QuenchConfig c;
    c.gamma = gamma;
    c.n_total = 1000;
    it = cache.emplace(gamma, quench(c)).first;
  }
  return it->second;
}

void quench_invariants(Outcome& o) {
  for (double g : {0.1, 0.3}) {
    const auto& ts = reference_run(g);
    double dn = 0, de = 0, dj = 0;
    bool ordered = true;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      dn = std::max(dn, std::abs(ts.norm[k] - ts.norm[0]));
      de = std::max(de, std::abs(ts.energy[k] - ts.energy[0]));
      dj = std::max(dj, std::abs(ts.jz_mean[k] - ts.jz_mean[0]));
      // same 1e-9 slack as the module's post-assertion
      ordered = ordered && ts.zeta2[k] >= 1.0 / ts.n_total - 1e-9 && (ts.sentinel[k] || ts.zeta2[k] <= ts.xi2[k] + 1e-9);
    }
    o.require(ts.size() == 10000 && ts.t.back() == 1000.0, "time grid");
    o.require(dn < 1e-10 && de < 1e-10 && dj < 1e-10, "drift at gamma " + fix(g, 1));
    o.require(ordered, "1/N <= zeta2 <= xi2 at gamma " + fix(g, 1));
    o.require(std::abs(ts.xi2[0] - 1) < 1e-9 && std::abs(ts.zeta2[0] - 1) < 1e-9, "t = 0 values");
    o.detail << "gamma " << fix(g, 1) << ": drift norm " << sci(dn) << " energy " << sci(de) << " Jz " << sci(dj)
             << "; ";
  }
}

void squeezing_behaviour(Outcome& o) {
  auto stats = [](const TimeSeries& ts) {
    double min_zeta = 1e300, gap = 0, depth = 0;
    for (std::size_t k = 0; k < ts.size(); ++k) {
      min_zeta = std::min(min_zeta, ts.zeta2[k]);
      depth = std::max(depth, 1 - ts.zeta2[k]);
      if (!ts.sentinel[k]) gap = std::max(gap, ts.xi2[k] - ts.zeta2[k]);
    }
    return std::tuple{min_zeta, gap, depth};
  };
  const auto [z1, gap1, depth1] = stats(reference_run(0.1));
  const auto [z3, gap3, depth3] = stats(reference_run(0.3));
  (void)z3;
  (void)depth3;
  o.require(z1 < 1.0, "gamma 0.1 min zeta2 < 1");
  o.require(gap1 < 0.1 * depth1, "gamma 0.1 curves close");
  o.require(gap3 >= 10 * gap1, "gamma 0.3 gap 10x larger");
  o.detail << "gamma 0.1: min zeta2 " << fix(z1) << ", max gap " << sci(gap1) << " vs 0.1*max(1-zeta2) "
           << sci(0.1 * depth1) << "; gamma 0.3 max gap " << fix(gap3, 2);
}

// 9 ------------------------------------------------------------------------------------
void scaling(Outcome& o) {
  const std::vector<int> ns = {500, 1000, 2000};
  const auto frame = linear_time_grid(1000.0, 10000);
  std::map<double, std::vector<double>> gaps;
  std::vector<double> scan;
  for (int k = 15; k <= 25; ++k) scan.push_back(k / 100.0);
  std::vector<double> all = {0.10, 0.26, 0.30};
  all.insert(all.end(), scan.begin(), scan.end());
  for (const auto& row : sweep(all, ns, frame)) gaps[row.gamma].push_back(row.max_gap);

  for (double g : {0.10, 0.15}) {
    const double s = rel_spread(gaps.at(g));
    o.require(s < 0.05, "raw spread at gamma " + fix(g, 2));
    o.detail << "gamma " << fix(g, 2) << " raw spread " << fix(100 * s, 2) << "%; ";
  }
  for (double g : {0.26, 0.30}) {
    std::vector<double> scaled;
    for (std::size_t i = 0; i < ns.size(); ++i) scaled.push_back(gaps.at(g)[i] / ns[i]);
    const double s = rel_spread(scaled);
    o.require(s < 0.10, "max_gap/N spread at gamma " + fix(g, 2));
    o.detail << "gamma " << fix(g, 2) << " max_gap/N spread " << fix(100 * s, 2) << "%; ";
  }
  // crossover: first gamma of the upward scan where the N curves stop coinciding
  double crossover = -1.0;
  for (double g : scan)
    if (rel_spread(gaps.at(g)) > 0.10) {
      crossover = g;
      break;
    }
  o.require(crossover >= 0.18 && crossover <= 0.22, "crossover location");
  o.detail << "crossover at gamma " << fix(crossover, 2);
}

// 10 -----------------------------------------------------------------------------------
void oracle_equivalence(Outcome& o) {
  double worst = 0.0;
  for (double g : {0.1, 0.25, 0.5, 0.9}) {
    QuenchConfig c;
    c.gamma = g;
    c.n_total = 8;
    c.times = linear_time_grid(100.0, 201);
    worst = std::max(worst, oracle::max_column_difference(quench(c), oracle::brute_force_quench(g, 8, c.times)));
  }
  o.require(worst < 1e-10, "column mismatch");
  o.detail << "max scaled column difference " << sci(worst) << " over 4 gammas x 201 times";
}

// 11 -----------------------------------------------------------------------------------
void wigner_sanity(Outcome& o) {
  const Axis ax{-7.0, 7.0, 281};
  const auto proj = two_mode_state(spin_coherent2(1.1, 0.0, 20));
  const double integral = wigner_planar(proj.amplitudes, ax, ax).integral();
  o.require(std::abs(integral - 1.0) < 1e-3, "planar integral");

  ModeVector vac = ModeVector::Zero(1);
  vac[0] = 1.0;
  ModeVector one = ModeVector::Zero(2);
  one[1] = 1.0;
  const Axis origin{0.0, 0.0, 1};
  const double w_vac = wigner_planar(vac, origin, origin).values(0, 0);
  const double w_one = wigner_planar(one, origin, origin).values(0, 0);
  o.require(std::abs(w_vac - 2 / kPi) < 1e-6, "vacuum value");
  o.require(std::abs(w_one + 2 / kPi) < 1e-6, "fock one value");

  const double t0 = 1.2, p0 = 2.3;
  const auto ws = wigner_sphere(two_mode_state(spin_coherent2(t0, p0, 30)).amplitudes);
  const auto [i, j] = ws.argmax();
  o.require(std::abs(ws.first.at(i) - t0) <= ws.first.step() && std::abs(ws.second.at(j) - p0) <= ws.second.step(),
            "spherical peak");

  ModelParams p;
  p.gamma = 0.5;
  const auto b = l0(50);
  const auto h = build(HamiltonianKind::spinor_rotated, p, b);
  std::vector<double> times;
  for (int k = 0; k <= 40; ++k) times.push_back(0.5 * k);
  double lowest = 0.0, when = -1.0;
  const auto states = evolve(h, number_state(b, {0, 50, 0}), times);
  for (std::size_t k = 0; k < times.size(); ++k) {
    const auto w = wigner_sphere(two_mode_state(states[k]).amplitudes, {0.0, kPi, 91}, {0.0, 2 * kPi, 181});
    if (w.min_value() < lowest) {
      lowest = w.min_value();
      when = times[k];
    }
  }
  o.require(lowest < 0.0, "quench negativity");
  o.detail << "planar integral " << fix(integral, 6) << "; W_vac(0) - 2/pi " << sci(w_vac - 2 / kPi)
           << "; spherical peak at (" << fix(ws.first.at(i), 3) << ", " << fix(ws.second.at(j), 3)
           << "); quench min W " << sci(lowest) << " at t " << fix(when, 1);
}

// 12 -----------------------------------------------------------------------------------
void bent_state_stability(Outcome& o) {
  const std::vector<double> times = {0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  auto volumes = [&](int n) {
    ModelParams p;
    p.gamma = 0.3;
    const auto psi0 = coherent3(r_min(0.3), 0.0, n);
    const auto h = build(HamiltonianKind::spinor_rotated, p, psi0.basis);
    const double e = std::sqrt(static_cast<double>(n)) + 3.0;
    const Axis ax{-e, e, 201};
    std::vector<double> out;
    for (const auto& s : evolve(h, psi0, times))
      out.push_back(negativity_volume(wigner_planar(two_mode_state(s).amplitudes, ax, ax)));
    return out;
  };
  const auto v10 = volumes(10);
  const auto v50 = volumes(50);
  for (std::size_t k = 0; k < times.size(); ++k) {
    o.require(v10[k] > v50[k], "t = " + fix(times[k], 1));
    o.detail << "t " << fix(times[k], 1) << ": " << sci(v10[k]) << " vs " << sci(v50[k]) << "; ";
  }
}

// 13 -----------------------------------------------------------------------------------
void low_depletion(Outcome& o) {
  const auto basis = FockBasis::truncated_pair(40);
  std::vector<SparseOperator> hs;
  for (double g : {0.1, 0.3, 0.9}) {
    ModelParams p;
    p.gamma = g;
    hs.push_back(build(HamiltonianKind::low_depletion, p, basis));
  }
  bool identical = true;
  for (const auto& h : hs) {
    const SparseMatrix d = h.matrix() - hs[0].matrix();
    identical = identical && h.matrix().nonZeros() == hs[0].matrix().nonZeros() &&
                std::all_of(d.valuePtr(), d.valuePtr() + d.nonZeros(), [](Complex z) { return z == Complex{}; });
  }
  o.require(identical, "gamma independence");
  const auto parts = low_depletion_parts(basis);
  const double split = max_abs_diff(parts.hx + parts.hy, hs[0]);
  const double comm = commutator(parts.hx, parts.hy).max_abs();
  o.require(split == 0.0 && comm < 1e-12, "commuting split");

  QuenchConfig c;
  c.gamma = 0.3;
  c.n_total = 1000;
  c.times = linear_time_grid(1.0, 101);
  const auto ts = quench(c);
  // early window: every sampled t > 0 with depletion below 1%
  const double q = (1.0 - c.gamma) / c.gamma;
  double worst = 0.0, worst_q = 0.0, depletion = 0.0, t_end = 0.0;
  for (std::size_t k = 1; k < ts.size(); ++k) {
    const double dep = 1.0 - ts.n0_mean[k] / c.n_total;
    if (dep >= 0.01) break;
    depletion = std::max(depletion, dep);
    t_end = ts.t[k];
    worst = std::max(worst, std::abs(ts.nx_mean[k] / low_depletion_nx(ts.t[k]) - 1.0));
    // diagnostic only: same squeezing form with the single-particle term q (N_x + N_y) kept
    worst_q = std::max(worst_q, std::abs(ts.nx_mean[k] / squeezing_nx(ts.t[k], 2.0 - q) - 1.0));
  }
  o.require(t_end > 0.0, "empty early window");
  o.require(worst < 0.05, "early <N_x> vs H_x prediction 4t^2");
  o.detail << "[H_x, H_y] " << sci(comm) << "; window (0, " << fix(t_end, 2) << "] with depletion <= " << sci(depletion)
           << ": <N_x> vs 4t^2 off by " << fix(100 * worst, 2) << "% (with q term kept: " << fix(100 * worst_q, 2)
           << "%)";
}

}  // namespace

// wall-clock limits stated by the criteria that have one
const std::map<int, double> kRuntimeLimit = {{1, 1.0}, {2, 1.0}, {4, 10.0}, {6, 60.0}};

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  app.add_option("--only", only, "criterion numbers to run (default all)")->check(CLI::Range(1, 13));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, Criterion>> criteria = {
      {"operator correspondence", operator_correspondence},
      {"phase transition locus", transition_locus},
      {"mean-field tables and flow", meanfield_tables},
      {"chain eigenvalues", chain_eigenvalues},
      {"-N0 oscillation protocol", oscillation_protocol},
      {"spectrum structure N=100 l=0", spectrum_structure},
      {"quench invariants N=1000", quench_invariants},
      {"squeezing behaviour gamma 0.1 vs 0.3", squeezing_behaviour},
      {"max-gap scaling", scaling},
      {"oracle equivalence N=8", oracle_equivalence},
      {"wigner sanity", wigner_sanity},
      {"bent coherent state negativity", bent_state_stability},
      {"low-depletion limit", low_depletion},
  };
  if (only.empty())
    for (int k = 1; k <= 13; ++k) only.push_back(k);

  int failures = 0;
  for (int k : only) {
    const auto& [name, run] = criteria[static_cast<std::size_t>(k - 1)];
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (const auto lim = kRuntimeLimit.find(k); lim != kRuntimeLimit.end())
      o.require(secs < lim->second, "runtime above " + fix(lim->second, 0) + " s");
    std::cout << "criterion " << std::setw(2) << k << " " << (o.pass ? "PASS" : "FAIL") << "  " << name << " ("
              << fix(secs, 1) << " s): " << o.detail.str() << std::endl;
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
