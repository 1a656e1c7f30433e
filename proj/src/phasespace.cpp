#include "vibron/phasespace.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "vibron/error.hpp"

namespace vibron {

namespace {

constexpr double kPi = std::numbers::pi;

double trapezoid_factor(int i, int count) { return (count > 1 && (i == 0 || i == count - 1)) ? 0.5 : 1.0; }

void check_axis(const Axis& a, const char* name) {
  if (a.count < 1) throw ConfigError(std::string(name) + " axis needs at least one node");
  if (a.count > 1 && !(a.max > a.min)) throw ConfigError(std::string(name) + " axis needs max > min");
}

}  // namespace

TwoModeProjection two_mode_state(const QuantumState& state) {
  const auto& b = *state.basis;
  if (!b.number_conserving()) throw ConfigError("two-mode projection needs a number-conserving state");
  if (b.convention() == ModeConvention::cartesian) {
    if (b.is_full()) return project_two_mode(state);
    throw ConfigError("cartesian states must live on the full basis");
  }
  const auto full = FockBasis::enumerate(b.total_n(), ModeConvention::circular);
  const auto cart = FockBasis::enumerate(b.total_n(), ModeConvention::cartesian);
  return project_two_mode(convert_convention(embed(state, full), cart));
}

QuadratureMeans quadrature_means(const ModeVector& c) {
  Complex a{};
  for (Eigen::Index n = 1; n < c.size(); ++n) a += std::sqrt(static_cast<double>(n)) * std::conj(c[n - 1]) * c[n];
  return {a.real(), a.imag()};
}

QuadratureMeans quadrature_means(const QuantumState& state) { return quadrature_means(two_mode_state(state).amplitudes); }

double WignerGrid::weight(int i, int j) const {
  const double w = first.step() * second.step() * trapezoid_factor(i, first.count) * trapezoid_factor(j, second.count);
  return kind == GridKind::planar ? w : w * std::sin(first.at(i));
}

double WignerGrid::integral() const {
  double s = 0.0;
  for (int i = 0; i < values.rows(); ++i)
    for (int j = 0; j < values.cols(); ++j) s += values(i, j) * weight(i, j);
  return s;
}

std::pair<int, int> WignerGrid::argmax() const {
  Eigen::Index i = 0, j = 0;
  values.maxCoeff(&i, &j);
  return {static_cast<int>(i), static_cast<int>(j)};
}

namespace {

// W(alpha) * pi / 2 for one phase-space point; accumulates the imaginary residue.
double displaced_parity_sum(const ModeVector& c, Complex alpha, double& imag_residue) {
  const int n_max = static_cast<int>(c.size()) - 1;
  const double y = 4.0 * std::norm(alpha);
  const double theta = std::arg(alpha);
  Complex total{};
  std::vector<double> g(static_cast<std::size_t>(n_max + 1));
  for (int d = 0; d <= n_max; ++d) {
    const int m_count = n_max - d + 1;
    if (y == 0.0) {
      if (d > 0) break;
      for (int m = 0; m < m_count; ++m) g[m] = 1.0;
    } else {
      // g_m = sqrt(m!/(m+d)!) L_m^(d)(y) y^(d/2) e^(-y/2), kept as v * exp(scale)
      double scale = 0.5 * d * std::log(y) - 0.5 * y - 0.5 * std::lgamma(d + 1.0);
      double prev = 0.0, cur = 1.0;
      g[0] = std::exp(scale);
      for (int m = 0; m + 1 < m_count; ++m) {
        const double next = ((2.0 * m + 1.0 + d - y) * cur - std::sqrt(static_cast<double>(m) * (m + d)) * prev) /
                            std::sqrt((m + 1.0) * (m + 1.0 + d));
        prev = cur;
        cur = next;
        if (std::abs(cur) > 1e150) {
          prev *= 1e-150;
          cur *= 1e-150;
          scale += 150.0 * std::log(10.0);
        }
        g[m + 1] = cur * std::exp(scale);
      }
    }
    const Complex phase = std::polar(1.0, -d * theta);
    for (int m = 0; m < m_count; ++m) {
      const double k = (m % 2 == 0 ? 1.0 : -1.0) * g[m];
      if (k == 0.0) continue;
      total += std::conj(c[m]) * c[m + d] * phase * k;
      if (d > 0) total += std::conj(c[m + d]) * c[m] * std::conj(phase) * k;
    }
  }
  imag_residue = std::max(imag_residue, std::abs(total.imag()));
  return total.real();
}

}  // namespace

WignerGrid wigner_planar(const ModeVector& c, const Axis& x, const Axis& p) {
  check_axis(x, "x");
  check_axis(p, "p");
  if (c.size() == 0) throw ConfigError("empty single-mode state");
  WignerGrid grid;
  grid.kind = GridKind::planar;
  grid.first = x;
  grid.second = p;
  grid.values.resize(x.count, p.count);
  grid.coarse = std::max(x.step(), p.step()) > 0.125;
  for (int i = 0; i < x.count; ++i)
    for (int j = 0; j < p.count; ++j)
      grid.values(i, j) = (2.0 / kPi) * displaced_parity_sum(c, {x.at(i), p.at(j)}, grid.imag_residue);
  grid.imag_residue *= 2.0 / kPi;
  return grid;
}

namespace {

// Diagonal of the Stratonovich-Weyl kernel at the north pole, in n_x order (m = j - n_x):
// sqrt(2j+1)/(4 pi) sum_k sqrt(2k+1) P_k(m), with P_k the orthonormal polynomials on the
// 2j+1 points m (positive leading coefficient), built by Lanczos on diag(m).
Eigen::VectorXd north_kernel(int n_total) {
  const int n = n_total + 1;
  const double j = 0.5 * n_total;
  Eigen::VectorXd m(n);
  for (int i = 0; i < n; ++i) m[i] = j - i;
  Eigen::MatrixXd p(n, n);
  p.col(0).setConstant(1.0 / std::sqrt(static_cast<double>(n)));
  Eigen::VectorXd kernel = p.col(0);
  for (int k = 1; k < n; ++k) {
    Eigen::VectorXd w = m.cwiseProduct(p.col(k - 1));
    for (int pass = 0; pass < 2; ++pass) w -= p.leftCols(k) * (p.leftCols(k).transpose() * w);
    p.col(k) = w / w.norm();
    kernel += std::sqrt(2.0 * k + 1.0) * p.col(k);
  }
  return kernel * (std::sqrt(static_cast<double>(n)) / (4.0 * kPi));
}

WignerGrid sphere_grid(const Axis& theta, const Axis& phi, Eigen::Index) {
  check_axis(theta, "theta");
  check_axis(phi, "phi");
  WignerGrid grid;
  grid.kind = GridKind::spherical;
  grid.first = theta;
  grid.second = phi;
  grid.values = Eigen::MatrixXd::Zero(theta.count, phi.count);
  return grid;
}

// Adds weight * W_psi to grid.values.
void accumulate_sphere(const ModeVector& c, double weight, WignerGrid& grid) {
  const int n = static_cast<int>(c.size());
  const int n_total = n - 1;
  const double j = 0.5 * n_total;
  const Eigen::VectorXd kernel = north_kernel(n_total);

  // J_y in n_x order; J_+ lowers n_x
  Eigen::MatrixXcd jy = Eigen::MatrixXcd::Zero(n, n);
  for (int nx = 1; nx < n; ++nx) {
    const double v = std::sqrt(static_cast<double>(nx) * (n_total - nx + 1));
    jy(nx - 1, nx) = Complex{0.0, -0.5 * v};
    jy(nx, nx - 1) = Complex{0.0, 0.5 * v};
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(jy);
  const Eigen::MatrixXcd& vecs = es.eigenvectors();
  const Eigen::VectorXd& lam = es.eigenvalues();

  // columns: V^dag e^{i phi Jz} c for every phi node
  const int nphi = grid.second.count;
  Eigen::MatrixXcd rotated(n, nphi);
  for (int b = 0; b < nphi; ++b) {
    const double ph = grid.second.at(b);
    Eigen::VectorXcd v(n);
    for (int nx = 0; nx < n; ++nx) v[nx] = std::polar(1.0, ph * (j - nx)) * c[nx];
    rotated.col(b) = vecs.adjoint() * v;
  }
  for (int a = 0; a < grid.first.count; ++a) {
    const double th = grid.first.at(a);
    Eigen::VectorXcd ph(n);
    for (int k = 0; k < n; ++k) ph[k] = std::polar(1.0, th * lam[k]);
    const Eigen::MatrixXcd r = vecs * (ph.asDiagonal() * rotated);
    grid.values.row(a) += weight * (kernel.transpose() * r.cwiseAbs2());
  }
}

}  // namespace

WignerGrid wigner_sphere(const ModeVector& c, const Axis& theta, const Axis& phi) {
  if (c.size() == 0) throw ConfigError("empty two-mode state");
  WignerGrid grid = sphere_grid(theta, phi, c.size());
  accumulate_sphere(c, 1.0, grid);
  return grid;
}

WignerGrid wigner_sphere(const Eigen::MatrixXcd& rho, const Axis& theta, const Axis& phi) {
  if (rho.rows() != rho.cols() || rho.rows() == 0) throw ConfigError("density matrix must be square and non-empty");
  WignerGrid grid = sphere_grid(theta, phi, rho.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho);
  for (Eigen::Index k = 0; k < rho.rows(); ++k)
    if (es.eigenvalues()[k] != 0.0) accumulate_sphere(es.eigenvectors().col(k), es.eigenvalues()[k], grid);
  return grid;
}

double negativity_volume(const WignerGrid& grid) {
  double s = 0.0;
  for (int i = 0; i < grid.values.rows(); ++i)
    for (int j = 0; j < grid.values.cols(); ++j)
      if (grid.values(i, j) < 0.0) s -= grid.values(i, j) * grid.weight(i, j);
  return s;
}

void write_grid_csv(std::ostream& os, const WignerGrid& grid) {
  const auto old = os.precision(17);
  const bool planar = grid.kind == GridKind::planar;
  os << "# kind=" << (planar ? "planar" : "spherical") << '\n';
  os << "# axis0=" << (planar ? "X" : "theta") << ',' << grid.first.min << ',' << grid.first.max << ','
     << grid.first.count << '\n';
  os << "# axis1=" << (planar ? "P_X" : "phi") << ',' << grid.second.min << ',' << grid.second.max << ','
     << grid.second.count << '\n';
  for (int i = 0; i < grid.values.rows(); ++i) {
    for (int j = 0; j < grid.values.cols(); ++j) os << (j ? "," : "") << grid.values(i, j);
    os << '\n';
  }
  os.precision(old);
}

namespace {

Axis parse_axis(const std::string& line) {
  std::istringstream is(line.substr(line.find('=') + 1));
  std::string name, a, b, n;
  std::getline(is, name, ',');
  std::getline(is, a, ',');
  std::getline(is, b, ',');
  std::getline(is, n);
  return {std::stod(a), std::stod(b), std::stoi(n)};
}

}  // namespace

WignerGrid read_grid_csv(std::istream& is) {
  WignerGrid grid;
  std::string line;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    if (line.rfind("# kind=", 0) == 0) {
      grid.kind = line.substr(7) == "planar" ? GridKind::planar : GridKind::spherical;
    } else if (line.rfind("# axis0=", 0) == 0) {
      grid.first = parse_axis(line);
    } else if (line.rfind("# axis1=", 0) == 0) {
      grid.second = parse_axis(line);
    } else if (!line.empty() && line[0] != '#') {
      std::vector<double> row;
      std::istringstream rs(line);
      std::string cell;
      while (std::getline(rs, cell, ',')) row.push_back(std::stod(cell));
      rows.push_back(std::move(row));
    }
  }
  if (static_cast<int>(rows.size()) != grid.first.count) throw ConfigError("grid row count does not match its header");
  grid.values.resize(grid.first.count, grid.second.count);
  for (int i = 0; i < grid.first.count; ++i) {
    if (static_cast<int>(rows[i].size()) != grid.second.count) throw ConfigError("grid row has the wrong length");
    for (int j = 0; j < grid.second.count; ++j) grid.values(i, j) = rows[i][j];
  }
  return grid;
}

}  // namespace vibron
