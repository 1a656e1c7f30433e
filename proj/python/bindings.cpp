#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "vibron/dynamics.hpp"
#include "vibron/error.hpp"
#include "vibron/meanfield.hpp"
#include "vibron/model.hpp"
#include "vibron/phasespace.hpp"
#include "vibron/states.hpp"

namespace py = pybind11;
using namespace vibron;

namespace {

// pybind11 holders cannot be shared_ptr<const T>
using PyBasis = std::shared_ptr<FockBasis>;
PyBasis mut(const BasisPtr& b) { return std::const_pointer_cast<FockBasis>(b); }

py::dict timeseries_dict(const TimeSeries& ts) {
  py::dict d;
  d["n_total"] = ts.n_total;
  d["gamma"] = ts.gamma;
  d["t"] = ts.t;
  d["Xz_mean"] = ts.xz_mean;
  d["lambda_minus"] = ts.lambda_minus;
  d["lambda_plus"] = ts.lambda_plus;
  d["xi2_opt"] = ts.xi2;
  d["zeta2_opt"] = ts.zeta2;
  d["energy"] = ts.energy;
  d["norm"] = ts.norm;
  d["Jz_mean"] = ts.jz_mean;
  d["sentinel_flag"] = std::vector<bool>(ts.sentinel.begin(), ts.sentinel.end());
  d["Nx_mean"] = ts.nx_mean;
  d["N0_mean"] = ts.n0_mean;
  if (ts.quad_x) {
    d["X_mean"] = *ts.quad_x;
    d["P_mean"] = *ts.quad_p;
  }
  return d;
}

std::string grid_csv(const WignerGrid& g) {
  std::ostringstream os;
  write_grid_csv(os, g);
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact diagonalization of the 2D vibron model / spin-1 condensate";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  py::enum_<ModeConvention>(m, "ModeConvention")
      .value("circular", ModeConvention::circular)
      .value("cartesian", ModeConvention::cartesian);

  py::class_<BlockFilter>(m, "BlockFilter")
      .def_static("full", &BlockFilter::full)
      .def_static("fixed_l", &BlockFilter::fixed_l)
      .def_static("l_band", &BlockFilter::l_band);

  py::class_<FockBasis, PyBasis>(m, "FockBasis")
      .def_static(
          "enumerate",
          [](int n, ModeConvention c, BlockFilter f) { return mut(FockBasis::enumerate(n, c, f)); },
          py::arg("n_total"), py::arg("convention"), py::arg("filter") = BlockFilter::full())
      .def_static(
          "truncated_pair", [](int cutoff, ModeConvention c) { return mut(FockBasis::truncated_pair(cutoff, c)); },
          py::arg("cutoff"), py::arg("convention") = ModeConvention::cartesian)
      .def_property_readonly("total_n", &FockBasis::total_n)
      .def_property_readonly("convention", &FockBasis::convention)
      .def("__len__", &FockBasis::size)
      .def("occupations",
           [](const FockBasis& b) {
             std::vector<std::tuple<int, int, int>> out;
             for (const auto& o : b.states()) out.emplace_back(o.first, o.zero, o.second);
             return out;
           })
      .def("__repr__", &FockBasis::describe);

  py::class_<QuantumState>(m, "QuantumState")
      .def_property_readonly("basis", [](const QuantumState& s) { return mut(s.basis); })
      .def_readonly("amplitudes", &QuantumState::amplitudes)
      .def("norm", &QuantumState::norm);

  m.def("number_state", [](const PyBasis& b, int first, int zero, int second) {
    return number_state(b, {first, zero, second});
  });
  m.def("coherent3", &coherent3, py::arg("x"), py::arg("y"), py::arg("n_total"));
  m.def("spin_coherent2", &spin_coherent2, py::arg("theta"), py::arg("phi"), py::arg("n_total"));

  py::class_<SparseOperator>(m, "SparseOperator")
      .def("dense", &SparseOperator::dense)
      .def("expectation", &SparseOperator::expectation)
      .def("apply", py::overload_cast<const QuantumState&>(&SparseOperator::apply, py::const_));

  m.def(
      "build",
      [](const std::string& kind, double gamma, const PyBasis& basis, std::optional<std::string> normalization,
         double w2_sign, double alpha_n0) {
        ModelParams p;
        p.gamma = gamma;
        if (normalization) p.normalization = parse_normalization(*normalization);
        p.w2_sign = w2_sign;
        p.alpha_n0 = alpha_n0;
        return build(parse_kind(kind), p, basis);
      },
      py::arg("kind"), py::arg("gamma"), py::arg("basis"), py::arg("normalization") = std::nullopt,
      py::arg("w2_sign") = -1.0, py::arg("alpha_n0") = 1.0);
  m.def("eigenvalues", [](const SparseOperator& h) { return spectral_decomposition(h).values; });

  m.def("energy_density_3mode", &energy_density_3mode);
  m.def("r_min", &r_min);
  m.def("separatrix_energy", &separatrix_energy);
  m.def("stationary_points", [](double gamma) {
    std::vector<std::tuple<double, double, double, bool>> out;
    for (const auto& s : stationary_points(gamma)) out.emplace_back(s.point.phi, s.point.z, s.energy, s.meridian);
    return out;
  });
  m.def("phase_space_radius", &phase_space_radius);

  m.def("linear_time_grid", &linear_time_grid);
  m.def(
      "quench",
      [](double gamma, int n_total, const std::vector<double>& times, const std::string& kind, bool quadratures,
         std::optional<QuantumState> initial, bool criteria) {
        QuenchConfig c;
        c.gamma = gamma;
        c.n_total = n_total;
        c.times = times;
        c.kind = parse_kind(kind);
        c.quadratures = quadratures;
        c.initial = std::move(initial);
        c.criteria = criteria;
        TimeSeries ts;
        {
          py::gil_scoped_release release;
          ts = quench(c);
        }
        return timeseries_dict(ts);
      },
      py::arg("gamma"), py::arg("n_total"), py::arg("times"), py::arg("kind") = "spinor_rotated",
      py::arg("quadratures") = false, py::arg("initial") = std::nullopt, py::arg("criteria") = true);
  m.def("max_gap", [](double gamma, int n_total, const std::vector<double>& times) {
    QuenchConfig c;
    c.gamma = gamma;
    c.n_total = n_total;
    c.times = times;
    const auto g = max_gap(quench(c));
    return std::make_pair(g.max_gap, g.sentinel_count);
  });
  m.def("squeezing_nx", &squeezing_nx);
  m.def("low_depletion_nx", &low_depletion_nx);

  py::class_<WignerGrid>(m, "WignerGrid")
      .def_readonly("values", &WignerGrid::values)
      .def_readonly("coarse", &WignerGrid::coarse)
      .def_readonly("imag_residue", &WignerGrid::imag_residue)
      .def_property_readonly("first", [](const WignerGrid& g) { return std::make_tuple(g.first.min, g.first.max, g.first.count); })
      .def_property_readonly("second", [](const WignerGrid& g) { return std::make_tuple(g.second.min, g.second.max, g.second.count); })
      .def("integral", &WignerGrid::integral)
      .def("negativity_volume", [](const WignerGrid& g) { return negativity_volume(g); })
      .def("to_csv", &grid_csv);

  m.def(
      "wigner_planar",
      [](const QuantumState& s, double extent, int count) {
        const Axis a{-extent, extent, count};
        return wigner_planar(two_mode_state(s).amplitudes, a, a);
      },
      py::arg("state"), py::arg("extent"), py::arg("count") = 201);
  m.def(
      "wigner_sphere",
      [](const QuantumState& s, int theta_count, int phi_count) {
        return wigner_sphere(two_mode_state(s).amplitudes, {0.0, 3.14159265358979323846, theta_count},
                             {0.0, 2.0 * 3.14159265358979323846, phi_count});
      },
      py::arg("state"), py::arg("theta_count") = 181, py::arg("phi_count") = 361);
  m.def("read_grid_csv", [](const std::string& text) {
    std::istringstream is(text);
    return read_grid_csv(is);
  });
}
