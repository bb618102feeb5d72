// Python bindings for the main library operations: wavenumber helpers, the
// forward solver, angular-spectrum propagation and the plane preprocessing
// primitives. Arrays cross the boundary as numpy arrays; grids are passed
// as (origin, spacing) tuples matching the C-order array layout.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "burim/convention.hpp"
#include "burim/forward.hpp"
#include "burim/partition.hpp"
#include "burim/preprocess.hpp"
#include "burim/propagation.hpp"

namespace py = pybind11;
using namespace burim;

namespace {

using carray2 = py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;
using darray3 = py::array_t<double, py::array::c_style | py::array::forcecast>;

// numpy arrays are C-order: axis 0 slowest. Planes are passed as [ny, nx],
// volumes as [nz, ny, nx], matching the library's x-fastest flat layout.
PlaneData plane_from_array(const carray2& a, std::array<double, 2> origin,
                           std::array<double, 2> spacing, double z_level, double k) {
  if (a.ndim() != 2) throw std::invalid_argument("plane array must be 2-d [ny, nx]");
  const int ny = int(a.shape(0)), nx = int(a.shape(1));
  Grid2D g(origin, spacing, {nx, ny}, z_level);
  std::vector<cplx> vals(a.data(), a.data() + g.size());
  return PlaneData(g, k, std::move(vals));
}

carray2 plane_to_array(const PlaneData& p) {
  carray2 out({p.grid.counts[1], p.grid.counts[0]});
  std::copy(p.values.begin(), p.values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_burim, m) {
  m.doc() = "multi-frequency backscatter imaging core";

  m.def("ghz_to_k", &ghz_to_k, py::arg("f_ghz"),
        "Dimensionless wavenumber (10 cm length unit) for a frequency in GHz");

  m.def(
      "partition_nodes",
      [](double k_min, double k_max, int n) {
        const auto p = build_partition(k_min, k_max, n);
        return p.nodes();
      },
      py::arg("k_min"), py::arg("k_max"), py::arg("n"),
      "Uniform wavenumber partition nodes, decreasing from k_max to k_min");

  m.def(
      "green_function",
      [](double k, double r) { return green_function(k, r); },
      py::arg("k"), py::arg("r"), "Outgoing kernel exp(ikr)/(4 pi r)");

  m.def(
      "propagate_plane",
      [](const carray2& values, std::array<double, 2> origin, std::array<double, 2> spacing,
         double z_level, double k, double target_z, const std::string& convention) {
        PlaneData p = plane_from_array(values, origin, spacing, z_level, k);
        return plane_to_array(propagate(p, target_z, convention_from_string(convention)));
      },
      py::arg("values"), py::arg("origin"), py::arg("spacing"), py::arg("z_level"), py::arg("k"),
      py::arg("target_z"), py::arg("convention") = "minus",
      "Angular-spectrum propagation of a plane field to another height");

  m.def(
      "truncate_plane",
      [](const carray2& values, double fraction) {
        PlaneData p = plane_from_array(values, {0, 0}, {1, 1}, 0.0, 1.0);
        return plane_to_array(truncate_plane(p, fraction));
      },
      py::arg("values"), py::arg("fraction") = 0.8,
      "Zero values below fraction * max |values|");

  m.def(
      "gaussian_smooth_plane",
      [](const carray2& values, double sigma_cells) {
        PlaneData p = plane_from_array(values, {0, 0}, {1, 1}, 0.0, 1.0);
        return plane_to_array(gaussian_smooth(p, sigma_cells));
      },
      py::arg("values"), py::arg("sigma_cells") = 0.65,
      "Separable 3-tap Gaussian smoothing with unit DC gain");

  m.def(
      "solve_forward",
      [](const darray3& c_values, std::array<double, 3> origin, std::array<double, 3> spacing,
         double k, const std::string& convention, double tolerance) {
        if (c_values.ndim() != 3)
          throw std::invalid_argument("coefficient array must be 3-d [nz, ny, nx]");
        const int nz = int(c_values.shape(0)), ny = int(c_values.shape(1)),
                  nx = int(c_values.shape(2));
        Grid3D g(origin, spacing, {nx, ny, nz});
        std::vector<double> vals(c_values.data(), c_values.data() + g.size());
        IndexBox3 box{{0, 0, 0}, {nx - 1, ny - 1, nz - 1}};
        Coefficient c(g, std::move(vals), box);
        LSConfig cfg;
        cfg.krylov_tolerance = tolerance;
        const auto res = solve_lippmann_schwinger(c, k, convention_from_string(convention), cfg);
        py::array_t<std::complex<double>> out({nz, ny, nx});
        std::copy(res.u.values.begin(), res.u.values.end(), out.mutable_data());
        return py::make_tuple(out, res.residual, res.iterations);
      },
      py::arg("c_values"), py::arg("origin"), py::arg("spacing"), py::arg("k"),
      py::arg("convention") = "minus", py::arg("tolerance") = 1e-6,
      "Total field of the volume integral equation; returns (u, residual, iterations)");
}
