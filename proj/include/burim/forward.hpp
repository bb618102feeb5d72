#pragma once

#include <complex>
#include <stdexcept>

#include "burim/convention.hpp"
#include "burim/fields.hpp"
#include "burim/grid.hpp"

namespace burim {

// Settings for the volume-integral forward solver.
struct LSConfig {
  double krylov_tolerance = 1e-6;  // relative residual of the fixed-point equation
  int max_iterations = 500;
  double padding_factor = 2.0;  // periodization box size relative to the support box
  int restart = 30;

  void validate() const {
    if (!(krylov_tolerance > 0.0 && krylov_tolerance < 1.0))
      throw std::invalid_argument("LSConfig: tolerance must lie in (0,1)");
    if (max_iterations < 1) throw std::invalid_argument("LSConfig: max_iterations must be >= 1");
    if (!(padding_factor >= 2.0)) throw std::invalid_argument("LSConfig: padding_factor must be >= 2");
  }
};

struct SolverError : std::runtime_error {
  double residual;
  SolverError(const std::string& msg, double res) : std::runtime_error(msg), residual(res) {}
};

// Outgoing fundamental solution exp(ikr)/(4πr). k = 0 gives the static kernel.
cplx green_function(double k, double r);

// Plane wave exp(±ikz) sampled on the grid, sign per convention.
ComplexVolume incident_field(double k, const Grid3D& grid, WaveConvention conv);

// Plane-wave trace on a transverse plane (z fixed by the plane grid).
PlaneData incident_trace(double k, const Grid2D& plane, WaveConvention conv);

struct LSResult {
  ComplexVolume u;
  double residual = 0.0;
  int iterations = 0;
  double min_abs_u = 0.0;
  // True when the support of c-1 is small enough that the smooth kernel
  // cutoff never touches pairs of coupled nodes.
  bool kernel_fidelity_ok = true;
};

// Total field on the coefficient grid: u = u_inc + k^2 (Phi_k * (beta u)),
// beta = c - 1, applied matrix-free via the periodized kernel symbol and
// FFTs, solved with restarted GMRES. Throws SolverError when the relative
// residual does not reach cfg.krylov_tolerance within cfg.max_iterations.
LSResult solve_lippmann_schwinger(const Coefficient& c, double k, WaveConvention conv,
                                  const LSConfig& cfg);

// Scattered field on a plane strictly outside the support box of beta,
// by midpoint quadrature of the volume representation.
PlaneData scattered_on_plane(const ComplexVolume& u, const Coefficient& c, double k,
                             const Grid2D& plane, WaveConvention conv);

// Fourier transform of the radially truncated kernel
// chi(r) exp(i sign k r)/(4πr), where chi = 1 on [0, r_flat], rolls off as a
// raised cosine on [r_flat, r_cut], and vanishes beyond. Exposed for tests.
cplx truncated_kernel_symbol(double k, double sign, double s, double r_flat, double r_cut);

}  // namespace burim
