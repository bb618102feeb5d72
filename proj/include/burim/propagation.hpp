#pragma once

#include "burim/convention.hpp"
#include "burim/fields.hpp"
#include "burim/grid.hpp"

namespace burim {

// Transverse Fourier content of a plane field. The lattice matches the
// source plane's DFT: frequencies 2π m / (count * spacing) per axis,
// wrapped to signed values, with the plane-origin phase folded in so that
// values approximate the continuous transform of the zero-extended field.
struct SpectralPlane {
  Grid2D space_grid;      // grid of the plane the spectrum came from
  double wavenumber = 0;  // k of the plane
  std::vector<cplx> values;

  double freq(int axis, int idx) const;
  std::size_t index(int i, int j) const {
    return std::size_t(i) + std::size_t(space_grid.counts[0]) * std::size_t(j);
  }
};

SpectralPlane forward_transform(const PlaneData& p);
PlaneData inverse_transform(const SpectralPlane& s);

// Angular-spectrum propagation to the plane z = target_z on the same
// transverse lattice. Evanescent content is discarded; propagating modes
// pick up the pure phase exp(-sign * i * kappa * (target_z - z_level)),
// kappa = sqrt(k^2 - v1^2 - v2^2).
PlaneData propagate(const PlaneData& g, double target_z, WaveConvention conv);

// Restriction of a plane field to its propagating modes (|v| <= k),
// i.e. propagation by zero distance. Reference for round-trip checks.
PlaneData propagating_part(const PlaneData& g);

// Radiating half-space solution with Dirichlet trace phi at z = 0,
// evaluated on the plane z = x3 < 0 by direct midpoint quadrature of the
// double layer potential with the half-space kernel (plus convention).
PlaneData halfspace_oracle(const PlaneData& phi, double x3, double k);

// Relative L2 mismatch, over propagating modes, between the transform of
// the double-layer field and phi_hat * exp(-i kappa x3).
struct TheoremCheck {
  double rel_l2_error = 0.0;
  int modes = 0;
};
TheoremCheck propagation_theorem_check(const PlaneData& phi, double x3, double k);

}  // namespace burim
