#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "burim/convention.hpp"
#include "burim/fields.hpp"
#include "burim/grid.hpp"

namespace burim {

// Contiguous frequency run on which propagated data are stable, plus the
// selected optimal frequency and the matching wavenumber interval.
struct StableInterval {
  int first = 0;  // indices into the frequency list, inclusive
  int last = 0;
  double optimal_frequency_ghz = 0.0;
  double k_lo = 0.0;
  double k_hi = 0.0;
  double k_optimal = 0.0;
  int length() const { return last - first + 1; }
};

struct StabilityCriteria {
  double delta = 0.2;   // max relative change of the peak modulus between neighbours
  int loc_radius = 1;   // max peak drift in grid cells (Chebyshev)
  int min_run = 3;
};

// Transverse target region: nodes of the propagated plane whose smoothed
// modulus exceeds 70% of the peak, plus the propagated-plane height z*.
struct TargetFootprint {
  Grid2D grid;
  std::vector<uint8_t> mask;
  double z_star = 0.0;

  bool at(int i, int j) const { return mask[grid.index(i, j)] != 0; }
  bool contains_xy(double x, double y) const {
    auto idx = grid.nearest({x, y});
    return at(idx[0], idx[1]);
  }
  std::size_t count() const {
    std::size_t n = 0;
    for (auto m : mask) n += m != 0;
    return n;
  }
  std::array<double, 2> centroid() const;
};

// Dirichlet data on the six faces of a 3D grid. Faces are stored with the
// lower-numbered in-plane axis fastest. Nodes shared by several faces are
// owned by the z faces first, then y, then x.
enum class Face { XMin = 0, XMax, YMin, YMax, ZMin, ZMax };

struct BoundaryField {
  Grid3D grid;
  std::array<std::vector<cplx>, 6> faces;

  BoundaryField() = default;
  explicit BoundaryField(const Grid3D& g);

  static BoundaryField from_function(const Grid3D& g,
                                     const std::function<cplx(double, double, double)>& f);

  std::array<int, 2> face_counts(Face f) const;
  cplx& face_at(Face f, int a, int b);
  const cplx& face_at(Face f, int a, int b) const;

  bool is_boundary_node(int i, int j, int l) const { return grid.is_boundary(i, j, l); }
  // Value at a boundary node (i,j,l) under the face-ownership rule.
  cplx value_at(int i, int j, int l) const;
  Face owner(int i, int j, int l) const;
};

// Step 1: elementwise difference of target-scene and reference-scene data.
MultiFrequencyData subtract_reference(const MultiFrequencyData& total,
                                      const MultiFrequencyData& reference);

// Step 3: longest contiguous run of frequencies with consistent propagated
// peaks; nullopt when no run of length >= criteria.min_run exists.
std::optional<StableInterval> select_stable_interval(const MultiFrequencyData& propagated,
                                                     const StabilityCriteria& criteria = {});

// Keep values with |f| >= fraction * max|f|, zero the rest.
PlaneData truncate_plane(const PlaneData& f, double fraction = 0.8);

// Separable 3-tap Gaussian (sigma = 0.65 cells), unit DC gain; taps are
// renormalized over the in-range stencil at the edges.
PlaneData gaussian_smooth(const PlaneData& p, double sigma_cells = 0.65);
ComplexVolume gaussian_smooth(const ComplexVolume& v, double sigma_cells = 0.65);
std::vector<double> gaussian_smooth_values(const Grid3D& g, const std::vector<double>& v,
                                           double sigma_cells = 0.65);

// Scan propagation target planes over z_range and return the plane height
// with the largest peak modulus of the propagated data at k_probe (the
// frequency nearest k_probe is used). Ties keep the lower z.
double estimate_z_star(const MultiFrequencyData& data, double k_probe,
                       std::array<double, 2> z_range, WaveConvention conv,
                       double z_step = 0.1);

// Superlevel set |f| > 0.7 max|f| of the smoothed, truncated plane at z*.
TargetFootprint target_footprint(const PlaneData& f_smooth, double k_optimal,
                                 double threshold = 0.7);

// Completed boundary data on all of ∂Ω: the measured plane on the face
// z = z* (which must coincide with the grid's lower z face), the incident
// trace exp(∓ikz) elsewhere.
BoundaryField complete_boundary_data(const PlaneData& g, const Grid3D& omega, double k,
                                     WaveConvention conv);

// Zero-extension of a plane into an enlarged lattice with the same spacing
// (pad_factor times the node count, symmetric), realizing the extension of
// measured rectangles by zero before spectral propagation.
PlaneData embed_plane(const PlaneData& p, double pad_factor = 2.0);

// Bilinear resampling onto another transverse lattice (values outside the
// source rectangle are zero).
PlaneData resample_plane(const PlaneData& p, const Grid2D& target);

}  // namespace burim
