#include "burim/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "burim/forward.hpp"
#include "burim/partition.hpp"
#include "burim/propagation.hpp"

namespace burim {

std::array<double, 2> TargetFootprint::centroid() const {
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (int j = 0; j < grid.counts[1]; ++j)
    for (int i = 0; i < grid.counts[0]; ++i)
      if (at(i, j)) {
        auto p = grid.node(i, j);
        sx += p[0];
        sy += p[1];
        ++n;
      }
  if (n == 0) throw std::runtime_error("TargetFootprint: empty mask has no centroid");
  return {sx / double(n), sy / double(n)};
}

BoundaryField::BoundaryField(const Grid3D& g) : grid(g) {
  for (int f = 0; f < 6; ++f) {
    auto c = face_counts(Face(f));
    faces[f].assign(std::size_t(c[0]) * std::size_t(c[1]), cplx(0.0, 0.0));
  }
}

std::array<int, 2> BoundaryField::face_counts(Face f) const {
  switch (f) {
    case Face::XMin:
    case Face::XMax:
      return {grid.counts[1], grid.counts[2]};
    case Face::YMin:
    case Face::YMax:
      return {grid.counts[0], grid.counts[2]};
    default:
      return {grid.counts[0], grid.counts[1]};
  }
}

cplx& BoundaryField::face_at(Face f, int a, int b) {
  auto c = face_counts(f);
  return faces[int(f)][std::size_t(a) + std::size_t(c[0]) * std::size_t(b)];
}

const cplx& BoundaryField::face_at(Face f, int a, int b) const {
  auto c = face_counts(f);
  return faces[int(f)][std::size_t(a) + std::size_t(c[0]) * std::size_t(b)];
}

Face BoundaryField::owner(int i, int j, int l) const {
  if (l == 0) return Face::ZMin;
  if (l == grid.counts[2] - 1) return Face::ZMax;
  if (j == 0) return Face::YMin;
  if (j == grid.counts[1] - 1) return Face::YMax;
  if (i == 0) return Face::XMin;
  if (i == grid.counts[0] - 1) return Face::XMax;
  throw std::invalid_argument("BoundaryField: node is interior");
}

cplx BoundaryField::value_at(int i, int j, int l) const {
  switch (owner(i, j, l)) {
    case Face::ZMin:
      return face_at(Face::ZMin, i, j);
    case Face::ZMax:
      return face_at(Face::ZMax, i, j);
    case Face::YMin:
      return face_at(Face::YMin, i, l);
    case Face::YMax:
      return face_at(Face::YMax, i, l);
    case Face::XMin:
      return face_at(Face::XMin, j, l);
    default:
      return face_at(Face::XMax, j, l);
  }
}

BoundaryField BoundaryField::from_function(const Grid3D& g,
                                           const std::function<cplx(double, double, double)>& f) {
  BoundaryField bf(g);
  auto fill = [&](Face face) {
    auto c = bf.face_counts(face);
    for (int b = 0; b < c[1]; ++b)
      for (int a = 0; a < c[0]; ++a) {
        double x, y, z;
        switch (face) {
          case Face::XMin: x = g.coord(0, 0); y = g.coord(1, a); z = g.coord(2, b); break;
          case Face::XMax: x = g.max_coord(0); y = g.coord(1, a); z = g.coord(2, b); break;
          case Face::YMin: x = g.coord(0, a); y = g.coord(1, 0); z = g.coord(2, b); break;
          case Face::YMax: x = g.coord(0, a); y = g.max_coord(1); z = g.coord(2, b); break;
          case Face::ZMin: x = g.coord(0, a); y = g.coord(1, b); z = g.coord(2, 0); break;
          default: x = g.coord(0, a); y = g.coord(1, b); z = g.max_coord(2); break;
        }
        bf.face_at(face, a, b) = f(x, y, z);
      }
  };
  for (int i = 0; i < 6; ++i) fill(Face(i));
  return bf;
}

MultiFrequencyData subtract_reference(const MultiFrequencyData& total,
                                      const MultiFrequencyData& reference) {
  total.validate();
  reference.validate();
  if (total.frequencies_ghz != reference.frequencies_ghz)
    throw std::invalid_argument("subtract_reference: frequency lists differ");
  if (!total.planes.empty() && !(total.planes[0].grid == reference.planes[0].grid))
    throw std::invalid_argument("subtract_reference: grids differ");

  MultiFrequencyData out;
  out.frequencies_ghz = total.frequencies_ghz;
  out.planes.reserve(total.planes.size());
  for (std::size_t f = 0; f < total.planes.size(); ++f) {
    PlaneData d = total.planes[f];
    for (std::size_t q = 0; q < d.values.size(); ++q) d.values[q] -= reference.planes[f].values[q];
    out.planes.push_back(std::move(d));
  }
  return out;
}

std::optional<StableInterval> select_stable_interval(const MultiFrequencyData& propagated,
                                                     const StabilityCriteria& criteria) {
  propagated.validate();
  const int nf = int(propagated.size());
  if (nf < 3) throw std::invalid_argument("select_stable_interval: need at least 3 frequencies");

  std::vector<double> peak(nf);
  std::vector<std::array<int, 2>> loc(nf);
  for (int f = 0; f < nf; ++f) {
    peak[f] = propagated.planes[f].max_abs();
    loc[f] = propagated.planes[f].argmax_abs();
  }

  auto pair_stable = [&](int f) {
    const double a = peak[f], b = peak[f + 1];
    if (a == 0.0 && b == 0.0) {
      // fall through to the location test
    } else if (a == 0.0 || b == 0.0) {
      return false;
    } else {
      const double hi = 1.0 + criteria.delta;
      const double ratio = b / a;
      if (ratio > hi || ratio < 1.0 / hi) return false;
    }
    const int di = std::abs(loc[f][0] - loc[f + 1][0]);
    const int dj = std::abs(loc[f][1] - loc[f + 1][1]);
    return std::max(di, dj) <= criteria.loc_radius;
  };

  int best_first = 0, best_len = 0;
  int run_first = 0;
  for (int f = 0; f < nf; ++f) {
    if (f > 0 && !pair_stable(f - 1)) run_first = f;
    const int len = f - run_first + 1;
    if (len > best_len) {
      best_len = len;
      best_first = run_first;
    }
  }
  if (best_len < criteria.min_run) return std::nullopt;

  StableInterval si;
  si.first = best_first;
  si.last = best_first + best_len - 1;
  const int mid =
      best_len % 2 == 1 ? si.first + best_len / 2 : si.first + best_len / 2 - 1;
  si.optimal_frequency_ghz = propagated.frequencies_ghz[mid];
  si.k_lo = ghz_to_k(propagated.frequencies_ghz[si.first]);
  si.k_hi = ghz_to_k(propagated.frequencies_ghz[si.last]);
  si.k_optimal = ghz_to_k(si.optimal_frequency_ghz);
  return si;
}

PlaneData truncate_plane(const PlaneData& f, double fraction) {
  if (!(fraction > 0.0 && fraction <= 1.0))
    throw std::invalid_argument("truncate_plane: fraction must lie in (0,1]");
  const double m = f.max_abs();
  if (m == 0.0) throw std::invalid_argument("truncate_plane: input is identically zero");
  PlaneData out = f;
  const double cut = fraction * m;
  for (auto& z : out.values)
    if (std::abs(z) < cut) z = cplx(0.0, 0.0);
  return out;
}

namespace {

std::array<double, 3> gauss_taps(double sigma_cells) {
  const double w = std::exp(-1.0 / (2.0 * sigma_cells * sigma_cells));
  const double norm = 1.0 + 2.0 * w;
  return {w / norm, 1.0 / norm, w / norm};
}

// One smoothing pass along an axis with edge renormalization.
template <typename T>
void smooth_axis(std::vector<T>& vals, int n_axis, std::size_t stride, std::size_t lines,
                 const std::function<std::size_t(std::size_t)>& line_base, double sigma) {
  const auto taps = gauss_taps(sigma);
  std::vector<T> line(n_axis);
  for (std::size_t ln = 0; ln < lines; ++ln) {
    const std::size_t base = line_base(ln);
    for (int a = 0; a < n_axis; ++a) line[a] = vals[base + a * stride];
    for (int a = 0; a < n_axis; ++a) {
      T acc{};
      double wsum = 0.0;
      for (int d = -1; d <= 1; ++d) {
        const int b = a + d;
        if (b < 0 || b >= n_axis) continue;
        acc += line[b] * taps[d + 1];
        wsum += taps[d + 1];
      }
      vals[base + a * stride] = acc * (1.0 / wsum);
    }
  }
}

}  // namespace

PlaneData gaussian_smooth(const PlaneData& p, double sigma_cells) {
  PlaneData out = p;
  const int nx = p.grid.counts[0], ny = p.grid.counts[1];
  smooth_axis<cplx>(out.values, nx, 1, ny, [&](std::size_t j) { return j * nx; }, sigma_cells);
  smooth_axis<cplx>(out.values, ny, nx, nx, [&](std::size_t i) { return i; }, sigma_cells);
  return out;
}

ComplexVolume gaussian_smooth(const ComplexVolume& v, double sigma_cells) {
  ComplexVolume out = v;
  const int nx = v.grid.counts[0], ny = v.grid.counts[1], nz = v.grid.counts[2];
  const std::size_t nxy = std::size_t(nx) * ny;
  smooth_axis<cplx>(out.values, nx, 1, std::size_t(ny) * nz,
                    [&](std::size_t q) { return q * nx; }, sigma_cells);
  smooth_axis<cplx>(out.values, ny, nx, std::size_t(nx) * nz,
                    [&](std::size_t q) { return (q % nx) + (q / nx) * nxy; }, sigma_cells);
  smooth_axis<cplx>(out.values, nz, nxy, nxy, [&](std::size_t q) { return q; }, sigma_cells);
  return out;
}

std::vector<double> gaussian_smooth_values(const Grid3D& g, const std::vector<double>& v,
                                           double sigma_cells) {
  std::vector<double> out = v;
  const int nx = g.counts[0], ny = g.counts[1], nz = g.counts[2];
  const std::size_t nxy = std::size_t(nx) * ny;
  smooth_axis<double>(out, nx, 1, std::size_t(ny) * nz, [&](std::size_t q) { return q * nx; },
                      sigma_cells);
  smooth_axis<double>(out, ny, nx, std::size_t(nx) * nz,
                      [&](std::size_t q) { return (q % nx) + (q / nx) * nxy; }, sigma_cells);
  smooth_axis<double>(out, nz, nxy, nxy, [&](std::size_t q) { return q; }, sigma_cells);
  return out;
}

double estimate_z_star(const MultiFrequencyData& data, double k_probe,
                       std::array<double, 2> z_range, WaveConvention conv, double z_step) {
  data.validate();
  if (data.planes.empty()) throw std::invalid_argument("estimate_z_star: empty data");
  if (!(z_range[0] < z_range[1]) || !(z_step > 0.0))
    throw std::invalid_argument("estimate_z_star: invalid scan range");

  int probe = 0;
  double best_dk = std::abs(ghz_to_k(data.frequencies_ghz[0]) - k_probe);
  for (int f = 1; f < int(data.size()); ++f) {
    const double dk = std::abs(ghz_to_k(data.frequencies_ghz[f]) - k_probe);
    if (dk < best_dk) {
      best_dk = dk;
      probe = f;
    }
  }
  const PlaneData& plane = data.planes[probe];

  double best_z = z_range[0], best_peak = -1.0, worst_peak = -1.0;
  for (double z = z_range[0]; z <= z_range[1] + 1e-12; z += z_step) {
    if (z == plane.grid.z_level) continue;
    const double peak = propagate(plane, z, conv).max_abs();
    if (best_peak < 0.0 || peak > best_peak) {
      best_peak = peak;
      best_z = z;
    }
    if (worst_peak < 0.0 || peak < worst_peak) worst_peak = peak;
  }
  if (best_peak <= 0.0 || best_peak - worst_peak <= 1e-12 * best_peak)
    throw std::runtime_error("estimate_z_star: flat response over the scan range");
  return best_z;
}

TargetFootprint target_footprint(const PlaneData& f_smooth, double k_optimal, double threshold) {
  if (std::abs(f_smooth.wavenumber - k_optimal) > 1e-9 * std::max(1.0, k_optimal))
    throw std::invalid_argument("target_footprint: plane wavenumber does not match k_optimal");
  const double m = f_smooth.max_abs();
  if (m == 0.0) throw std::invalid_argument("target_footprint: input is identically zero");

  TargetFootprint fp;
  fp.grid = f_smooth.grid;
  fp.z_star = f_smooth.grid.z_level;
  fp.mask.assign(f_smooth.grid.size(), 0);
  const double cut = threshold * m;
  for (std::size_t q = 0; q < fp.mask.size(); ++q)
    fp.mask[q] = std::abs(f_smooth.values[q]) > cut ? 1 : 0;
  return fp;
}

BoundaryField complete_boundary_data(const PlaneData& g, const Grid3D& omega, double k,
                                     WaveConvention conv) {
  const Grid2D& pg = g.grid;
  const double tol = 1e-9;
  const bool lattice_ok = std::abs(pg.origin[0] - omega.origin[0]) < tol &&
                          std::abs(pg.origin[1] - omega.origin[1]) < tol &&
                          std::abs(pg.spacing[0] - omega.spacing[0]) < tol &&
                          std::abs(pg.spacing[1] - omega.spacing[1]) < tol &&
                          pg.counts[0] == omega.counts[0] && pg.counts[1] == omega.counts[1];
  if (!lattice_ok || std::abs(pg.z_level - omega.origin[2]) > tol)
    throw std::invalid_argument(
        "complete_boundary_data: plane does not coincide with the lower z face of the domain");

  const double sign = convention_sign(conv);
  BoundaryField bf = BoundaryField::from_function(
      omega, [&](double, double, double z) { return std::polar(1.0, sign * k * z); });
  for (int j = 0; j < omega.counts[1]; ++j)
    for (int i = 0; i < omega.counts[0]; ++i) bf.face_at(Face::ZMin, i, j) = g.at(i, j);
  return bf;
}

PlaneData embed_plane(const PlaneData& p, double pad_factor) {
  if (!(pad_factor >= 1.0)) throw std::invalid_argument("embed_plane: pad factor must be >= 1");
  const Grid2D& g = p.grid;
  std::array<int, 2> nn;
  std::array<int, 2> left;
  for (int a = 0; a < 2; ++a) {
    nn[a] = int(std::ceil(pad_factor * (g.counts[a] - 1))) + 1;
    left[a] = (nn[a] - g.counts[a]) / 2;
  }
  Grid2D big({g.origin[0] - left[0] * g.spacing[0], g.origin[1] - left[1] * g.spacing[1]},
             g.spacing, nn, g.z_level);
  PlaneData out(big, p.wavenumber);
  for (int j = 0; j < g.counts[1]; ++j)
    for (int i = 0; i < g.counts[0]; ++i) out.at(i + left[0], j + left[1]) = p.at(i, j);
  return out;
}

PlaneData resample_plane(const PlaneData& p, const Grid2D& target) {
  PlaneData out(target, p.wavenumber);
  const Grid2D& g = p.grid;
  const double eps = 1e-9;
  for (int j = 0; j < target.counts[1]; ++j)
    for (int i = 0; i < target.counts[0]; ++i) {
      const auto q = target.node(i, j);
      const double fx = (q[0] - g.origin[0]) / g.spacing[0];
      const double fy = (q[1] - g.origin[1]) / g.spacing[1];
      if (fx < -eps || fy < -eps || fx > g.counts[0] - 1 + eps || fy > g.counts[1] - 1 + eps)
        continue;  // outside the source rectangle: zero extension
      const int ix = std::clamp(int(std::floor(fx)), 0, g.counts[0] - 2);
      const int iy = std::clamp(int(std::floor(fy)), 0, g.counts[1] - 2);
      const double ax = std::clamp(fx - ix, 0.0, 1.0);
      const double ay = std::clamp(fy - iy, 0.0, 1.0);
      out.at(i, j) = (1 - ax) * (1 - ay) * p.at(ix, iy) + ax * (1 - ay) * p.at(ix + 1, iy) +
                     (1 - ax) * ay * p.at(ix, iy + 1) + ax * ay * p.at(ix + 1, iy + 1);
    }
  return out;
}

}  // namespace burim
