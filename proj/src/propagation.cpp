#include "burim/propagation.hpp"

#include <cmath>
#include <numbers>

#include "burim/fft.hpp"

namespace burim {

namespace {
constexpr double kPi = std::numbers::pi;

double wrapped_freq(int idx, int count, double length) {
  int s = idx <= count / 2 ? idx : idx - count;
  return 2.0 * kPi * s / length;
}
}  // namespace

double SpectralPlane::freq(int axis, int idx) const {
  return wrapped_freq(idx, space_grid.counts[axis],
                      space_grid.counts[axis] * space_grid.spacing[axis]);
}

SpectralPlane forward_transform(const PlaneData& p) {
  const Grid2D& g = p.grid;
  SpectralPlane s;
  s.space_grid = g;
  s.wavenumber = p.wavenumber;
  s.values.resize(g.size());
  fft::dft_2d(g.counts[1], g.counts[0], p.values.data(), s.values.data(), true);

  const double cell = g.spacing[0] * g.spacing[1];
  for (int j = 0; j < g.counts[1]; ++j)
    for (int i = 0; i < g.counts[0]; ++i) {
      const double phase = -(g.origin[0] * s.freq(0, i) + g.origin[1] * s.freq(1, j));
      s.values[s.index(i, j)] *= cell * std::polar(1.0, phase);
    }
  return s;
}

PlaneData inverse_transform(const SpectralPlane& s) {
  const Grid2D& g = s.space_grid;
  std::vector<cplx> tmp(g.size());
  SpectralPlane t = s;  // strip origin phases before the inverse DFT
  for (int j = 0; j < g.counts[1]; ++j)
    for (int i = 0; i < g.counts[0]; ++i) {
      const double phase = g.origin[0] * s.freq(0, i) + g.origin[1] * s.freq(1, j);
      t.values[s.index(i, j)] *= std::polar(1.0, phase);
    }
  fft::dft_2d(g.counts[1], g.counts[0], t.values.data(), tmp.data(), false);
  const double scale = 1.0 / (g.spacing[0] * g.spacing[1] * double(g.size()));
  for (auto& z : tmp) z *= scale;
  return PlaneData(g, s.wavenumber, std::move(tmp));
}

namespace {

PlaneData spectral_filter(const PlaneData& g, double dz, double sign) {
  SpectralPlane s = forward_transform(g);
  const double k2 = g.wavenumber * g.wavenumber;
  for (int j = 0; j < g.grid.counts[1]; ++j)
    for (int i = 0; i < g.grid.counts[0]; ++i) {
      const double v1 = s.freq(0, i), v2 = s.freq(1, j);
      const double rad = k2 - v1 * v1 - v2 * v2;
      auto& val = s.values[s.index(i, j)];
      if (rad < 0.0) {
        val = cplx(0.0, 0.0);
      } else if (dz != 0.0) {
        val *= std::polar(1.0, -sign * std::sqrt(rad) * dz);
      }
    }
  PlaneData out = inverse_transform(s);
  out.grid.z_level = g.grid.z_level + dz;
  return out;
}

}  // namespace

PlaneData propagate(const PlaneData& g, double target_z, WaveConvention conv) {
  const double dz = target_z - g.grid.z_level;
  if (dz == 0.0) throw std::invalid_argument("propagate: zero propagation distance");
  return spectral_filter(g, dz, convention_sign(conv));
}

PlaneData propagating_part(const PlaneData& g) { return spectral_filter(g, 0.0, 1.0); }

PlaneData halfspace_oracle(const PlaneData& phi, double x3, double k) {
  if (!(x3 < 0.0)) throw std::invalid_argument("halfspace_oracle: x3 must be negative");
  if (phi.grid.z_level != 0.0)
    throw std::invalid_argument("halfspace_oracle: trace plane must sit at z = 0");

  const Grid2D& g = phi.grid;
  Grid2D out_grid = g;
  out_grid.z_level = x3;
  PlaneData out(out_grid, k);
  const double cell = g.spacing[0] * g.spacing[1];

  // w(x) = 2 x3 ∑_y exp(ikr)(ikr - 1)/(4π r^3) phi(y) dA,  r = |x - y|.
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < g.counts[1]; ++j)
    for (int i = 0; i < g.counts[0]; ++i) {
      const auto p = g.node(i, j);
      cplx acc(0.0, 0.0);
      for (int jj = 0; jj < g.counts[1]; ++jj)
        for (int ii = 0; ii < g.counts[0]; ++ii) {
          const cplx f = phi.at(ii, jj);
          if (f == cplx(0.0, 0.0)) continue;
          const auto q = g.node(ii, jj);
          const double dx = p[0] - q[0], dy = p[1] - q[1];
          const double r2 = dx * dx + dy * dy + x3 * x3;
          const double r = std::sqrt(r2);
          acc += std::polar(1.0, k * r) * (cplx(-1.0, k * r) / (4.0 * kPi * r2 * r)) * f;
        }
      out.at(i, j) = 2.0 * x3 * acc * cell;
    }
  return out;
}

TheoremCheck propagation_theorem_check(const PlaneData& phi, double x3, double k) {
  PlaneData w = halfspace_oracle(phi, x3, k);
  w.grid.z_level = 0.0;  // transform lattice only; height is irrelevant here
  SpectralPlane wh = forward_transform(w);
  SpectralPlane ph = forward_transform(phi);

  double num = 0.0, den = 0.0;
  int modes = 0;
  const double k2 = k * k;
  for (int j = 0; j < phi.grid.counts[1]; ++j)
    for (int i = 0; i < phi.grid.counts[0]; ++i) {
      const double v1 = ph.freq(0, i), v2 = ph.freq(1, j);
      const double rad = k2 - v1 * v1 - v2 * v2;
      if (rad < 0.0) continue;
      const cplx ref = ph.values[ph.index(i, j)] * std::polar(1.0, -std::sqrt(rad) * x3);
      const cplx got = wh.values[wh.index(i, j)];
      num += std::norm(got - ref);
      den += std::norm(ref);
      ++modes;
    }
  return {den > 0.0 ? std::sqrt(num / den) : 0.0, modes};
}

}  // namespace burim
