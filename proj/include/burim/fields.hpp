#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <stdexcept>
#include <vector>

#include "burim/grid.hpp"

namespace burim {

using cplx = std::complex<double>;

inline bool all_finite(const std::vector<cplx>& v) {
  for (const auto& z : v)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Complex scalar field on a 3D grid (total/incident/scattered fields,
// q and v iterates, tail gradient components).
struct ComplexVolume {
  Grid3D grid;
  std::vector<cplx> values;

  ComplexVolume() = default;
  explicit ComplexVolume(const Grid3D& g, cplx fill = cplx(0.0, 0.0))
      : grid(g), values(g.size(), fill) {}
  ComplexVolume(const Grid3D& g, std::vector<cplx> vals) : grid(g), values(std::move(vals)) {
    if (values.size() != grid.size())
      throw std::invalid_argument("ComplexVolume: value count does not match grid");
    if (!all_finite(values)) throw std::invalid_argument("ComplexVolume: non-finite values");
  }

  cplx& at(int i, int j, int l) { return values[grid.index(i, j, l)]; }
  const cplx& at(int i, int j, int l) const { return values[grid.index(i, j, l)]; }
};

// Complex field on a 2D plane at fixed z, tagged with its wavenumber.
struct PlaneData {
  Grid2D grid;
  double wavenumber = 0.0;
  std::vector<cplx> values;

  PlaneData() = default;
  PlaneData(const Grid2D& g, double k, cplx fill = cplx(0.0, 0.0))
      : grid(g), wavenumber(k), values(g.size(), fill) {
    if (!(k > 0.0)) throw std::invalid_argument("PlaneData: wavenumber must be positive");
  }
  PlaneData(const Grid2D& g, double k, std::vector<cplx> vals)
      : grid(g), wavenumber(k), values(std::move(vals)) {
    if (!(k > 0.0)) throw std::invalid_argument("PlaneData: wavenumber must be positive");
    if (values.size() != grid.size())
      throw std::invalid_argument("PlaneData: value count does not match grid");
    if (!all_finite(values)) throw std::invalid_argument("PlaneData: non-finite values");
  }

  cplx& at(int i, int j) { return values[grid.index(i, j)]; }
  const cplx& at(int i, int j) const { return values[grid.index(i, j)]; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& z : values) m = std::max(m, std::abs(z));
    return m;
  }

  // First node attaining max |value| in storage order.
  std::array<int, 2> argmax_abs() const {
    std::size_t best = 0;
    double m = -1.0;
    for (std::size_t n = 0; n < values.size(); ++n) {
      double a = std::abs(values[n]);
      if (a > m) { m = a; best = n; }
    }
    return {int(best % grid.counts[0]), int(best / grid.counts[0])};
  }
};

// Axis-aligned index box [lo, hi] (inclusive). Used to declare where a
// coefficient may differ from the unit background.
struct IndexBox3 {
  std::array<int, 3> lo{};
  std::array<int, 3> hi{};
  bool contains(int i, int j, int l) const {
    return i >= lo[0] && i <= hi[0] && j >= lo[1] && j <= hi[1] && l >= lo[2] && l <= hi[2];
  }
};

// Real coefficient c(x) >= 1 with unit background outside its support box.
struct Coefficient {
  static constexpr double kDefaultMax = 15.0;

  Grid3D grid;
  std::vector<double> values;
  IndexBox3 support;

  Coefficient() = default;
  explicit Coefficient(const Grid3D& g)
      : grid(g), values(g.size(), 1.0),
        support{{0, 0, 0}, {g.counts[0] - 1, g.counts[1] - 1, g.counts[2] - 1}} {}
  Coefficient(const Grid3D& g, std::vector<double> vals, IndexBox3 supp, double c_max = kDefaultMax)
      : grid(g), values(std::move(vals)), support(supp) {
    if (values.size() != grid.size())
      throw std::invalid_argument("Coefficient: value count does not match grid");
    validate(c_max);
  }

  void validate(double c_max = kDefaultMax) const {
    for (int l = 0; l < grid.counts[2]; ++l)
      for (int j = 0; j < grid.counts[1]; ++j)
        for (int i = 0; i < grid.counts[0]; ++i) {
          double v = values[grid.index(i, j, l)];
          if (!std::isfinite(v) || v < 1.0 || v > c_max)
            throw std::invalid_argument("Coefficient: value outside [1, C_max] at node (" +
                                        std::to_string(i) + "," + std::to_string(j) + "," +
                                        std::to_string(l) + ")");
          if (!support.contains(i, j, l) && v != 1.0)
            throw std::invalid_argument("Coefficient: non-background value outside support box");
        }
  }

  double& at(int i, int j, int l) { return values[grid.index(i, j, l)]; }
  const double& at(int i, int j, int l) const { return values[grid.index(i, j, l)]; }

  double max_value() const {
    double m = 1.0;
    for (double v : values) m = std::max(m, v);
    return m;
  }
};

// Ordered stack of planes sharing one transverse lattice, one per frequency.
struct MultiFrequencyData {
  std::vector<double> frequencies_ghz;
  std::vector<PlaneData> planes;

  void validate() const {
    if (planes.size() != frequencies_ghz.size())
      throw std::invalid_argument("MultiFrequencyData: plane/frequency count mismatch");
    for (std::size_t i = 0; i + 1 < frequencies_ghz.size(); ++i)
      if (!(frequencies_ghz[i] < frequencies_ghz[i + 1]))
        throw std::invalid_argument("MultiFrequencyData: frequencies must be strictly increasing");
    for (std::size_t i = 1; i < planes.size(); ++i)
      if (!(planes[i].grid == planes[0].grid))
        throw std::invalid_argument("MultiFrequencyData: planes must share one grid");
  }

  std::size_t size() const { return planes.size(); }
};

}  // namespace burim
