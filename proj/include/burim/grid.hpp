#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

// Uniform grids in the dimensionless coordinates used throughout the
// library (1 length unit = 10 cm). Nodes are vertex-centered:
// node(i) = origin + i * spacing. Flat storage is row-major with the
// x index fastest; serialized files rely on this layout.

namespace burim {

struct Grid3D {
  std::array<double, 3> origin{};
  std::array<double, 3> spacing{};
  std::array<int, 3> counts{};

  Grid3D() = default;
  Grid3D(std::array<double, 3> org, std::array<double, 3> spc, std::array<int, 3> cnt)
      : origin(org), spacing(spc), counts(cnt) {
    for (int a = 0; a < 3; ++a) {
      if (!(spacing[a] > 0.0))
        throw std::invalid_argument("Grid3D: spacing must be positive (axis " + std::to_string(a) + ")");
      if (counts[a] < 2)
        throw std::invalid_argument("Grid3D: counts must be >= 2 (axis " + std::to_string(a) + ")");
    }
  }

  // Convenience: grid spanning [lo, hi] per axis with the given node counts.
  static Grid3D spanning(std::array<double, 3> lo, std::array<double, 3> hi, std::array<int, 3> cnt) {
    std::array<double, 3> spc;
    for (int a = 0; a < 3; ++a) {
      if (cnt[a] < 2) throw std::invalid_argument("Grid3D::spanning: counts must be >= 2");
      spc[a] = (hi[a] - lo[a]) / (cnt[a] - 1);
    }
    return Grid3D(lo, spc, cnt);
  }

  std::size_t size() const {
    return std::size_t(counts[0]) * std::size_t(counts[1]) * std::size_t(counts[2]);
  }

  std::size_t index(int i, int j, int l) const {
    return std::size_t(i) + std::size_t(counts[0]) * (std::size_t(j) + std::size_t(counts[1]) * std::size_t(l));
  }

  std::array<int, 3> unravel(std::size_t flat) const {
    const auto nx = std::size_t(counts[0]), ny = std::size_t(counts[1]);
    return {int(flat % nx), int((flat / nx) % ny), int(flat / (nx * ny))};
  }

  std::array<double, 3> node(int i, int j, int l) const {
    return {origin[0] + i * spacing[0], origin[1] + j * spacing[1], origin[2] + l * spacing[2]};
  }

  double coord(int axis, int idx) const { return origin[axis] + idx * spacing[axis]; }

  std::array<int, 3> nearest(const std::array<double, 3>& x) const {
    std::array<int, 3> idx;
    for (int a = 0; a < 3; ++a) {
      int i = int(std::lround((x[a] - origin[a]) / spacing[a]));
      idx[a] = std::min(std::max(i, 0), counts[a] - 1);
    }
    return idx;
  }

  bool is_boundary(int i, int j, int l) const {
    return i == 0 || j == 0 || l == 0 || i == counts[0] - 1 || j == counts[1] - 1 || l == counts[2] - 1;
  }

  double max_coord(int axis) const { return origin[axis] + (counts[axis] - 1) * spacing[axis]; }

  bool operator==(const Grid3D& o) const {
    return origin == o.origin && spacing == o.spacing && counts == o.counts;
  }
};

struct Grid2D {
  std::array<double, 2> origin{};
  std::array<double, 2> spacing{};
  std::array<int, 2> counts{};
  double z_level = 0.0;

  Grid2D() = default;
  Grid2D(std::array<double, 2> org, std::array<double, 2> spc, std::array<int, 2> cnt, double z)
      : origin(org), spacing(spc), counts(cnt), z_level(z) {
    for (int a = 0; a < 2; ++a) {
      if (!(spacing[a] > 0.0))
        throw std::invalid_argument("Grid2D: spacing must be positive (axis " + std::to_string(a) + ")");
      if (counts[a] < 2)
        throw std::invalid_argument("Grid2D: counts must be >= 2 (axis " + std::to_string(a) + ")");
    }
  }

  static Grid2D spanning(std::array<double, 2> lo, std::array<double, 2> hi, std::array<int, 2> cnt, double z) {
    std::array<double, 2> spc;
    for (int a = 0; a < 2; ++a) {
      if (cnt[a] < 2) throw std::invalid_argument("Grid2D::spanning: counts must be >= 2");
      spc[a] = (hi[a] - lo[a]) / (cnt[a] - 1);
    }
    return Grid2D(lo, spc, cnt, z);
  }

  std::size_t size() const { return std::size_t(counts[0]) * std::size_t(counts[1]); }
  std::size_t index(int i, int j) const { return std::size_t(i) + std::size_t(counts[0]) * std::size_t(j); }
  std::array<double, 2> node(int i, int j) const {
    return {origin[0] + i * spacing[0], origin[1] + j * spacing[1]};
  }
  double coord(int axis, int idx) const { return origin[axis] + idx * spacing[axis]; }
  double max_coord(int axis) const { return origin[axis] + (counts[axis] - 1) * spacing[axis]; }

  std::array<int, 2> nearest(const std::array<double, 2>& x) const {
    std::array<int, 2> idx;
    for (int a = 0; a < 2; ++a) {
      int i = int(std::lround((x[a] - origin[a]) / spacing[a]));
      idx[a] = std::min(std::max(i, 0), counts[a] - 1);
    }
    return idx;
  }

  bool operator==(const Grid2D& o) const {
    return origin == o.origin && spacing == o.spacing && counts == o.counts && z_level == o.z_level;
  }

  // Same transverse lattice, possibly different plane height.
  bool same_lattice(const Grid2D& o) const {
    return origin == o.origin && spacing == o.spacing && counts == o.counts;
  }
};

}  // namespace burim
