#include "burim/phantom.hpp"

#include <cmath>
#include <stdexcept>

namespace burim {

bool Inclusion::contains(double x, double y, double z) const {
  const double dx = x - center[0], dy = y - center[1], dz = z - center[2];
  if (shape == Shape::Ball) {
    const double r = half_extents[0];
    return dx * dx + dy * dy + dz * dz <= r * r;
  }
  return std::abs(dx) <= half_extents[0] && std::abs(dy) <= half_extents[1] &&
         std::abs(dz) <= half_extents[2];
}

std::array<double, 3> Inclusion::lo() const {
  if (shape == Shape::Ball)
    return {center[0] - half_extents[0], center[1] - half_extents[0], center[2] - half_extents[0]};
  return {center[0] - half_extents[0], center[1] - half_extents[1], center[2] - half_extents[2]};
}

std::array<double, 3> Inclusion::hi() const {
  if (shape == Shape::Ball)
    return {center[0] + half_extents[0], center[1] + half_extents[0], center[2] + half_extents[0]};
  return {center[0] + half_extents[0], center[1] + half_extents[1], center[2] + half_extents[2]};
}

void Phantom::validate() const {
  if (noise_level < 0.0) throw std::invalid_argument("Phantom: noise level must be nonnegative");
  for (const auto& inc : inclusions) {
    if (!(inc.dielectric >= 1.0))
      throw std::invalid_argument("Phantom: dielectric constants must be >= 1");
    if (!(inc.half_extents[0] > 0.0))
      throw std::invalid_argument("Phantom: inclusion size must be positive");
    if (inc.shape == Inclusion::Shape::Box &&
        (!(inc.half_extents[1] > 0.0) || !(inc.half_extents[2] > 0.0)))
      throw std::invalid_argument("Phantom: box half extents must be positive");
  }
}

std::array<double, 3> Phantom::bounding_center() const {
  if (inclusions.empty()) throw std::runtime_error("Phantom: no inclusions");
  auto lo = inclusions[0].lo(), hi = inclusions[0].hi();
  for (const auto& inc : inclusions) {
    auto l = inc.lo(), h = inc.hi();
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], l[a]);
      hi[a] = std::max(hi[a], h[a]);
    }
  }
  return {(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2};
}

Coefficient phantom_coefficient(const Phantom& ph, const Grid3D& grid, double c_max) {
  ph.validate();
  for (const auto& inc : ph.inclusions) {
    auto lo = inc.lo(), hi = inc.hi();
    for (int a = 0; a < 3; ++a)
      if (lo[a] < grid.origin[a] - 1e-12 || hi[a] > grid.max_coord(a) + 1e-12)
        throw std::invalid_argument("phantom_coefficient: inclusion lies outside the grid");
  }

  std::vector<double> vals(grid.size(), 1.0);
  IndexBox3 support{{grid.counts[0], grid.counts[1], grid.counts[2]}, {-1, -1, -1}};
  bool any = false;
  for (int l = 0; l < grid.counts[2]; ++l)
    for (int j = 0; j < grid.counts[1]; ++j)
      for (int i = 0; i < grid.counts[0]; ++i) {
        const auto p = grid.node(i, j, l);
        double c = 1.0;
        for (const auto& inc : ph.inclusions)
          if (inc.contains(p[0], p[1], p[2])) c = std::max(c, inc.dielectric);
        if (c != 1.0) {
          vals[grid.index(i, j, l)] = c;
          any = true;
          support.lo = {std::min(support.lo[0], i), std::min(support.lo[1], j),
                        std::min(support.lo[2], l)};
          support.hi = {std::max(support.hi[0], i), std::max(support.hi[1], j),
                        std::max(support.hi[2], l)};
        }
      }
  if (!any) support = IndexBox3{{0, 0, 0}, {0, 0, 0}};
  return Coefficient(grid, std::move(vals), support, c_max);
}

namespace {

Inclusion box(std::array<double, 3> center, std::array<double, 3> half, double eps) {
  return Inclusion{Inclusion::Shape::Box, center, half, eps};
}

Inclusion ball(std::array<double, 3> center, double radius, double eps) {
  return Inclusion{Inclusion::Shape::Ball, center, {radius, radius, radius}, eps};
}

}  // namespace

Phantom phantom_preset(const std::string& name) {
  // Desk-scale buried targets, front faces at z = 0, sizes 5-9 length units
  // of 0.1 (i.e. 5-9 cm), dielectric constants spanning dry wood to wet wood.
  Phantom ph;
  if (name == "empty") return ph;
  if (name == "object1") {
    ph.inclusions = {box({0.2, -0.1, 0.45}, {0.2, 0.2, 0.45}, 4.50)};
  } else if (name == "object2") {
    ph.inclusions = {ball({-0.3, 0.2, 0.35}, 0.35, 5.45)};
  } else if (name == "object3") {
    ph.inclusions = {ball({0.25, 0.25, 0.3}, 0.3, 5.61)};
  } else if (name == "object4") {
    ph.inclusions = {box({-0.2, -0.25, 0.3}, {0.3, 0.3, 0.3}, 4.89)};
  } else if (name == "object5") {
    ph.inclusions = {box({0.15, 0.1, 0.35}, {0.25, 0.25, 0.35}, 7.58)};
  } else if (name == "object6") {
    ph.inclusions = {box({0.0, 0.0, 0.3}, {0.3, 0.3, 0.3}, 4.80)};
  } else {
    throw std::invalid_argument("phantom_preset: unknown preset '" + name + "'");
  }
  return ph;
}

std::vector<std::string> phantom_preset_names() {
  return {"empty", "object1", "object2", "object3", "object4", "object5", "object6"};
}

}  // namespace burim
