#pragma once

#include <string>
#include <vector>

#include "burim/fields.hpp"

namespace burim {

struct Inclusion {
  enum class Shape { Box, Ball };
  Shape shape = Shape::Box;
  std::array<double, 3> center{};
  std::array<double, 3> half_extents{};  // radius lives in [0] for balls
  double dielectric = 1.0;

  bool contains(double x, double y, double z) const;
  std::array<double, 3> lo() const;
  std::array<double, 3> hi() const;
};

// Synthetic scene: unit background plus dielectric inclusions.
struct Phantom {
  std::vector<Inclusion> inclusions;
  double noise_level = 0.0;

  void validate() const;
  bool empty() const { return inclusions.empty(); }
  // Bounding box center of all inclusions (ground truth for reports).
  std::array<double, 3> bounding_center() const;
};

// Rasterize onto a grid; throws when an inclusion pokes outside the grid.
Coefficient phantom_coefficient(const Phantom& ph, const Grid3D& grid,
                                double c_max = Coefficient::kDefaultMax);

// Named presets object1..object6 (buried desk-scale targets with measured
// dielectric constants between 4.5 and 7.6) and "empty".
Phantom phantom_preset(const std::string& name);
std::vector<std::string> phantom_preset_names();

}  // namespace burim
