#pragma once

#include <stdexcept>
#include <vector>

namespace burim {

// Uniform wavenumber partition k_N = k_min < ... < k_1 < k_0 = k_max,
// indexed from the top: node(0) = k_max, node(N) = k_min.
struct WavenumberPartition {
  double k_min = 0.0;
  double k_max = 0.0;
  int count = 0;  // N: number of steps; N+1 nodes

  double step() const { return (k_max - k_min) / count; }
  double node(int i) const { return k_max - i * step(); }
  std::vector<double> nodes() const {
    std::vector<double> v(count + 1);
    for (int i = 0; i <= count; ++i) v[i] = node(i);
    return v;
  }
};

inline WavenumberPartition build_partition(double k_min, double k_max, int n) {
  if (!(k_min > 0.0)) throw std::invalid_argument("build_partition: k_min must be positive");
  if (!(k_min < k_max)) throw std::invalid_argument("build_partition: requires k_min < k_max");
  if (n < 1) throw std::invalid_argument("build_partition: N must be >= 1");
  return WavenumberPartition{k_min, k_max, n};
}

// Dimensionless wavenumber for a frequency in GHz: k = (2π f / c) * 10 cm.
inline double ghz_to_k(double f_ghz) {
  if (!(f_ghz > 0.0)) throw std::invalid_argument("ghz_to_k: frequency must be positive");
  constexpr double c_light = 299792458.0;  // m/s
  constexpr double unit = 0.1;             // m per dimensionless length unit
  constexpr double two_pi = 6.283185307179586476925286766559;
  return two_pi * f_ghz * 1e9 / c_light * unit;
}

}  // namespace burim
