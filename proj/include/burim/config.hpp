#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "burim/convention.hpp"
#include "burim/forward.hpp"
#include "burim/inversion.hpp"
#include "burim/preprocess.hpp"

namespace burim {

// Batch-run parameters: grids, frequency sweep, preprocessing thresholds,
// partitioning and solver settings. Serialized as flat key=value text and
// echoed into every run directory.
struct RunConfig {
  // Synthetic measurement geometry (lengths in units of 10 cm).
  double meas_half = 5.0;
  int meas_counts = 51;
  double meas_z = -8.78;

  // Forward-simulation support box around the targets.
  double sim_half_xy = 1.25;
  double sim_z_lo = -0.85;
  double sim_z_hi = 1.65;
  int sim_counts = 32;

  // Frequency sweep (GHz).
  double freq_lo = 2.53;
  double freq_hi = 2.71;
  double freq_step = 0.03;

  // Preprocessing.
  double pad_factor = 2.0;
  double stability_delta = 0.2;
  int stability_loc_radius = 1;
  double truncation_fraction = 0.8;
  double footprint_threshold = 0.7;
  double smooth_sigma = 0.65;
  double z_scan_lo = -3.5;
  double z_scan_hi = 3.5;
  double z_scan_step = 0.1;
  double propagate_hint_z = 0.0;  // provisional plane for interval selection

  // Inversion domain.
  double omega_half_xy = 2.5;
  double omega_z_extent = 5.0;
  int omega_counts = 32;
  double search_z_hi = 1.0;
  int partition_n = 0;  // 0: align nodes with the measured frequency lattice

  // Solvers and stopping rules.
  LSConfig ls;
  StoppingConfig stopping;
  double bvp_tol = 1e-8;
  double tail_guard_rel = 1e-6;
  double c_max = Coefficient::kDefaultMax;

  // Noise and reproducibility.
  double noise_level = 0.05;
  std::uint64_t seed = 1;
  WaveConvention convention = WaveConvention::Minus;

  void validate() const;

  std::string to_text() const;
  static RunConfig from_text(const std::string& text);
  void apply(const std::string& key, const std::string& value);
};

}  // namespace burim
