#pragma once

#include <optional>

#include "burim/config.hpp"
#include "burim/phantom.hpp"

namespace burim {

// In-memory pipeline stages behind the CLI commands.

struct SyntheticDataset {
  MultiFrequencyData target;
  MultiFrequencyData reference;
  Coefficient truth;
  std::vector<double> scatter_peak;  // max |scattered| per frequency
};

// Forward-simulate the phantom over the configured sweep and synthesize
// measurement-plane datasets for the target and reference scenes. Noise is
// complex Gaussian, sized relative to the per-frequency RMS of the
// scattered field, drawn from per-(scene, frequency) seeded streams.
SyntheticDataset synthesize_dataset(const RunConfig& cfg, const Phantom& phantom);

struct PreprocessBundle {
  MultiFrequencyData embedded_diff;  // zero-extended difference planes
  MultiFrequencyData at_hint;        // propagated to the provisional plane
  MultiFrequencyData propagated;     // stable run at z*, truncated and smoothed
  StableInterval interval;
  double z_star = 0.0;
  TargetFootprint footprint;
  CompletedData completed;
};

// Subtraction, zero-extension, provisional propagation, stable-interval
// selection, z* scan, truncation + smoothing, footprint, completion.
// Empty optional when no stable interval exists.
std::optional<PreprocessBundle> preprocess_pipeline(const RunConfig& cfg,
                                                    const MultiFrequencyData& target,
                                                    const MultiFrequencyData& reference);

Grid3D omega_grid(const RunConfig& cfg, double z_star);
InversionConfig inversion_config(const RunConfig& cfg);

}  // namespace burim
