#pragma once

#include <filesystem>
#include <optional>

#include "burim/config.hpp"
#include "burim/phantom.hpp"

namespace burim::cmd {

inline constexpr int kOk = 0;
inline constexpr int kValidation = 2;
inline constexpr int kNumerical = 3;
inline constexpr int kNoStableInterval = 4;

// Each command writes its artifacts under out_dir (created if missing),
// echoes the effective config, and returns a process exit code.

int simulate(const RunConfig& cfg, const Phantom& phantom, const std::filesystem::path& out_dir);

int preprocess(const std::filesystem::path& target_dataset,
               const std::filesystem::path& reference_dataset, const RunConfig& cfg,
               const std::filesystem::path& out_dir);

int invert(const std::filesystem::path& bundle_dir, const RunConfig& cfg,
           const std::filesystem::path& out_dir,
           const std::optional<std::filesystem::path>& truth_volume);

int report(const std::filesystem::path& result_volume, const std::filesystem::path& out_dir,
           const std::optional<std::filesystem::path>& truth_volume,
           const std::optional<std::filesystem::path>& bundle_dir);

struct TheoremParams {
  int counts = 128;
  double window_half = 6.4;
  double x3 = -0.5;
  double k = 3.0;
  double sigma = 0.35;
  double tolerance = 0.05;
};
int verify_theorem(const TheoremParams& params);

}  // namespace burim::cmd
