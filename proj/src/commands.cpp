#include "burim/commands.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "burim/io.hpp"
#include "burim/pipeline.hpp"
#include "burim/propagation.hpp"

namespace burim::cmd {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

void log_line(const std::string& s) { std::fprintf(stderr, "[burim] %s\n", s.c_str()); }

void echo_config(const RunConfig& cfg, const fs::path& dir) {
  io::write_text_file(dir / "burim.cfg", cfg.to_text());
}

std::vector<double> peak_curve(const MultiFrequencyData& d) {
  std::vector<double> peaks(d.size());
  for (std::size_t f = 0; f < d.size(); ++f) peaks[f] = d.planes[f].max_abs();
  return peaks;
}

}  // namespace

int simulate(const RunConfig& cfg, const Phantom& phantom, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  SyntheticDataset ds = synthesize_dataset(cfg, phantom);

  io::write_dataset(out_dir / "dataset_target.mfd", ds.target);
  io::write_dataset(out_dir / "dataset_reference.mfd", ds.reference);
  io::write_coefficient(out_dir / "truth.bvol", ds.truth);
  io::write_vtk_volume(out_dir / "truth.vtk", ds.truth);
  io::write_curve_csv(out_dir / "scatter_peak.csv", "frequency_ghz", ds.target.frequencies_ghz,
                      "max_abs_scattered", ds.scatter_peak);
  echo_config(cfg, out_dir);
  log_line("simulate: wrote " + std::to_string(ds.target.size()) + " frequencies to " +
           out_dir.string());
  return kOk;
}

int preprocess(const fs::path& target_dataset, const fs::path& reference_dataset,
               const RunConfig& cfg, const fs::path& out_dir) {
  fs::create_directories(out_dir);
  MultiFrequencyData target = io::read_dataset(target_dataset);
  MultiFrequencyData reference = io::read_dataset(reference_dataset);

  auto bundle = preprocess_pipeline(cfg, target, reference);
  if (!bundle) {
    json rep;
    rep["outcome"] = "no_stable_interval";
    io::write_text_file(out_dir / "interval.json", rep.dump(2) + "\n");
    echo_config(cfg, out_dir);
    log_line("preprocess: no stable interval");
    return kNoStableInterval;
  }

  io::write_dataset(out_dir / "embedded_diff.mfd", bundle->embedded_diff);
  io::write_dataset(out_dir / "propagated.mfd", bundle->propagated);
  io::write_footprint(out_dir / "footprint.bfpt", bundle->footprint);
  io::write_completed_data(out_dir / "boundary.bcbd", bundle->completed);

  io::write_curve_csv(out_dir / "freq_curve.csv", "frequency_ghz", bundle->at_hint.frequencies_ghz,
                      "max_abs_propagated", peak_curve(bundle->at_hint));

  // Peak-vs-plane curve at the optimal wavenumber.
  {
    int probe = bundle->interval.first;
    double best = 1e300;
    for (int f = 0; f < int(bundle->embedded_diff.size()); ++f) {
      const double d =
          std::abs(ghz_to_k(bundle->embedded_diff.frequencies_ghz[f]) - bundle->interval.k_optimal);
      if (d < best) {
        best = d;
        probe = f;
      }
    }
    std::vector<double> zs, peaks;
    for (double z = cfg.z_scan_lo; z <= cfg.z_scan_hi + 1e-12; z += cfg.z_scan_step) {
      if (z == bundle->embedded_diff.planes[probe].grid.z_level) continue;
      zs.push_back(z);
      peaks.push_back(
          propagate(bundle->embedded_diff.planes[probe], z, cfg.convention).max_abs());
    }
    io::write_curve_csv(out_dir / "zscan.csv", "plane_z", zs, "max_abs_propagated", peaks);
  }

  json rep;
  rep["outcome"] = "ok";
  rep["first_ghz"] = bundle->propagated.frequencies_ghz.front();
  rep["last_ghz"] = bundle->propagated.frequencies_ghz.back();
  rep["optimal_ghz"] = bundle->interval.optimal_frequency_ghz;
  rep["k_lo"] = bundle->interval.k_lo;
  rep["k_hi"] = bundle->interval.k_hi;
  rep["k_optimal"] = bundle->interval.k_optimal;
  rep["z_star"] = bundle->z_star;
  rep["partition_n"] = bundle->completed.partition.count;
  rep["footprint_cells"] = bundle->footprint.count();
  auto centroid = bundle->footprint.centroid();
  rep["footprint_centroid"] = {centroid[0], centroid[1]};
  io::write_text_file(out_dir / "interval.json", rep.dump(2) + "\n");
  echo_config(cfg, out_dir);
  log_line("preprocess: stable run " + std::to_string(bundle->interval.length()) +
           " freqs, optimal " + std::to_string(bundle->interval.optimal_frequency_ghz) +
           " GHz, z* " + std::to_string(bundle->z_star));
  return kOk;
}

int invert(const fs::path& bundle_dir, const RunConfig& cfg, const fs::path& out_dir,
           const std::optional<fs::path>& truth_volume) {
  cfg.validate();
  fs::create_directories(out_dir);

  CompletedData data = io::read_completed_data(bundle_dir / "boundary.bcbd");
  TargetFootprint fp = io::read_footprint(bundle_dir / "footprint.bfpt");

  InversionResult res = run_inversion(data, fp, inversion_config(cfg));

  io::write_coefficient(out_dir / "result.bvol", res.c);
  io::write_vtk_volume(out_dir / "result.vtk", res.c);

  {
    std::string lines;
    for (const auto& r : res.records) {
      json j;
      j["sweep"] = r.sweep;
      j["inner"] = r.inner;
      j["bridge"] = r.bridge;
      if (r.error >= 0.0) j["error"] = r.error;
      j["bvp_residual"] = r.bvp_residual;
      j["bvp_iterations"] = r.bvp_iterations;
      j["ls_residual"] = r.ls_residual;
      j["ls_iterations"] = r.ls_iterations;
      j["min_abs_u"] = r.min_abs_u;
      j["max_c"] = r.max_c;
      j["imag_residual_max"] = r.imag_residual_max;
      j["clamped"] = r.clamped;
      lines += j.dump() + "\n";
    }
    io::write_text_file(out_dir / "diagnostics.jsonl", lines);
  }

  json summary;
  summary["computed_c"] = res.reported_max;
  summary["converged"] = res.converged;
  summary["sweeps"] = res.sweeps_done;
  summary["stop_reason"] = res.stop_reason;
  summary["avg_of_maxima"] = res.avg_of_maxima;
  if (truth_volume) {
    Coefficient truth = io::read_coefficient(*truth_volume);
    const double true_max = truth.max_value();
    summary["true_c"] = true_max;
    summary["relative_error"] = std::abs(res.reported_max - true_max) / true_max;
  }
  io::write_text_file(out_dir / "summary.json", summary.dump(2) + "\n");
  echo_config(cfg, out_dir);

  std::printf("computed c: %.4f", res.reported_max);
  if (summary.contains("relative_error"))
    std::printf("  (true %.4f, relative error %.2f%%)", double(summary["true_c"]),
                100.0 * double(summary["relative_error"]));
  std::printf("  [%s after %d sweeps]\n", res.converged ? "converged" : "cap reached",
              res.sweeps_done);
  return res.converged ? kOk : kNumerical;
}

int report(const fs::path& result_volume, const fs::path& out_dir,
           const std::optional<fs::path>& truth_volume, const std::optional<fs::path>& bundle_dir) {
  fs::create_directories(out_dir);
  Coefficient c = io::read_coefficient(result_volume);

  io::write_coefficient_slices_csv(out_dir, "slice", c);

  const double level = 0.5 * c.max_value();
  const std::size_t tris = io::write_isosurface_obj(out_dir / "isosurface.obj", c, level);

  json metrics;
  metrics["computed_c"] = c.max_value();
  metrics["isovalue"] = level;
  metrics["triangles"] = tris;
  std::array<double, 3> lo{}, hi{};
  if (io::isosurface_bounds(c, level, lo, hi)) {
    metrics["iso_lo"] = {lo[0], lo[1], lo[2]};
    metrics["iso_hi"] = {hi[0], hi[1], hi[2]};
    metrics["iso_center"] = {(lo[0] + hi[0]) / 2, (lo[1] + hi[1]) / 2, (lo[2] + hi[2]) / 2};
  }

  if (truth_volume) {
    Coefficient truth = io::read_coefficient(*truth_volume);
    metrics["true_c"] = truth.max_value();
    metrics["relative_error"] = std::abs(c.max_value() - truth.max_value()) / truth.max_value();
    std::array<double, 3> tlo{}, thi{};
    for (int a = 0; a < 3; ++a) {
      tlo[a] = truth.grid.coord(a, truth.support.lo[a]);
      thi[a] = truth.grid.coord(a, truth.support.hi[a]);
    }
    metrics["truth_lo"] = {tlo[0], tlo[1], tlo[2]};
    metrics["truth_hi"] = {thi[0], thi[1], thi[2]};
    if (metrics.contains("iso_lo")) {
      bool overlap = true;
      for (int a = 0; a < 3; ++a) overlap = overlap && lo[a] <= thi[a] && hi[a] >= tlo[a];
      metrics["iso_overlaps_truth"] = overlap;
    }
  }

  if (bundle_dir) {
    // Re-emit the spectral-pipeline curves next to the geometry products.
    for (const char* name : {"freq_curve.csv", "zscan.csv"}) {
      const fs::path src = *bundle_dir / name;
      if (fs::exists(src)) fs::copy_file(src, out_dir / name, fs::copy_options::overwrite_existing);
    }
  }

  io::write_text_file(out_dir / "metrics.json", metrics.dump(2) + "\n");
  return kOk;
}

int verify_theorem(const TheoremParams& p) {
  // Refinement doubles the node count at fixed spacing: the dominant error
  // is the truncation of the transform integrals to the sampled window, so
  // the window itself is the discretization parameter being refined.
  auto make_phi = [&](int counts, double half) {
    Grid2D g = Grid2D::spanning({-half, -half}, {half, half}, {counts, counts}, 0.0);
    PlaneData phi(g, p.k);
    for (int j = 0; j < counts; ++j)
      for (int i = 0; i < counts; ++i) {
        auto q = g.node(i, j);
        phi.at(i, j) = std::exp(-(q[0] * q[0] + q[1] * q[1]) / (2.0 * p.sigma * p.sigma));
      }
    return phi;
  };

  const double spacing = 2.0 * p.window_half / (p.counts - 1);
  const double fine_half = p.window_half + spacing * double(p.counts) / 2.0;
  const TheoremCheck coarse =
      propagation_theorem_check(make_phi(p.counts, p.window_half), p.x3, p.k);
  const TheoremCheck fine =
      propagation_theorem_check(make_phi(2 * p.counts, fine_half), p.x3, p.k);

  std::printf("plane %d^2 (window %.2f): relative L2 error %.5f over %d propagating modes\n",
              p.counts, p.window_half, coarse.rel_l2_error, coarse.modes);
  std::printf("plane %d^2 (window %.2f): relative L2 error %.5f over %d propagating modes\n",
              2 * p.counts, fine_half, fine.rel_l2_error, fine.modes);
  const bool ok = coarse.rel_l2_error <= p.tolerance && fine.rel_l2_error < coarse.rel_l2_error;
  std::printf("spectral identity check: %s\n", ok ? "PASS" : "FAIL");
  return ok ? kOk : kNumerical;
}

}  // namespace burim::cmd
