#include "burim/pipeline.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "burim/propagation.hpp"

namespace burim {

namespace {

// Deterministic per-(scene, frequency) complex Gaussian noise.
struct NoiseStream {
  std::mt19937_64 eng;
  NoiseStream(std::uint64_t seed, std::uint64_t scene, std::uint64_t freq_index)
      : eng(seed ^ (0x9e3779b97f4a7c15ULL * (freq_index + 1) + 0x2545F4914F6CDD1DULL * scene)) {}

  double uniform() { return double(eng() >> 11) * 0x1.0p-53; }
  cplx gaussian() {
    const double u1 = 1.0 - uniform();  // (0,1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return cplx(r * std::cos(a), r * std::sin(a)) / std::sqrt(2.0);
  }
};

double rms(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& z : v) s += std::norm(z);
  return std::sqrt(s / double(v.size()));
}

std::vector<double> frequency_sweep(const RunConfig& cfg) {
  std::vector<double> f;
  for (double v = cfg.freq_lo; v <= cfg.freq_hi + 1e-9; v += cfg.freq_step) f.push_back(v);
  if (f.size() < 2) throw std::invalid_argument("frequency sweep has fewer than 2 points");
  return f;
}

}  // namespace

Grid3D omega_grid(const RunConfig& cfg, double z_star) {
  return Grid3D::spanning({-cfg.omega_half_xy, -cfg.omega_half_xy, z_star},
                          {cfg.omega_half_xy, cfg.omega_half_xy, z_star + cfg.omega_z_extent},
                          {cfg.omega_counts, cfg.omega_counts, cfg.omega_counts});
}

InversionConfig inversion_config(const RunConfig& cfg) {
  InversionConfig icfg;
  icfg.stopping = cfg.stopping;
  icfg.ls = cfg.ls;
  icfg.bvp_tol = cfg.bvp_tol;
  icfg.smooth_sigma = cfg.smooth_sigma;
  icfg.search_z_hi = cfg.search_z_hi;
  icfg.c_max = cfg.c_max;
  icfg.tail_guard_rel = cfg.tail_guard_rel;
  return icfg;
}

SyntheticDataset synthesize_dataset(const RunConfig& cfg, const Phantom& phantom) {
  cfg.validate();
  phantom.validate();

  const auto freqs = frequency_sweep(cfg);
  const Grid2D meas = Grid2D::spanning({-cfg.meas_half, -cfg.meas_half},
                                       {cfg.meas_half, cfg.meas_half},
                                       {cfg.meas_counts, cfg.meas_counts}, cfg.meas_z);
  const Grid3D sim = Grid3D::spanning({-cfg.sim_half_xy, -cfg.sim_half_xy, cfg.sim_z_lo},
                                      {cfg.sim_half_xy, cfg.sim_half_xy, cfg.sim_z_hi},
                                      {cfg.sim_counts, cfg.sim_counts, cfg.sim_counts});

  SyntheticDataset out;
  out.truth = phantom_coefficient(phantom, sim, cfg.c_max);
  out.target.frequencies_ghz = out.reference.frequencies_ghz = freqs;
  out.target.planes.resize(freqs.size());
  out.reference.planes.resize(freqs.size());
  out.scatter_peak.assign(freqs.size(), 0.0);

  const bool empty_scene = phantom.empty();
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int fi = 0; fi < int(freqs.size()); ++fi) {
    const double k = ghz_to_k(freqs[fi]);
    PlaneData incident = incident_trace(k, meas, cfg.convention);
    PlaneData scattered(meas, k);
    if (!empty_scene) {
      LSResult ls = solve_lippmann_schwinger(out.truth, k, cfg.convention, cfg.ls);
      scattered = scattered_on_plane(ls.u, out.truth, k, meas, cfg.convention);
    }
    out.scatter_peak[fi] = scattered.max_abs();

    const double sigma = cfg.noise_level * rms(scattered.values);
    PlaneData tgt = incident;
    PlaneData ref = incident;
    NoiseStream tgt_noise(cfg.seed, 1, fi), ref_noise(cfg.seed, 2, fi);
    for (std::size_t q = 0; q < tgt.values.size(); ++q) {
      tgt.values[q] += scattered.values[q];
      if (sigma > 0.0) {
        tgt.values[q] += sigma * tgt_noise.gaussian();
        ref.values[q] += sigma * ref_noise.gaussian();
      }
    }
    out.target.planes[fi] = std::move(tgt);
    out.reference.planes[fi] = std::move(ref);
  }
  return out;
}

std::optional<PreprocessBundle> preprocess_pipeline(const RunConfig& cfg,
                                                    const MultiFrequencyData& target,
                                                    const MultiFrequencyData& reference) {
  cfg.validate();

  MultiFrequencyData diff = subtract_reference(target, reference);

  PreprocessBundle b;
  b.embedded_diff.frequencies_ghz = diff.frequencies_ghz;
  b.embedded_diff.planes.resize(diff.size());
  for (std::size_t f = 0; f < diff.size(); ++f)
    b.embedded_diff.planes[f] = embed_plane(diff.planes[f], cfg.pad_factor);

  b.at_hint.frequencies_ghz = b.embedded_diff.frequencies_ghz;
  b.at_hint.planes.resize(b.embedded_diff.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int f = 0; f < int(b.embedded_diff.size()); ++f)
    b.at_hint.planes[f] =
        propagate(b.embedded_diff.planes[f], cfg.propagate_hint_z, cfg.convention);

  StabilityCriteria crit{cfg.stability_delta, cfg.stability_loc_radius, 3};
  auto interval = select_stable_interval(b.at_hint, crit);
  if (!interval) return std::nullopt;
  b.interval = *interval;

  b.z_star = estimate_z_star(b.embedded_diff, interval->k_optimal, {cfg.z_scan_lo, cfg.z_scan_hi},
                             cfg.convention, cfg.z_scan_step);

  const int run_len = interval->length();
  b.propagated.frequencies_ghz.assign(b.embedded_diff.frequencies_ghz.begin() + interval->first,
                                      b.embedded_diff.frequencies_ghz.begin() + interval->last + 1);
  b.propagated.planes.resize(run_len);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int r = 0; r < run_len; ++r) {
    PlaneData prop =
        propagate(b.embedded_diff.planes[interval->first + r], b.z_star, cfg.convention);
    b.propagated.planes[r] =
        gaussian_smooth(truncate_plane(prop, cfg.truncation_fraction), cfg.smooth_sigma);
  }

  int opt_in_run = 0;
  for (int r = 0; r < run_len; ++r)
    if (b.propagated.frequencies_ghz[r] == interval->optimal_frequency_ghz) opt_in_run = r;
  b.footprint = target_footprint(b.propagated.planes[opt_in_run], interval->k_optimal,
                                 cfg.footprint_threshold);

  const int n_steps = cfg.partition_n > 0 ? cfg.partition_n : run_len - 1;
  WavenumberPartition part = build_partition(interval->k_lo, interval->k_hi, n_steps);

  const Grid3D omega = omega_grid(cfg, b.z_star);
  Grid2D gamma({omega.origin[0], omega.origin[1]}, {omega.spacing[0], omega.spacing[1]},
               {omega.counts[0], omega.counts[1]}, b.z_star);

  auto plane_at_k = [&](double k) -> PlaneData {
    std::vector<double> ks(run_len);
    for (int r = 0; r < run_len; ++r) ks[r] = ghz_to_k(b.propagated.frequencies_ghz[r]);
    int lo = 0;
    for (int r = 0; r + 1 < run_len; ++r)
      if (k >= ks[r] - 1e-9) lo = r;
    const int hi = std::min(lo + 1, run_len - 1);
    double t = hi == lo ? 0.0 : (k - ks[lo]) / (ks[hi] - ks[lo]);
    t = std::clamp(t, 0.0, 1.0);
    if (std::abs(k - ks[lo]) < 1e-9) t = 0.0;
    if (std::abs(k - ks[hi]) < 1e-9) t = 1.0;
    PlaneData out = b.propagated.planes[lo];
    out.wavenumber = k;
    for (std::size_t q = 0; q < out.values.size(); ++q)
      out.values[q] =
          (1.0 - t) * b.propagated.planes[lo].values[q] + t * b.propagated.planes[hi].values[q];
    return out;
  };

  b.completed.omega = omega;
  b.completed.partition = part;
  b.completed.convention = cfg.convention;
  b.completed.g.reserve(part.count + 1);
  const double sign = convention_sign(cfg.convention);
  for (int i = 0; i <= part.count; ++i) {
    const double k = part.node(i);
    PlaneData on_gamma = resample_plane(plane_at_k(k), gamma);
    const cplx inc = std::polar(1.0, sign * k * b.z_star);
    for (auto& v : on_gamma.values) v += inc;  // total field: incident + scattered
    b.completed.g.push_back(complete_boundary_data(on_gamma, omega, k, cfg.convention));
  }
  return b;
}

}  // namespace burim
