// Acceptance suite: end-to-end checks of the solver stack against
// independent oracles and the documented behavior of the full pipeline.
// Prints one PASS/FAIL line per criterion and exits nonzero on failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "burim/commands.hpp"
#include "burim/io.hpp"
#include "burim/pipeline.hpp"
#include "burim/propagation.hpp"
#include "support/oracles.hpp"

using namespace burim;
namespace fs = std::filesystem;

namespace {

constexpr double kPi = std::numbers::pi;

struct Tally {
  int failures = 0;
  void line(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %-38s %s\n", pass ? "PASS" : "FAIL", idx, name.c_str(),
                detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string file_bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is.good()) return "<missing:" + p.string() + ">";
  return std::string((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
}

// ---------------------------------------------------------------- 1
void sphere_oracle(Tally& t) {
  const auto t0 = std::chrono::steady_clock::now();
  const double k = 3.0, radius = 0.5, eps = 2.0;
  Grid3D g = Grid3D::spanning({-1, -1, -1}, {1, 1, 1}, {64, 64, 64});
  Phantom ph;
  ph.inclusions = {Inclusion{Inclusion::Shape::Ball, {0, 0, 0}, {radius, radius, radius}, eps}};
  const auto c = phantom_coefficient(ph, g);
  const auto res = solve_lippmann_schwinger(c, k, WaveConvention::Plus, LSConfig{});

  // Evaluation sphere r = 1.5: total field via the volume representation
  // against the series solution.
  oracle::SphereSeries series(k, radius, eps);
  const int n_pts = 312;
  std::vector<cplx> got, ref;
  const double cell = g.spacing[0] * g.spacing[1] * g.spacing[2];
  for (int p = 0; p < n_pts; ++p) {
    // Fibonacci sphere
    const double zu = 1.0 - 2.0 * (p + 0.5) / n_pts;
    const double ru = std::sqrt(1.0 - zu * zu);
    const double th = kPi * (1.0 + std::sqrt(5.0)) * (p + 0.5);
    const double x = 1.5 * ru * std::cos(th), y = 1.5 * ru * std::sin(th), z = 1.5 * zu;
    cplx acc(0.0, 0.0);
    for (int l = 0; l < 64; ++l)
      for (int j = 0; j < 64; ++j)
        for (int i = 0; i < 64; ++i) {
          const double beta = c.at(i, j, l) - 1.0;
          if (beta == 0.0) continue;
          const auto q = g.node(i, j, l);
          const double r = std::sqrt((x - q[0]) * (x - q[0]) + (y - q[1]) * (y - q[1]) +
                                     (z - q[2]) * (z - q[2]));
          acc += std::polar(1.0, k * r) / (4.0 * kPi * r) * beta * res.u.at(i, j, l);
        }
    got.push_back(std::polar(1.0, k * z) + k * k * cell * acc);
    ref.push_back(series.total_field(x, y, z));
  }
  const double err = oracle::rel_l2(got, ref);
  const double secs = seconds_since(t0);
  char detail[160];
  std::snprintf(detail, sizeof(detail), "rel L2 %.4f (tol 0.02), %.0f s (budget 120 s)", err,
                secs);
  t.line(1, "forward solver vs sphere series", err < 0.02 && secs < 120.0, detail);
}

// ---------------------------------------------------------------- 2
void born_consistency(Tally& t) {
  Grid3D g = Grid3D::spanning({-1, -1, -1}, {1, 1, 1}, {32, 32, 32});
  Phantom ph;
  ph.inclusions = {Inclusion{Inclusion::Shape::Ball, {0, 0, 0}, {0.4, 0.4, 0.4}, 1.01}};
  const auto c = phantom_coefficient(ph, g);
  const auto res = solve_lippmann_schwinger(c, 3.0, WaveConvention::Plus, LSConfig{});
  const auto born = oracle::born_field(c, 3.0);
  const double err = oracle::rel_l2(res.u.values, born.values);
  char detail[120];
  std::snprintf(detail, sizeof(detail), "rel L2 %.6f (tol 0.01)", err);
  t.line(2, "born limit vs direct quadrature", err < 0.01, detail);
}

// ---------------------------------------------------------------- 3
void theorem_check(Tally& t) {
  auto make_phi = [&](int counts, double half) {
    Grid2D g = Grid2D::spanning({-half, -half}, {half, half}, {counts, counts}, 0.0);
    PlaneData phi(g, 3.0);
    for (int j = 0; j < counts; ++j)
      for (int i = 0; i < counts; ++i) {
        auto q = g.node(i, j);
        phi.at(i, j) = std::exp(-(q[0] * q[0] + q[1] * q[1]) / (2.0 * 0.35 * 0.35));
      }
    return phi;
  };
  const double spacing = 12.8 / 127.0;
  const auto coarse = propagation_theorem_check(make_phi(128, 6.4), -0.5, 3.0);
  const auto fine =
      propagation_theorem_check(make_phi(256, 6.4 + spacing * 64.0), -0.5, 3.0);
  char detail[160];
  std::snprintf(detail, sizeof(detail), "128^2: %.4f, refined 256^2: %.4f (tol 0.05, decreasing)",
                coarse.rel_l2_error, fine.rel_l2_error);
  t.line(3, "half-space spectral identity",
         coarse.rel_l2_error < 0.05 && fine.rel_l2_error < coarse.rel_l2_error, detail);
}

// ---------------------------------------------------------------- 4
void propagation_properties(Tally& t) {
  Grid2D g = Grid2D::spanning({-4, -4}, {4, 4}, {48, 48}, 0.0);
  const double k = 3.0;
  std::mt19937 eng(13);
  std::normal_distribution<double> dist;
  PlaneData p(g, k);
  for (auto& v : p.values) v = cplx(dist(eng), dist(eng));

  const auto reference = propagating_part(p);
  const auto there = propagate(p, -2.2, WaveConvention::Minus);
  const auto back = propagate(there, 0.0, WaveConvention::Minus);
  const double round_trip = oracle::rel_l2(back.values, reference.values);

  // pure evanescent mode
  PlaneData ev(g, 1.0);
  const double v1 = 2.0 * kPi * 12 / (48 * g.spacing[0]);
  for (int j = 0; j < 48; ++j)
    for (int i = 0; i < 48; ++i) {
      auto q = g.node(i, j);
      ev.at(i, j) = std::polar(1.0, q[0] * v1);
    }
  const double annihilated = propagate(ev, -1.0, WaveConvention::Minus).max_abs();

  double e0 = 0.0, e1 = 0.0;
  for (const auto& v : reference.values) e0 += std::norm(v);
  for (const auto& v : there.values) e1 += std::norm(v);
  const double energy_drift = std::abs(e1 - e0) / e0;

  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "round trip %.2e, evanescent %.2e, energy drift %.2e (tol 1e-12)", round_trip,
                annihilated, energy_drift);
  t.line(4, "propagation operator properties",
         round_trip < 1e-12 && annihilated < 1e-12 && energy_drift < 1e-12, detail);
}

// ---------------------------------------------------------------- 5
void bvp_convergence(Tally& t) {
  const double k = 5.5, k_top = 5.68;
  auto err_at = [&](int n) {
    Grid3D g = Grid3D::spanning({0, 0, 0}, {1, 1, 1}, {n, n, n});
    auto exact = [](double x, double y, double z) {
      return cplx(std::sin(kPi * x) * std::cos(kPi * y), z * z * (1 - z));
    };
    std::array<ComplexVolume, 3> w{ComplexVolume(g), ComplexVolume(g), ComplexVolume(g)};
    for (std::size_t q = 0; q < g.size(); ++q) {
      w[0].values[q] = k * cplx(0.3, 0.1);
      w[1].values[q] = k * cplx(-0.2, 0.05);
      w[2].values[q] = k * cplx(0.0, -k_top);
    }
    ComplexVolume rhs(g);
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          auto p = g.node(i, j, l);
          const double x = p[0], y = p[1], z = p[2];
          const cplx lap = cplx(-2.0 * kPi * kPi * std::sin(kPi * x) * std::cos(kPi * y),
                                2.0 - 6.0 * z);
          const cplx dx = cplx(kPi * std::cos(kPi * x) * std::cos(kPi * y), 0.0);
          const cplx dy = cplx(-kPi * std::sin(kPi * x) * std::sin(kPi * y), 0.0);
          const cplx dz = cplx(0.0, 2.0 * z - 3.0 * z * z);
          rhs.at(i, j, l) = 0.5 * k * lap + w[0].at(i, j, l) * dx + w[1].at(i, j, l) * dy +
                            w[2].at(i, j, l) * dz;
        }
    const auto psi = BoundaryField::from_function(
        g, [&](double x, double y, double z) { return exact(x, y, z); });
    const auto res = solve_convection_diffusion(0.5 * k, &w, &rhs, psi, 1e-11);
    double num = 0.0, den = 0.0;
    for (int l = 0; l < n; ++l)
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
          auto p = g.node(i, j, l);
          num += std::norm(res.q.at(i, j, l) - exact(p[0], p[1], p[2]));
          den += std::norm(exact(p[0], p[1], p[2]));
        }
    return std::sqrt(num / den);
  };
  const double e16 = err_at(16), e32 = err_at(32), e64 = err_at(64);
  const double o1 = std::log2(e16 / e32), o2 = std::log2(e32 / e64);
  char detail[160];
  std::snprintf(detail, sizeof(detail), "errors %.2e / %.2e / %.2e, orders %.2f, %.2f (tol 1.8)",
                e16, e32, e64, o1, o2);
  t.line(5, "q-bvp manufactured convergence", o1 >= 1.8 && o2 >= 1.8, detail);
}

// ---------------------------------------------------------------- 6
void background_fixed_point(Tally& t) {
  Grid3D omega = Grid3D::spanning({-2.5, -2.5, -0.8}, {2.5, 2.5, 4.2}, {21, 21, 21});
  CompletedData data;
  data.omega = omega;
  data.partition = build_partition(5.302, 5.680, 6);
  data.convention = WaveConvention::Minus;
  for (int i = 0; i <= 6; ++i) {
    const double k = data.partition.node(i);
    data.g.push_back(BoundaryField::from_function(
        omega, [&](double, double, double z) { return std::polar(1.0, -k * z); }));
  }
  TargetFootprint fp;
  fp.grid = Grid2D({omega.origin[0], omega.origin[1]}, {omega.spacing[0], omega.spacing[1]},
                   {omega.counts[0], omega.counts[1]}, omega.origin[2]);
  fp.z_star = omega.origin[2];
  fp.mask.assign(fp.grid.size(), 0);
  for (int j = 0; j < fp.grid.counts[1]; ++j)
    for (int i = 0; i < fp.grid.counts[0]; ++i) {
      auto p = fp.grid.node(i, j);
      fp.mask[fp.grid.index(i, j)] = p[0] * p[0] + p[1] * p[1] < 1.44 ? 1 : 0;
    }
  const auto res = run_inversion(data, fp, InversionConfig{});
  char detail[160];
  std::snprintf(detail, sizeof(detail), "max c %.6f (tol 1e-3 around 1), stopped at sweep %d (%s)",
                res.reported_max, res.sweeps_done, res.converged ? "outer rule" : "cap");
  t.line(6, "background fixed point",
         res.converged && res.sweeps_done == 2 && std::abs(res.reported_max - 1.0) < 1e-3,
         detail);
}

// ---------------------------------------------------------------- 7
void end_to_end(Tally& t) {
  struct Case {
    const char* preset;
    double c_true;
  };
  const Case cases[] = {{"object6", 4.80}, {"object2", 5.45}, {"object5", 7.58}};
  for (int ci = 0; ci < 3; ++ci) {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.noise_level = 0.05;
    cfg.seed = 100 + ci;
    Phantom ph = phantom_preset(cases[ci].preset);

    const auto ds = synthesize_dataset(cfg, ph);
    const auto bundle = preprocess_pipeline(cfg, ds.target, ds.reference);
    if (!bundle) {
      t.line(7, std::string("reconstruction ") + cases[ci].preset, false, "no stable interval");
      continue;
    }
    const auto res = run_inversion(bundle->completed, bundle->footprint, inversion_config(cfg));
    const double rel = std::abs(res.reported_max - cases[ci].c_true) / cases[ci].c_true;

    // localization: 50% isovalue support centroid vs the true center
    std::array<double, 3> lo{}, hi{};
    const bool has_iso = io::isosurface_bounds(res.c, 0.5 * res.reported_max, lo, hi);
    const auto truth_center = ph.bounding_center();
    double dist = 1e9;
    if (has_iso) {
      dist = 0.0;
      for (int a = 0; a < 3; ++a) {
        const double c = 0.5 * (lo[a] + hi[a]);
        dist += (c - truth_center[a]) * (c - truth_center[a]);
      }
      dist = std::sqrt(dist);
    }
    const double wavelength = 2.0 * kPi / bundle->interval.k_optimal;
    const double secs = seconds_since(t0);
    char detail[200];
    std::snprintf(detail, sizeof(detail),
                  "c %.3f vs %.2f: err %.2f%% (tol 10%%), center off %.2f (tol %.2f), %.0f s",
                  res.reported_max, cases[ci].c_true, 100.0 * rel, dist, wavelength, secs);
    t.line(7, std::string("reconstruction ") + cases[ci].preset,
           rel <= 0.10 && dist <= wavelength && secs < 900.0, detail);
  }
}

// ---------------------------------------------------------------- 8
void stopping_rules(Tally& t) {
  StoppingConfig cfg;
  bool ok = true;
  {
    StoppingState s;
    s.add_inner(1, 2, 5e-7);
    ok = ok && s.inner_should_stop(1, 2, cfg);
  }
  {
    StoppingState s;
    s.add_inner(1, 2, 1e-3);
    ok = ok && !s.inner_should_stop(1, 2, cfg) && s.inner_should_stop(1, 3, cfg);
  }
  {
    StoppingState s;
    s.add_inner(1, 2, 4e-4);
    s.add_inner(1, 3, 5e-4);
    s.add_bridge(2, 2e-4);
    s.add_inner(2, 2, 9e-1);
    ok = ok && s.outer_window(2, cfg) == 0;
  }
  {
    StoppingState s;
    s.add_inner(1, 2, 6e-4);
    s.add_bridge(2, 4e-4);
    s.add_inner(2, 2, 4e-4);
    ok = ok && s.outer_window(2, cfg) == -1;
    s.add_inner(2, 3, 4e-4);
    ok = ok && s.outer_window(2, cfg) == 1;
  }
  t.line(8, "stopping rules", ok, ok ? "inner tol, inner cap, outer run all exact" : "mismatch");
}

// ---------------------------------------------------------------- 9
void preprocessing_fixture(Tally& t) {
  // Stored peak-vs-frequency curve shaped like the measured one: steady on
  // [2.53, 2.71] GHz, erratic elsewhere.
  const int first_run = 16, last_run = 22;
  const double run_values[7] = {1.00, 1.05, 1.10, 1.12, 1.08, 1.02, 0.98};
  Grid2D g = Grid2D::spanning({-2, -2}, {2, 2}, {5, 5}, -0.8);
  MultiFrequencyData d;
  for (int j = 0; j <= 38; ++j) {
    const double f = 2.05 + 0.03 * j;
    d.frequencies_ghz.push_back(f);
    PlaneData p(g, ghz_to_k(f));
    if (j >= first_run && j <= last_run)
      p.at(2, 2) = run_values[j - first_run];
    else
      p.at(j % 2 == 0 ? 0 : 4, j % 2 == 0 ? 0 : 4) = j % 2 == 0 ? 1.7 : 1.0;
    d.planes.push_back(std::move(p));
  }
  const auto si = select_stable_interval(d);
  const bool ok = si.has_value() && si->length() == 7 &&
                  std::abs(d.frequencies_ghz[si->first] - 2.53) < 1e-9 &&
                  std::abs(d.frequencies_ghz[si->last] - 2.71) < 1e-9 &&
                  std::abs(si->optimal_frequency_ghz - 2.62) < 1e-9;
  char detail[160];
  if (si)
    std::snprintf(detail, sizeof(detail), "run [%.2f, %.2f] GHz, optimal %.2f GHz",
                  d.frequencies_ghz[si->first], d.frequencies_ghz[si->last],
                  si->optimal_frequency_ghz);
  else
    std::snprintf(detail, sizeof(detail), "no stable interval found");
  t.line(9, "stable-interval fixture", ok, detail);
}

// ---------------------------------------------------------------- 10
void determinism(Tally& t) {
  const fs::path root = fs::temp_directory_path() / "burim_acceptance_det";
  fs::remove_all(root);
  RunConfig cfg;
  cfg.meas_counts = 27;
  cfg.sim_counts = 16;
  cfg.omega_counts = 13;
  cfg.noise_level = 0.05;
  cfg.seed = 7;
  Phantom ph = phantom_preset("object6");

  bool ok = true;
  std::string why = "byte-identical artifacts across reruns";
  for (const char* tag : {"a", "b"}) {
    const fs::path dir = root / tag;
    if (cmd::simulate(cfg, ph, dir / "sim") != cmd::kOk ||
        cmd::preprocess(dir / "sim" / "dataset_target.mfd",
                        dir / "sim" / "dataset_reference.mfd", cfg, dir / "pre") != cmd::kOk ||
        cmd::invert(dir / "pre", cfg, dir / "inv", dir / "sim" / "truth.bvol") != cmd::kOk ||
        cmd::report(dir / "inv" / "result.bvol", dir / "rep", dir / "sim" / "truth.bvol",
                    dir / "pre") != cmd::kOk) {
      ok = false;
      why = "pipeline stage failed";
      break;
    }
  }
  if (ok) {
    const char* files[] = {"sim/dataset_target.mfd", "sim/dataset_reference.mfd",
                           "sim/truth.bvol",         "pre/boundary.bcbd",
                           "pre/footprint.bfpt",     "pre/propagated.mfd",
                           "pre/interval.json",      "inv/result.bvol",
                           "inv/diagnostics.jsonl",  "inv/summary.json",
                           "rep/isosurface.obj",     "rep/metrics.json"};
    for (const char* f : files)
      if (file_bytes(root / "a" / f) != file_bytes(root / "b" / f)) {
        ok = false;
        why = std::string("mismatch in ") + f;
        break;
      }
  }
  t.line(10, "seeded pipeline determinism", ok, why);
}

}  // namespace

int main() {
  Tally t;
  sphere_oracle(t);
  born_consistency(t);
  theorem_check(t);
  propagation_properties(t);
  bvp_convergence(t);
  background_fixed_point(t);
  end_to_end(t);
  stopping_rules(t);
  preprocessing_fixture(t);
  determinism(t);
  std::printf("%s (%d failure%s)\n", t.failures == 0 ? "ACCEPTANCE PASSED" : "ACCEPTANCE FAILED",
              t.failures, t.failures == 1 ? "" : "s");
  return t.failures == 0 ? 0 : 1;
}
