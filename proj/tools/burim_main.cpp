// Command line front end: phantom simulation, data preprocessing, the
// multi-frequency sweep inversion, report generation, and the standalone
// spectral-identity check for the propagation operator.
//
// Exit codes: 0 success, 2 validation error, 3 numerical non-convergence,
// 4 no stable frequency interval.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "burim/commands.hpp"
#include "burim/forward.hpp"
#include "burim/io.hpp"

namespace {

burim::Phantom parse_phantom(const std::string& preset,
                             const std::vector<std::vector<double>>& balls,
                             const std::vector<std::vector<double>>& boxes, double noise) {
  burim::Phantom ph = burim::phantom_preset(preset);
  for (const auto& b : balls) {
    if (b.size() != 5)
      throw std::invalid_argument("--ball needs cx cy cz radius dielectric");
    ph.inclusions.push_back({burim::Inclusion::Shape::Ball, {b[0], b[1], b[2]}, {b[3], b[3], b[3]},
                             b[4]});
  }
  for (const auto& b : boxes) {
    if (b.size() != 7)
      throw std::invalid_argument("--box needs cx cy cz hx hy hz dielectric");
    ph.inclusions.push_back({burim::Inclusion::Shape::Box, {b[0], b[1], b[2]}, {b[3], b[4], b[5]},
                             b[6]});
  }
  ph.noise_level = noise;
  return ph;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"burim: multi-frequency backscatter imaging of buried dielectric targets"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--set", overrides, "override a config key, e.g. --set seed=7")->take_all();

  auto load_config = [&]() {
    burim::RunConfig cfg;
    if (!config_path.empty())
      cfg = burim::RunConfig::from_text(burim::io::read_text_file(config_path));
    for (const auto& kv : overrides) {
      auto eq = kv.find('=');
      if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value");
      cfg.apply(kv.substr(0, eq), kv.substr(eq + 1));
    }
    cfg.validate();
    return cfg;
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "synthesize target and reference datasets");
  std::string preset = "object6";
  std::string sim_out = "run/sim";
  double noise = -1.0;
  std::vector<std::vector<double>> balls, boxes;
  sim->add_option("--preset", preset, "phantom preset (empty, object1..object6)");
  sim->add_option("--out", sim_out, "output directory");
  sim->add_option("--noise", noise, "override the config noise level");
  sim->add_option("--ball", balls, "extra ball: cx cy cz radius dielectric")
      ->expected(-1)
      ->take_all();
  sim->add_option("--box", boxes, "extra box: cx cy cz hx hy hz dielectric")
      ->expected(-1)
      ->take_all();

  // preprocess
  auto* pre = app.add_subcommand("preprocess", "subtract, propagate, select, truncate, complete");
  std::string pre_target, pre_reference, pre_out = "run/pre";
  pre->add_option("--target", pre_target, "target-scene dataset (.mfd)")->required();
  pre->add_option("--reference", pre_reference, "reference-scene dataset (.mfd)")->required();
  pre->add_option("--out", pre_out, "output directory");

  // invert
  auto* inv = app.add_subcommand("invert", "run the wavenumber-sweep inversion on a bundle");
  std::string inv_bundle, inv_out = "run/inv", inv_truth;
  inv->add_option("--bundle", inv_bundle, "preprocess output directory")->required();
  inv->add_option("--out", inv_out, "output directory");
  inv->add_option("--truth", inv_truth, "ground-truth volume (.bvol) for error reporting");

  // report
  auto* rep = app.add_subcommand("report", "slices, isosurface and curve exports");
  std::string rep_result, rep_out = "run/report", rep_truth, rep_bundle;
  rep->add_option("--result", rep_result, "result volume (.bvol)")->required();
  rep->add_option("--out", rep_out, "output directory");
  rep->add_option("--truth", rep_truth, "ground-truth volume (.bvol)");
  rep->add_option("--bundle", rep_bundle, "preprocess output directory for curve exports");

  // verify-theorem
  auto* ver = app.add_subcommand("verify-theorem",
                                 "check the angular-spectrum identity of the half-space field");
  burim::cmd::TheoremParams tp;
  ver->add_option("--counts", tp.counts, "base plane resolution");
  ver->add_option("--window", tp.window_half, "half-size of the trace window");
  ver->add_option("--x3", tp.x3, "evaluation plane height (negative)");
  ver->add_option("--k", tp.k, "wavenumber");
  ver->add_option("--sigma", tp.sigma, "Gaussian trace width");
  ver->add_option("--tolerance", tp.tolerance, "relative L2 tolerance");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      burim::RunConfig cfg = load_config();
      if (noise >= 0.0) cfg.noise_level = noise;
      burim::Phantom ph = parse_phantom(preset, balls, boxes, cfg.noise_level);
      return burim::cmd::simulate(cfg, ph, sim_out);
    }
    if (*pre) return burim::cmd::preprocess(pre_target, pre_reference, load_config(), pre_out);
    if (*inv) {
      std::optional<std::filesystem::path> truth;
      if (!inv_truth.empty()) truth = inv_truth;
      return burim::cmd::invert(inv_bundle, load_config(), inv_out, truth);
    }
    if (*rep) {
      std::optional<std::filesystem::path> truth, bundle;
      if (!rep_truth.empty()) truth = rep_truth;
      if (!rep_bundle.empty()) bundle = rep_bundle;
      return burim::cmd::report(rep_result, rep_out, truth, bundle);
    }
    if (*ver) return burim::cmd::verify_theorem(tp);
  } catch (const burim::SolverError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return burim::cmd::kNumerical;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid input: %s\n", e.what());
    return burim::cmd::kValidation;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return burim::cmd::kValidation;
  }
  return burim::cmd::kOk;
}
