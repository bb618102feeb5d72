#include "burim/config.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace burim {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double to_double(const std::string& s) {
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("config: bad number '" + s + "'");
  return v;
}

int to_int(const std::string& s) {
  std::size_t pos = 0;
  int v = std::stoi(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("config: bad integer '" + s + "'");
  return v;
}

}  // namespace

void RunConfig::validate() const {
  auto in01 = [](double v) { return v > 0.0 && v <= 1.0; };
  if (!in01(truncation_fraction))
    throw std::invalid_argument("config: truncation_fraction must lie in (0,1]");
  if (!in01(footprint_threshold))
    throw std::invalid_argument("config: footprint_threshold must lie in (0,1]");
  if (!(stability_delta > 0.0 && stability_delta <= 1.0))
    throw std::invalid_argument("config: stability_delta must lie in (0,1]");
  if (stability_loc_radius < 0) throw std::invalid_argument("config: negative stability radius");
  if (meas_counts < 2 || sim_counts < 4 || omega_counts < 4)
    throw std::invalid_argument("config: grid counts too small");
  if (!(freq_lo > 0.0 && freq_lo < freq_hi && freq_step > 0.0))
    throw std::invalid_argument("config: bad frequency sweep");
  if (noise_level < 0.0) throw std::invalid_argument("config: negative noise level");
  if (partition_n < 0) throw std::invalid_argument("config: negative partition size");
  ls.validate();
}

std::string RunConfig::to_text() const {
  std::ostringstream os;
  os << "meas_half=" << fmt(meas_half) << "\n";
  os << "meas_counts=" << meas_counts << "\n";
  os << "meas_z=" << fmt(meas_z) << "\n";
  os << "sim_half_xy=" << fmt(sim_half_xy) << "\n";
  os << "sim_z_lo=" << fmt(sim_z_lo) << "\n";
  os << "sim_z_hi=" << fmt(sim_z_hi) << "\n";
  os << "sim_counts=" << sim_counts << "\n";
  os << "freq_lo=" << fmt(freq_lo) << "\n";
  os << "freq_hi=" << fmt(freq_hi) << "\n";
  os << "freq_step=" << fmt(freq_step) << "\n";
  os << "pad_factor=" << fmt(pad_factor) << "\n";
  os << "stability_delta=" << fmt(stability_delta) << "\n";
  os << "stability_loc_radius=" << stability_loc_radius << "\n";
  os << "truncation_fraction=" << fmt(truncation_fraction) << "\n";
  os << "footprint_threshold=" << fmt(footprint_threshold) << "\n";
  os << "smooth_sigma=" << fmt(smooth_sigma) << "\n";
  os << "z_scan_lo=" << fmt(z_scan_lo) << "\n";
  os << "z_scan_hi=" << fmt(z_scan_hi) << "\n";
  os << "z_scan_step=" << fmt(z_scan_step) << "\n";
  os << "propagate_hint_z=" << fmt(propagate_hint_z) << "\n";
  os << "omega_half_xy=" << fmt(omega_half_xy) << "\n";
  os << "omega_z_extent=" << fmt(omega_z_extent) << "\n";
  os << "omega_counts=" << omega_counts << "\n";
  os << "search_z_hi=" << fmt(search_z_hi) << "\n";
  os << "partition_n=" << partition_n << "\n";
  os << "ls_tolerance=" << fmt(ls.krylov_tolerance) << "\n";
  os << "ls_max_iterations=" << ls.max_iterations << "\n";
  os << "ls_padding_factor=" << fmt(ls.padding_factor) << "\n";
  os << "ls_restart=" << ls.restart << "\n";
  os << "inner_tol=" << fmt(stopping.inner_tol) << "\n";
  os << "inner_cap=" << stopping.inner_cap << "\n";
  os << "outer_tol=" << fmt(stopping.outer_tol) << "\n";
  os << "outer_run=" << stopping.outer_run << "\n";
  os << "outer_cap=" << stopping.outer_cap << "\n";
  os << "bvp_tol=" << fmt(bvp_tol) << "\n";
  os << "tail_guard_rel=" << fmt(tail_guard_rel) << "\n";
  os << "c_max=" << fmt(c_max) << "\n";
  os << "noise_level=" << fmt(noise_level) << "\n";
  os << "seed=" << seed << "\n";
  os << "convention=" << to_string(convention) << "\n";
  return os.str();
}

void RunConfig::apply(const std::string& key, const std::string& value) {
  if (key == "meas_half") meas_half = to_double(value);
  else if (key == "meas_counts") meas_counts = to_int(value);
  else if (key == "meas_z") meas_z = to_double(value);
  else if (key == "sim_half_xy") sim_half_xy = to_double(value);
  else if (key == "sim_z_lo") sim_z_lo = to_double(value);
  else if (key == "sim_z_hi") sim_z_hi = to_double(value);
  else if (key == "sim_counts") sim_counts = to_int(value);
  else if (key == "freq_lo") freq_lo = to_double(value);
  else if (key == "freq_hi") freq_hi = to_double(value);
  else if (key == "freq_step") freq_step = to_double(value);
  else if (key == "pad_factor") pad_factor = to_double(value);
  else if (key == "stability_delta") stability_delta = to_double(value);
  else if (key == "stability_loc_radius") stability_loc_radius = to_int(value);
  else if (key == "truncation_fraction") truncation_fraction = to_double(value);
  else if (key == "footprint_threshold") footprint_threshold = to_double(value);
  else if (key == "smooth_sigma") smooth_sigma = to_double(value);
  else if (key == "z_scan_lo") z_scan_lo = to_double(value);
  else if (key == "z_scan_hi") z_scan_hi = to_double(value);
  else if (key == "z_scan_step") z_scan_step = to_double(value);
  else if (key == "propagate_hint_z") propagate_hint_z = to_double(value);
  else if (key == "omega_half_xy") omega_half_xy = to_double(value);
  else if (key == "omega_z_extent") omega_z_extent = to_double(value);
  else if (key == "omega_counts") omega_counts = to_int(value);
  else if (key == "search_z_hi") search_z_hi = to_double(value);
  else if (key == "partition_n") partition_n = to_int(value);
  else if (key == "ls_tolerance") ls.krylov_tolerance = to_double(value);
  else if (key == "ls_max_iterations") ls.max_iterations = to_int(value);
  else if (key == "ls_padding_factor") ls.padding_factor = to_double(value);
  else if (key == "ls_restart") ls.restart = to_int(value);
  else if (key == "inner_tol") stopping.inner_tol = to_double(value);
  else if (key == "inner_cap") stopping.inner_cap = to_int(value);
  else if (key == "outer_tol") stopping.outer_tol = to_double(value);
  else if (key == "outer_run") stopping.outer_run = to_int(value);
  else if (key == "outer_cap") stopping.outer_cap = to_int(value);
  else if (key == "bvp_tol") bvp_tol = to_double(value);
  else if (key == "tail_guard_rel") tail_guard_rel = to_double(value);
  else if (key == "c_max") c_max = to_double(value);
  else if (key == "noise_level") noise_level = to_double(value);
  else if (key == "seed") seed = std::stoull(value);
  else if (key == "convention") convention = convention_from_string(value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(lineno) + " is not key=value");
    cfg.apply(line.substr(0, eq), line.substr(eq + 1));
  }
  cfg.validate();
  return cfg;
}

}  // namespace burim
