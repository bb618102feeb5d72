#include "burim/forward.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>
#include <vector>

#include "burim/fft.hpp"
#include "burim/krylov.hpp"

namespace burim {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double sinc(double x) {
  if (std::abs(x) < 1e-8) return 1.0 - x * x / 6.0;
  return std::sin(x) / x;
}

// ∫_a^b exp(i mu r) dr, stable for all real mu.
cplx exp_integral(double mu, double a, double b) {
  const double half = 0.5 * mu * (b - a);
  return (b - a) * std::polar(1.0, 0.5 * mu * (a + b)) * sinc(half);
}

// ∫_a^b r exp(i mu r) dr.
cplx r_exp_integral(double mu, double a, double b) {
  if (std::abs(mu) * std::max(std::abs(a), std::abs(b)) < 1e-5) {
    auto p = [](double x, int n) { return std::pow(x, n); };
    return cplx((p(b, 2) - p(a, 2)) / 2.0 - mu * mu * (p(b, 4) - p(a, 4)) / 8.0,
                mu * (p(b, 3) - p(a, 3)) / 3.0 - mu * mu * mu * (p(b, 5) - p(a, 5)) / 30.0);
  }
  const cplx imu = kI * mu;
  const cplx eb = std::polar(1.0, mu * b), ea = std::polar(1.0, mu * a);
  return (b * eb - a * ea) / imu - exp_integral(mu, a, b) / imu;
}

// ∫_0^{r_cut} chi(r) exp(i k r) dr with the raised-cosine taper.
cplx taper_integral(double k, double r_flat, double r_cut) {
  const double omega = kPi / (r_cut - r_flat);
  cplx t = exp_integral(k, 0.0, r_flat);
  t += 0.5 * exp_integral(k, r_flat, r_cut);
  t += 0.25 * std::polar(1.0, -omega * r_flat) * exp_integral(k + omega, r_flat, r_cut);
  t += 0.25 * std::polar(1.0, omega * r_flat) * exp_integral(k - omega, r_flat, r_cut);
  return t;
}

cplx taper_r_integral(double k, double r_flat, double r_cut) {
  const double omega = kPi / (r_cut - r_flat);
  cplx t = r_exp_integral(k, 0.0, r_flat);
  t += 0.5 * r_exp_integral(k, r_flat, r_cut);
  t += 0.25 * std::polar(1.0, -omega * r_flat) * r_exp_integral(k + omega, r_flat, r_cut);
  t += 0.25 * std::polar(1.0, omega * r_flat) * r_exp_integral(k - omega, r_flat, r_cut);
  return t;
}

struct SymbolKey {
  double k, sign;
  int m0, m1, m2;
  double h0, h1, h2;
  bool operator<(const SymbolKey& o) const {
    return std::tie(k, sign, m0, m1, m2, h0, h1, h2) <
           std::tie(o.k, o.sign, o.m0, o.m1, o.m2, o.h0, o.h1, o.h2);
  }
};

std::mutex g_symbol_mutex;
std::map<SymbolKey, std::shared_ptr<const std::vector<cplx>>>& symbol_cache() {
  static std::map<SymbolKey, std::shared_ptr<const std::vector<cplx>>> cache;
  return cache;
}

double wrapped_freq(int idx, int m, double length) {
  int s = idx <= m / 2 ? idx : idx - m;
  return 2.0 * kPi * s / length;
}

// Kernel symbol on the padded lattice, cached per (k, dims, spacing).
std::shared_ptr<const std::vector<cplx>> kernel_symbol(double k, double sign,
                                                       const std::array<int, 3>& m,
                                                       const std::array<double, 3>& h) {
  SymbolKey key{k, sign, m[0], m[1], m[2], h[0], h[1], h[2]};
  {
    std::lock_guard<std::mutex> lock(g_symbol_mutex);
    auto it = symbol_cache().find(key);
    if (it != symbol_cache().end()) return it->second;
  }

  const double r_cut = 0.5 * std::min({m[0] * h[0], m[1] * h[1], m[2] * h[2]});
  const double r_flat = 0.75 * r_cut;
  const std::size_t total = std::size_t(m[0]) * m[1] * m[2];
  auto sym = std::make_shared<std::vector<cplx>>(total);

  const double l0 = m[0] * h[0], l1 = m[1] * h[1], l2 = m[2] * h[2];
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int c = 0; c < m[2]; ++c) {
    const double v2 = wrapped_freq(c, m[2], l2);
    for (int b = 0; b < m[1]; ++b) {
      const double v1 = wrapped_freq(b, m[1], l1);
      for (int a = 0; a < m[0]; ++a) {
        const double v0 = wrapped_freq(a, m[0], l0);
        const double s = std::sqrt(v0 * v0 + v1 * v1 + v2 * v2);
        (*sym)[std::size_t(a) + std::size_t(m[0]) * (std::size_t(b) + std::size_t(m[1]) * c)] =
            truncated_kernel_symbol(k, sign, s, r_flat, r_cut);
      }
    }
  }

  std::lock_guard<std::mutex> lock(g_symbol_mutex);
  auto [it, inserted] = symbol_cache().emplace(key, sym);
  return it->second;
}

// Diameter bound of the meaningful contrast: bbox diagonal tightened by
// twice the largest distance from the bbox center (exact for symmetric
// supports). A relative threshold keeps far tails of smooth coefficients
// from inflating the estimate. Empty when beta = 0.
struct BetaSupport {
  IndexBox3 box;
  double diameter;
};

std::optional<BetaSupport> beta_support(const Coefficient& c) {
  double max_beta = 0.0;
  for (double v : c.values) max_beta = std::max(max_beta, v - 1.0);
  if (max_beta == 0.0) return std::nullopt;
  const double cut = 1e-4 * max_beta;
  const Grid3D& g = c.grid;
  IndexBox3 box{{g.counts[0], g.counts[1], g.counts[2]}, {-1, -1, -1}};
  for (int l = 0; l < g.counts[2]; ++l)
    for (int j = 0; j < g.counts[1]; ++j)
      for (int i = 0; i < g.counts[0]; ++i)
        if (c.at(i, j, l) - 1.0 > cut) {
          box.lo = {std::min(box.lo[0], i), std::min(box.lo[1], j), std::min(box.lo[2], l)};
          box.hi = {std::max(box.hi[0], i), std::max(box.hi[1], j), std::max(box.hi[2], l)};
        }
  double diag = 0.0;
  std::array<double, 3> mid;
  for (int a = 0; a < 3; ++a) {
    const double e = (box.hi[a] - box.lo[a]) * g.spacing[a];
    diag += e * e;
    mid[a] = g.coord(a, box.lo[a]) + 0.5 * e;
  }
  diag = std::sqrt(diag);
  double rmax2 = 0.0;
  for (int l = box.lo[2]; l <= box.hi[2]; ++l)
    for (int j = box.lo[1]; j <= box.hi[1]; ++j)
      for (int i = box.lo[0]; i <= box.hi[0]; ++i) {
        if (c.at(i, j, l) - 1.0 <= cut) continue;
        const auto p = g.node(i, j, l);
        const double d2 = (p[0] - mid[0]) * (p[0] - mid[0]) + (p[1] - mid[1]) * (p[1] - mid[1]) +
                          (p[2] - mid[2]) * (p[2] - mid[2]);
        rmax2 = std::max(rmax2, d2);
      }
  return BetaSupport{box, std::min(diag, 2.0 * std::sqrt(rmax2))};
}

}  // namespace

cplx green_function(double k, double r) {
  if (!(r > 0.0)) throw std::invalid_argument("green_function: r must be positive");
  if (k < 0.0) throw std::invalid_argument("green_function: k must be nonnegative");
  return std::polar(1.0, k * r) / (4.0 * kPi * r);
}

cplx truncated_kernel_symbol(double k, double sign, double s, double r_flat, double r_cut) {
  const double ks = sign * k;
  if (s < 1e-12) return taper_r_integral(ks, r_flat, r_cut);
  const cplx j = (taper_integral(ks + s, r_flat, r_cut) - taper_integral(ks - s, r_flat, r_cut)) /
                 (2.0 * kI);
  return j / s;
}

ComplexVolume incident_field(double k, const Grid3D& grid, WaveConvention conv) {
  if (!(k > 0.0)) throw std::invalid_argument("incident_field: k must be positive");
  const double sign = convention_sign(conv);
  ComplexVolume u(grid);
  for (int l = 0; l < grid.counts[2]; ++l) {
    const cplx phase = std::polar(1.0, sign * k * grid.coord(2, l));
    for (int j = 0; j < grid.counts[1]; ++j)
      for (int i = 0; i < grid.counts[0]; ++i) u.at(i, j, l) = phase;
  }
  return u;
}

PlaneData incident_trace(double k, const Grid2D& plane, WaveConvention conv) {
  if (!(k > 0.0)) throw std::invalid_argument("incident_trace: k must be positive");
  PlaneData p(plane, k);
  const cplx phase = std::polar(1.0, convention_sign(conv) * k * plane.z_level);
  for (auto& v : p.values) v = phase;
  return p;
}

LSResult solve_lippmann_schwinger(const Coefficient& c, double k, WaveConvention conv,
                                  const LSConfig& cfg) {
  cfg.validate();
  c.validate();
  if (!(k > 0.0)) throw std::invalid_argument("solve_lippmann_schwinger: k must be positive");

  const Grid3D& g = c.grid;
  const std::array<int, 3> n = g.counts;
  const double sign = convention_sign(conv);

  ComplexVolume uinc = incident_field(k, g, conv);
  LSResult out;

  auto support = beta_support(c);
  if (!support) {  // homogeneous background: the integral term vanishes
    out.u = std::move(uinc);
    out.residual = 0.0;
    out.iterations = 0;
    out.min_abs_u = 1.0;
    return out;
  }

  std::array<int, 3> m;
  for (int a = 0; a < 3; ++a) m[a] = int(std::ceil(cfg.padding_factor * n[a]));
  const std::array<double, 3> h = g.spacing;

  const double r_cut = 0.5 * std::min({m[0] * h[0], m[1] * h[1], m[2] * h[2]});
  const double r_flat = 0.75 * r_cut;
  if (support->diameter > r_cut)
    throw std::invalid_argument(
        "solve_lippmann_schwinger: scatterer support exceeds the faithful kernel range; "
        "enlarge the grid or the padding factor");
  out.kernel_fidelity_ok = support->diameter <= r_flat;

  auto sym = kernel_symbol(k, sign, m, h);

  std::vector<double> beta(g.size());
  for (std::size_t q = 0; q < beta.size(); ++q) beta[q] = c.values[q] - 1.0;

  const std::size_t pad_total = std::size_t(m[0]) * m[1] * m[2];
  std::vector<cplx> pad(pad_total), hat(pad_total);
  // The symbol is the continuous transform of the kernel, so the spectral
  // product consumes Fourier COEFFICIENTS (DFT / node count); no cell
  // volume enters here.
  const double k2 = k * k;
  const double inv_total = 1.0 / double(pad_total);

  auto apply = [&](const std::vector<cplx>& x, std::vector<cplx>& y) {
    std::fill(pad.begin(), pad.end(), cplx(0.0, 0.0));
    for (int l = 0; l < n[2]; ++l)
      for (int j = 0; j < n[1]; ++j) {
        const std::size_t src = g.index(0, j, l);
        const std::size_t dst = std::size_t(m[0]) * (std::size_t(j) + std::size_t(m[1]) * l);
        for (int i = 0; i < n[0]; ++i) pad[dst + i] = beta[src + i] * x[src + i];
      }
    fft::dft_3d(m[2], m[1], m[0], pad.data(), hat.data(), true);
    for (std::size_t q = 0; q < pad_total; ++q) hat[q] *= (*sym)[q];
    fft::dft_3d(m[2], m[1], m[0], hat.data(), pad.data(), false);
    for (int l = 0; l < n[2]; ++l)
      for (int j = 0; j < n[1]; ++j) {
        const std::size_t dst = g.index(0, j, l);
        const std::size_t src = std::size_t(m[0]) * (std::size_t(j) + std::size_t(m[1]) * l);
        for (int i = 0; i < n[0]; ++i)
          y[dst + i] = x[dst + i] - k2 * inv_total * pad[src + i];
      }
  };

  std::vector<cplx> u = uinc.values;
  KrylovResult kr = gmres(apply, uinc.values, u, cfg.krylov_tolerance, cfg.max_iterations,
                          cfg.restart);
  if (!kr.converged)
    throw SolverError("solve_lippmann_schwinger: no convergence after " +
                          std::to_string(kr.iterations) +
                          " iterations (residual " + std::to_string(kr.residual) + ")",
                      kr.residual);

  out.residual = kr.residual;
  out.iterations = kr.iterations;
  double min_abs = std::abs(u[0]);
  for (const auto& z : u) min_abs = std::min(min_abs, std::abs(z));
  out.min_abs_u = min_abs;
  out.u = ComplexVolume(g, std::move(u));
  return out;
}

PlaneData scattered_on_plane(const ComplexVolume& u, const Coefficient& c, double k,
                             const Grid2D& plane, WaveConvention conv) {
  if (!(u.grid == c.grid))
    throw std::invalid_argument("scattered_on_plane: field and coefficient grids differ");
  const Grid3D& g = u.grid;
  const double z = plane.z_level;
  const double margin = 0.5 * g.spacing[2];
  if (z > g.origin[2] - margin && z < g.max_coord(2) + margin)
    throw std::invalid_argument("scattered_on_plane: plane intersects the support box");

  // Source strengths beta*u, skipping background nodes.
  struct Source {
    double x, y, z;
    cplx w;
  };
  std::vector<Source> src;
  for (int l = 0; l < g.counts[2]; ++l)
    for (int j = 0; j < g.counts[1]; ++j)
      for (int i = 0; i < g.counts[0]; ++i) {
        double b = c.at(i, j, l) - 1.0;
        if (b != 0.0) {
          auto p = g.node(i, j, l);
          src.push_back({p[0], p[1], p[2], b * u.at(i, j, l)});
        }
      }

  const double cell = g.spacing[0] * g.spacing[1] * g.spacing[2];
  const double sign = convention_sign(conv);
  const double k2cell = k * k * cell;
  PlaneData out(plane, k);

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (int j = 0; j < plane.counts[1]; ++j)
    for (int i = 0; i < plane.counts[0]; ++i) {
      auto p = plane.node(i, j);
      cplx acc(0.0, 0.0);
      for (const auto& s : src) {
        const double dx = p[0] - s.x, dy = p[1] - s.y, dz = z - s.z;
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        acc += std::polar(1.0, sign * k * r) / (4.0 * kPi * r) * s.w;
      }
      out.at(i, j) = k2cell * acc;
    }
  return out;
}

}  // namespace burim
