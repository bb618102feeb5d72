#include "support/oracles.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace burim::oracle {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

double sph_j(int n, double x) { return std::sph_bessel(unsigned(n), x); }
double sph_y(int n, double x) { return std::sph_neumann(unsigned(n), x); }
cplx sph_h1(int n, double x) { return {sph_j(n, x), sph_y(n, x)}; }

// f_n'(x) = (n/x) f_n(x) - f_{n+1}(x)
double sph_j_prime(int n, double x) { return (n / x) * sph_j(n, x) - sph_j(n + 1, x); }
cplx sph_h1_prime(int n, double x) { return (double(n) / x) * sph_h1(n, x) - sph_h1(n + 1, x); }

}  // namespace

SphereSeries::SphereSeries(double k_, double radius_, double eps_, int n_terms_)
    : k(k_), radius(radius_), eps(eps_), n_terms(n_terms_) {
  if (!(k > 0.0 && radius > 0.0 && eps >= 1.0))
    throw std::invalid_argument("SphereSeries: bad parameters");
  const double k1 = k * std::sqrt(eps);
  const double ka = k * radius, k1a = k1 * radius;
  scatter_coef_.resize(n_terms);
  interior_coef_.resize(n_terms);
  for (int n = 0; n < n_terms; ++n) {
    const double j = sph_j(n, ka), jp = sph_j_prime(n, ka);
    const double J = sph_j(n, k1a), Jp = sph_j_prime(n, k1a);
    const cplx h = sph_h1(n, ka), hp = sph_h1_prime(n, ka);
    const cplx d = k * J * hp - k1 * Jp * h;
    scatter_coef_[n] = (k1 * j * Jp - k * J * jp) / d;
    // Wronskian j h' - j' h = i/x^2 collapses the second identity.
    interior_coef_[n] = kI / (k * radius * radius * d);
  }
}

cplx SphereSeries::total_field(double x, double y, double z) const {
  const double r = std::sqrt(x * x + y * y + z * z);
  const double ct = r > 1e-14 ? z / r : 1.0;
  const double k1 = k * std::sqrt(eps);

  cplx sum(0.0, 0.0);
  double p_prev = 1.0, p_cur = ct;  // P_0, P_1
  cplx i_pow(1.0, 0.0);
  for (int n = 0; n < n_terms; ++n) {
    const double pn = n == 0 ? 1.0 : (n == 1 ? ct : p_cur);
    cplx radial;
    if (r >= radius)
      radial = scatter_coef_[n] * sph_h1(n, k * r);
    else
      radial = interior_coef_[n] * cplx(sph_j(n, k1 * r), 0.0);
    sum += i_pow * double(2 * n + 1) * radial * pn;

    if (n >= 1) {
      const double p_next = ((2 * n + 1) * ct * p_cur - n * p_prev) / double(n + 1);
      p_prev = p_cur;
      p_cur = p_next;
    }
    i_pow *= kI;
  }
  if (r >= radius) return std::polar(1.0, k * z) + sum;
  return sum;
}

ComplexVolume born_field(const Coefficient& c, double k) {
  const Grid3D& g = c.grid;
  const double cell = g.spacing[0] * g.spacing[1] * g.spacing[2];
  const double r_eq = std::cbrt(3.0 * cell / (4.0 * kPi));

  // self-cell: k^2 beta u_inc * integral of the kernel over an equal-volume ball
  const cplx self = -(1.0 + std::polar(1.0, k * r_eq) * cplx(-1.0, k * r_eq));

  ComplexVolume out(g);
  std::vector<std::array<double, 4>> nodes;  // x, y, z, beta
  nodes.reserve(g.size());
  for (int l = 0; l < g.counts[2]; ++l)
    for (int j = 0; j < g.counts[1]; ++j)
      for (int i = 0; i < g.counts[0]; ++i) {
        auto p = g.node(i, j, l);
        nodes.push_back({p[0], p[1], p[2], c.at(i, j, l) - 1.0});
      }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
  for (std::size_t q = 0; q < nodes.size(); ++q) {
    const auto& t = nodes[q];
    cplx acc(0.0, 0.0);
    for (const auto& s : nodes) {
      if (s[3] == 0.0) continue;
      const double dx = t[0] - s[0], dy = t[1] - s[1], dz = t[2] - s[2];
      const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
      const cplx uinc = std::polar(1.0, k * s[2]);
      if (r < 1e-14) {
        acc += s[3] * uinc * self / (k * k * cell);
      } else {
        acc += std::polar(1.0, k * r) / (4.0 * kPi * r) * s[3] * uinc;
      }
    }
    out.values[q] = std::polar(1.0, k * t[2]) + k * k * cell * acc;
  }
  return out;
}

cplx kernel_symbol_quadrature(double k, double sign, double s, double r_flat, double r_cut,
                              int panels) {
  auto chi = [&](double r) {
    if (r <= r_flat) return 1.0;
    if (r >= r_cut) return 0.0;
    return 0.5 * (1.0 + std::cos(kPi * (r - r_flat) / (r_cut - r_flat)));
  };
  auto f = [&](double r) -> cplx {
    const cplx e = std::polar(1.0, sign * k * r);
    if (s < 1e-12) return chi(r) * e * r;
    return chi(r) * e * std::sin(s * r);
  };
  // composite Simpson on [0, r_cut]
  const int n = panels * 2;
  const double h = r_cut / n;
  cplx acc = f(0.0) + f(r_cut);
  for (int i = 1; i < n; ++i) acc += f(i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  acc *= h / 3.0;
  if (s < 1e-12) return acc;
  return acc / s;
}

double rel_l2(const std::vector<cplx>& got, const std::vector<cplx>& ref) {
  if (got.size() != ref.size()) throw std::invalid_argument("rel_l2: size mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - ref[i]);
    den += std::norm(ref[i]);
  }
  return std::sqrt(num / den);
}

}  // namespace burim::oracle
