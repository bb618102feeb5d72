#include "burim/krylov.hpp"

#include <cmath>
#include <stdexcept>

namespace burim {

namespace {

using cvec = std::vector<std::complex<double>>;

std::complex<double> dot(const cvec& a, const cvec& b) {
  std::complex<double> s(0.0, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm(const cvec& a) { return std::sqrt(std::abs(dot(a, a))); }

void axpy(std::complex<double> alpha, const cvec& x, cvec& y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace

KrylovResult gmres(const LinearOperator& apply, const cvec& b, cvec& x, double rel_tol,
                   int max_iterations, int restart) {
  const std::size_t n = b.size();
  if (x.size() != n) throw std::invalid_argument("gmres: size mismatch");
  if (restart < 1) restart = 1;

  const double bnorm = norm(b);
  if (bnorm == 0.0) {
    x.assign(n, {0.0, 0.0});
    return {0, 0.0, true};
  }

  cvec r(n), w(n);
  int total_iters = 0;

  while (true) {
    apply(x, r);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
    double beta = norm(r);
    if (beta / bnorm <= rel_tol) return {total_iters, beta / bnorm, true};
    if (total_iters >= max_iterations) return {total_iters, beta / bnorm, false};

    const int m = restart;
    std::vector<cvec> V;
    V.reserve(m + 1);
    V.push_back(r);
    for (auto& z : V[0]) z /= beta;

    // Hessenberg columns after Givens rotations, and the rotated rhs g.
    std::vector<std::vector<std::complex<double>>> H;
    std::vector<std::complex<double>> cs(m), sn(m), g(m + 1, {0.0, 0.0});
    g[0] = beta;

    for (int k = 0; k < m; ++k) {
      apply(V[k], w);
      std::vector<std::complex<double>> h(k + 2);
      for (int i = 0; i <= k; ++i) {
        h[i] = dot(V[i], w);
        axpy(-h[i], V[i], w);
      }
      const double hsub = norm(w);  // subdiagonal before rotations
      h[k + 1] = hsub;

      for (int i = 0; i < k; ++i) {
        auto t = std::conj(cs[i]) * h[i] + std::conj(sn[i]) * h[i + 1];
        h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
        h[i] = t;
      }
      double denom = std::sqrt(std::norm(h[k]) + std::norm(h[k + 1]));
      if (denom == 0.0) {
        cs[k] = 1.0;
        sn[k] = 0.0;
      } else {
        cs[k] = h[k] / denom;
        sn[k] = h[k + 1] / denom;
      }
      h[k] = std::conj(cs[k]) * h[k] + std::conj(sn[k]) * h[k + 1];
      h[k + 1] = 0.0;
      g[k + 1] = -sn[k] * g[k];
      g[k] = std::conj(cs[k]) * g[k];
      H.push_back(std::move(h));
      ++total_iters;

      const double res = std::abs(g[k + 1]) / bnorm;
      const bool done = res <= rel_tol || hsub == 0.0 || k + 1 == m || total_iters >= max_iterations;
      if (!done) {
        cvec v = w;
        for (auto& z : v) z /= hsub;
        V.push_back(std::move(v));
        continue;
      }

      std::vector<std::complex<double>> y(k + 1);
      for (int i = k; i >= 0; --i) {
        std::complex<double> s = g[i];
        for (int j = i + 1; j <= k; ++j) s -= H[j][i] * y[j];
        y[i] = s / H[i][i];
      }
      for (int i = 0; i <= k; ++i) axpy(y[i], V[i], x);
      break;
    }
    // Outer loop recomputes the true residual, then stops or restarts.
  }
}

}  // namespace burim
