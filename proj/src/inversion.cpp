#include "burim/inversion.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <stdexcept>

namespace burim {

TailField TailField::from_gradient(std::array<ComplexVolume, 3> g) {
  TailField t;
  t.div = fd_divergence(g);
  t.grad = std::move(g);
  return t;
}

QSequence::QSequence(const Grid3D& g, double step) : h(step) {
  q_sum = ComplexVolume(g);
  for (auto& c : grad_sum) c = ComplexVolume(g);
  div_sum = ComplexVolume(g);
}

void QSequence::append(const ComplexVolume& q, const std::array<ComplexVolume, 3>& grad_q) {
  for (std::size_t n = 0; n < q_sum.values.size(); ++n) q_sum.values[n] += h * q.values[n];
  for (int a = 0; a < 3; ++a)
    for (std::size_t n = 0; n < grad_sum[a].values.size(); ++n)
      grad_sum[a].values[n] += h * grad_q[a].values[n];
  div_sum = fd_divergence(grad_sum);
  q_fields.push_back(q);
}

void StoppingState::add_inner(int sweep, int inner, double value) {
  if (value < 0.0) throw std::invalid_argument("StoppingState: errors are nonnegative");
  entries.push_back({sweep, inner, false, value});
}

void StoppingState::add_bridge(int sweep, double value) {
  if (value < 0.0) throw std::invalid_argument("StoppingState: errors are nonnegative");
  entries.push_back({sweep, 1, true, value});
}

std::vector<StoppingState::Entry> StoppingState::pair_sequence(int n) const {
  // e_{n-1,2..}, then the bridge into sweep n, then e_{n,2..}; entries are
  // appended chronologically so a single filtered pass preserves the order.
  std::vector<Entry> seq;
  for (const auto& e : entries)
    if ((e.sweep == n - 1 && !e.bridge) || e.sweep == n) seq.push_back(e);
  return seq;
}

int StoppingState::outer_window(int n, const StoppingConfig& cfg) const {
  const auto seq = pair_sequence(n);
  if (int(seq.size()) < cfg.outer_run) return -1;
  for (int s = 0; s + cfg.outer_run <= int(seq.size()); ++s) {
    bool ok = true;
    for (int t = 0; t < cfg.outer_run; ++t)
      if (!(seq[s + t].value <= cfg.outer_tol)) {
        ok = false;
        break;
      }
    if (ok) return s;
  }
  return -1;
}

bool StoppingState::inner_should_stop(int sweep, int inner, const StoppingConfig& cfg) const {
  if (inner >= cfg.inner_cap) return true;
  if (inner == 2) {
    for (const auto& e : entries)
      if (e.sweep == sweep && !e.bridge && e.inner == 2) return e.value < cfg.inner_tol;
  }
  return false;
}

void CompletedData::validate() const {
  if (int(g.size()) != partition.count + 1)
    throw std::invalid_argument("CompletedData: need one boundary field per partition node");
  for (const auto& bf : g)
    if (!(bf.grid == omega)) throw std::invalid_argument("CompletedData: grid mismatch");
}

BoundaryField boundary_q(const CompletedData& data, int n) {
  data.validate();
  if (n < 0 || n >= data.partition.count)
    throw std::invalid_argument("boundary_q: sweep index must satisfy 0 <= n <= N-1");
  const BoundaryField& gn = data.g[n];
  const BoundaryField& gn1 = data.g[n + 1];
  const double h = data.partition.step();

  BoundaryField out(data.omega);
  for (int f = 0; f < 6; ++f) {
    const auto c = out.face_counts(Face(f));
    for (int b = 0; b < c[1]; ++b)
      for (int a = 0; a < c[0]; ++a) {
        const cplx den = gn.face_at(Face(f), a, b);
        if (std::abs(den) == 0.0)
          throw std::invalid_argument("boundary_q: data vanish on face " + std::to_string(f) +
                                      " at node (" + std::to_string(a) + "," + std::to_string(b) +
                                      ")");
        out.face_at(Face(f), a, b) = (den - gn1.face_at(Face(f), a, b)) / (h * den);
      }
  }
  return out;
}

TailField tail_from_boundary(const Grid3D& omega, const std::array<BoundaryField, 3>& r,
                             double rel_tol) {
  std::array<ComplexVolume, 3> grad;
  for (int a = 0; a < 3; ++a) {
    EllipticResult res = solve_convection_diffusion(1.0, nullptr, nullptr, r[a], rel_tol);
    grad[a] = std::move(res.q);
  }
  return TailField::from_gradient(std::move(grad));
}

namespace {

// In-plane derivative of a face array (second order, one-sided at edges).
std::vector<cplx> face_derivative(const std::vector<cplx>& vals, std::array<int, 2> counts,
                                  int axis, double h) {
  std::vector<cplx> out(vals.size());
  const int na = counts[0], nb = counts[1];
  auto at = [&](int a, int b) { return vals[std::size_t(a) + std::size_t(na) * b]; };
  for (int b = 0; b < nb; ++b)
    for (int a = 0; a < na; ++a) {
      const int t = axis == 0 ? a : b;
      const int n = axis == 0 ? na : nb;
      auto val = [&](int d) {
        return axis == 0 ? at(a + d, b) : at(a, b + d);
      };
      cplx dv;
      if (t > 0 && t < n - 1)
        dv = (val(1) - val(-1)) / (2.0 * h);
      else if (n < 3)
        dv = (t == 0 ? val(1) - val(0) : val(0) - val(-1)) / h;
      else if (t == 0)
        dv = (-3.0 * val(0) + 4.0 * val(1) - val(2)) / (2.0 * h);
      else
        dv = (3.0 * val(0) - 4.0 * val(-1) + val(-2)) / (2.0 * h);
      out[std::size_t(a) + std::size_t(na) * b] = dv;
    }
  return out;
}

}  // namespace

TailField initial_tail(const CompletedData& data, double rel_tol) {
  data.validate();
  const Grid3D& omega = data.omega;
  const double k_top = data.partition.node(0);
  const double sign = convention_sign(data.convention);

  // Trace of V = k_top * q(., k_top) on the boundary.
  BoundaryField q0 = boundary_q(data, 0);
  BoundaryField v_bd = q0;
  for (auto& face : v_bd.faces)
    for (auto& z : face) z *= k_top;

  const cplx rz_incident = cplx(0.0, sign * k_top);
  std::array<BoundaryField, 3> r{BoundaryField(omega), BoundaryField(omega), BoundaryField(omega)};
  for (int f = 0; f < 6; ++f) {
    auto c = r[2].face_counts(Face(f));
    for (int b = 0; b < c[1]; ++b)
      for (int a = 0; a < c[0]; ++a) r[2].face_at(Face(f), a, b) = rz_incident;
  }

  // Tangential components on the measured face from the trace itself.
  const auto zc = r[0].face_counts(Face::ZMin);
  const auto& v_face = v_bd.faces[int(Face::ZMin)];
  auto dx = face_derivative(v_face, zc, 0, omega.spacing[0]);
  auto dy = face_derivative(v_face, zc, 1, omega.spacing[1]);
  for (int b = 0; b < zc[1]; ++b)
    for (int a = 0; a < zc[0]; ++a) {
      r[0].face_at(Face::ZMin, a, b) = dx[std::size_t(a) + std::size_t(zc[0]) * b];
      r[1].face_at(Face::ZMin, a, b) = dy[std::size_t(a) + std::size_t(zc[0]) * b];
    }

  // Normal component on the measured face: one-sided difference against the
  // V-trace on the adjacent ring of the side faces; ring mean fills the
  // interior, where no data exists above.
  const double dz = omega.spacing[2];
  cplx ring_mean(0.0, 0.0);
  int ring_count = 0;
  auto ring_delta = [&](int i, int j) {
    const cplx v_face_val = v_bd.face_at(Face::ZMin, i, j);
    const cplx v_ring_val = v_bd.value_at(i, j, 1);
    return (v_ring_val - v_face_val) / dz;
  };
  for (int j = 0; j < zc[1]; ++j)
    for (int i = 0; i < zc[0]; ++i) {
      if (i == 0 || j == 0 || i == zc[0] - 1 || j == zc[1] - 1) {
        ring_mean += ring_delta(i, j);
        ++ring_count;
      }
    }
  ring_mean /= double(ring_count);
  for (int j = 0; j < zc[1]; ++j)
    for (int i = 0; i < zc[0]; ++i) {
      const bool perimeter = i == 0 || j == 0 || i == zc[0] - 1 || j == zc[1] - 1;
      r[2].face_at(Face::ZMin, i, j) = perimeter ? ring_delta(i, j) : ring_mean;
    }

  return tail_from_boundary(omega, r, rel_tol);
}

EllipticResult solve_q_bvp(const TailField& tail, const QSequence& qseq, double k_n,
                           const BoundaryField& psi, double rel_tol) {
  const Grid3D& g = psi.grid;
  std::array<ComplexVolume, 3> w{ComplexVolume(g), ComplexVolume(g), ComplexVolume(g)};
  ComplexVolume rhs(g);
  for (std::size_t q = 0; q < rhs.values.size(); ++q) {
    cplx w2(0.0, 0.0);
    for (int a = 0; a < 3; ++a) {
      const cplx wa = tail.grad[a].values[q] - qseq.grad_sum[a].values[q];
      w[a].values[q] = k_n * wa;
      w2 += wa * wa;
    }
    rhs.values[q] = tail.div.values[q] - qseq.div_sum.values[q] + w2;
  }
  return solve_convection_diffusion(0.5 * k_n, &w, &rhs, psi, rel_tol);
}

VCUpdate update_v_and_c(const ComplexVolume& q, const QSequence& qseq, const TailField& tail,
                        double k_n) {
  VCUpdate out;
  auto grad_q = fd_gradient(q);
  for (int a = 0; a < 3; ++a) {
    out.grad_v[a] = ComplexVolume(q.grid);
    for (std::size_t n = 0; n < q.values.size(); ++n)
      out.grad_v[a].values[n] =
          -(qseq.h * grad_q[a].values[n] + qseq.grad_sum[a].values[n]) + tail.grad[a].values[n];
  }
  ComplexVolume div_v = fd_divergence(out.grad_v);
  out.c_raw = ComplexVolume(q.grid);
  const double inv_k2 = 1.0 / (k_n * k_n);
  for (std::size_t n = 0; n < q.values.size(); ++n) {
    cplx g2(0.0, 0.0);
    for (int a = 0; a < 3; ++a) g2 += out.grad_v[a].values[n] * out.grad_v[a].values[n];
    out.c_raw.values[n] = -(div_v.values[n] + g2) * inv_k2;
  }
  return out;
}

Coefficient truncate_c(const ComplexVolume& c_raw, const TargetFootprint& footprint, double z_hi,
                       double smooth_sigma, double c_max, bool* clamped) {
  const Grid3D& g = c_raw.grid;
  std::vector<double> vals(g.size(), 1.0);
  bool clamp_hit = false;
  const double z_star = footprint.z_star;
  for (int l = 0; l < g.counts[2]; ++l) {
    const double z = g.coord(2, l);
    const bool z_in = z > z_star && z < z_hi;
    for (int j = 0; j < g.counts[1]; ++j)
      for (int i = 0; i < g.counts[0]; ++i) {
        if (!z_in) continue;
        const auto p = g.node(i, j, l);
        if (!footprint.contains_xy(p[0], p[1])) continue;
        double v = std::max(std::abs(c_raw.values[g.index(i, j, l)]), 1.0);
        if (v > c_max) {
          v = c_max;
          clamp_hit = true;
        }
        vals[g.index(i, j, l)] = v;
      }
  }
  if (clamped) *clamped = clamp_hit;
  vals = gaussian_smooth_values(g, vals, smooth_sigma);

  IndexBox3 support{{g.counts[0], g.counts[1], g.counts[2]}, {-1, -1, -1}};
  bool any = false;
  for (int l = 0; l < g.counts[2]; ++l)
    for (int j = 0; j < g.counts[1]; ++j)
      for (int i = 0; i < g.counts[0]; ++i)
        if (vals[g.index(i, j, l)] != 1.0) {
          any = true;
          support.lo = {std::min(support.lo[0], i), std::min(support.lo[1], j),
                        std::min(support.lo[2], l)};
          support.hi = {std::max(support.hi[0], i), std::max(support.hi[1], j),
                        std::max(support.hi[2], l)};
        }
  if (!any) support = IndexBox3{{0, 0, 0}, {0, 0, 0}};
  return Coefficient(g, std::move(vals), support, c_max);
}

TailUpdate update_tail(const Coefficient& c, double k_top, WaveConvention conv,
                       const LSConfig& cfg, double guard_rel) {
  TailUpdate out;
  LSResult ls = solve_lippmann_schwinger(c, k_top, conv, cfg);
  out.ls_residual = ls.residual;
  out.ls_iterations = ls.iterations;
  out.min_abs_u = ls.min_abs_u;

  const Grid3D& g = c.grid;
  double max_u = 0.0;
  for (const auto& z : ls.u.values) max_u = std::max(max_u, std::abs(z));
  const double guard = guard_rel * max_u;

  auto grad_u = fd_gradient(ls.u);
  std::array<ComplexVolume, 3> grad{ComplexVolume(g), ComplexVolume(g), ComplexVolume(g)};
  std::vector<uint8_t> valid(g.size(), 0);
  std::deque<std::size_t> queue;
  for (std::size_t n = 0; n < g.size(); ++n) {
    if (std::abs(ls.u.values[n]) > guard) {
      for (int a = 0; a < 3; ++a) grad[a].values[n] = grad_u[a].values[n] / ls.u.values[n];
      valid[n] = 1;
      queue.push_back(n);
    }
  }
  if (queue.empty()) throw SolverError("update_tail: total field vanished everywhere", 0.0);

  // Guarded nodes inherit the value of the nearest valid node (BFS order).
  while (!queue.empty()) {
    const std::size_t n = queue.front();
    queue.pop_front();
    const auto ijk = g.unravel(n);
    for (int axis = 0; axis < 3; ++axis)
      for (int dir = -1; dir <= 1; dir += 2) {
        auto t = ijk;
        t[axis] += dir;
        if (t[axis] < 0 || t[axis] >= g.counts[axis]) continue;
        const std::size_t m = g.index(t[0], t[1], t[2]);
        if (valid[m]) continue;
        for (int a = 0; a < 3; ++a) grad[a].values[m] = grad[a].values[n];
        valid[m] = 1;
        queue.push_back(m);
      }
  }

  out.tail = TailField::from_gradient(std::move(grad));
  return out;
}

double relative_l2(const Coefficient& a, const Coefficient& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("relative_l2: grid mismatch");
  double num = 0.0, den = 0.0;
  for (std::size_t n = 0; n < a.values.size(); ++n) {
    const double d = a.values[n] - b.values[n];
    num += d * d;
    den += b.values[n] * b.values[n];
  }
  return std::sqrt(num / den);
}

InversionResult run_inversion(const CompletedData& data, const TargetFootprint& footprint,
                              const InversionConfig& cfg) {
  data.validate();
  const Grid3D& omega = data.omega;
  const double k_top = data.partition.node(0);
  const int max_sweeps = std::min(data.partition.count - 1, cfg.stopping.outer_cap);
  if (max_sweeps < 1)
    throw std::invalid_argument("run_inversion: partition too short for a single sweep");

  InversionResult out;
  out.stopping = StoppingState{};

  TailField tail = initial_tail(data, cfg.bvp_tol);
  QSequence qseq(omega, data.partition.step());
  ComplexVolume q_guess(omega);  // q_0 = 0

  std::map<std::pair<int, int>, Coefficient> c_store;  // (sweep, inner) -> coefficient
  Coefficient last_c;                                  // c_{n, I_n} of the previous sweep
  bool have_last_c = false;
  double max_sum = 0.0;
  int max_count = 0;

  for (int n = 1; n <= max_sweeps; ++n) {
    const double k_n = data.partition.node(n);
    const BoundaryField psi = boundary_q(data, n);
    ComplexVolume q_cur = q_guess;
    Coefficient c_prev_inner;
    std::array<ComplexVolume, 3> grad_q_last;

    int inner_done = 0;
    for (int i = 1; i <= cfg.stopping.inner_cap; ++i) {
      SweepRecord rec;
      rec.sweep = n;
      rec.inner = i;

      EllipticResult bvp = solve_q_bvp(tail, qseq, k_n, psi, cfg.bvp_tol);
      rec.bvp_residual = bvp.residual;
      rec.bvp_iterations = bvp.iterations;
      q_cur = std::move(bvp.q);

      VCUpdate vc = update_v_and_c(q_cur, qseq, tail, k_n);
      double imag_max = 0.0;
      for (const auto& z : vc.c_raw.values) imag_max = std::max(imag_max, std::abs(z.imag()));
      rec.imag_residual_max = imag_max;

      Coefficient c_i = truncate_c(vc.c_raw, footprint, cfg.search_z_hi, cfg.smooth_sigma,
                                   cfg.c_max, &rec.clamped);
      rec.max_c = c_i.max_value();
      max_sum += rec.max_c;
      ++max_count;

      if (i == 1) {
        if (have_last_c) {
          const double e = relative_l2(c_i, last_c);
          out.stopping.add_bridge(n, e);
          rec.bridge = true;
          rec.error = e;
        }
      } else {
        const double e = relative_l2(c_i, c_prev_inner);
        out.stopping.add_inner(n, i, e);
        rec.error = e;
      }

      TailUpdate tu = update_tail(c_i, k_top, data.convention, cfg.ls, cfg.tail_guard_rel);
      rec.ls_residual = tu.ls_residual;
      rec.ls_iterations = tu.ls_iterations;
      rec.min_abs_u = tu.min_abs_u;
      tail = std::move(tu.tail);

      c_store[{n, i}] = c_i;
      c_prev_inner = std::move(c_i);
      out.records.push_back(rec);
      inner_done = i;

      if (out.stopping.inner_should_stop(n, i, cfg.stopping)) break;
    }

    // Fold the sweep's final q into the running sum and keep its tail.
    grad_q_last = fd_gradient(q_cur);
    qseq.append(q_cur, grad_q_last);
    q_guess = q_cur;
    last_c = c_store.at({n, inner_done});
    have_last_c = true;
    out.sweeps_done = n;

    if (n >= 2) {
      const int w = out.stopping.outer_window(n, cfg.stopping);
      if (w >= 0) {
        const auto seq = out.stopping.pair_sequence(n);
        std::vector<double> acc(omega.size(), 0.0);
        int cnt = 0;
        for (int t = w; t < w + cfg.stopping.outer_run; ++t) {
          const auto& e = seq[t];
          const Coefficient& c = c_store.at({e.sweep, e.inner});
          for (std::size_t m = 0; m < acc.size(); ++m) acc[m] += c.values[m];
          ++cnt;
        }
        for (auto& v : acc) v /= double(cnt);
        // The averaged field keeps the union support of its terms.
        IndexBox3 support{{0, 0, 0},
                          {omega.counts[0] - 1, omega.counts[1] - 1, omega.counts[2] - 1}};
        out.c = Coefficient(omega, std::move(acc), support, cfg.c_max);
        out.reported_max = out.c.max_value();
        out.converged = true;
        out.stop_reason = "outer rule satisfied at sweep " + std::to_string(n);
        out.avg_of_maxima = max_sum / double(max_count);
        return out;
      }
    }

    // Drop coefficients older than the previous sweep.
    for (auto it = c_store.begin(); it != c_store.end();)
      it = it->first.first < n ? c_store.erase(it) : ++it;
  }

  out.c = last_c;
  out.reported_max = last_c.max_value();
  out.converged = false;
  out.stop_reason = "sweep cap reached without satisfying the outer rule";
  out.avg_of_maxima = max_count > 0 ? max_sum / double(max_count) : 1.0;
  return out;
}

}  // namespace burim
