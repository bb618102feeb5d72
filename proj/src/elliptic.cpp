#include "burim/elliptic.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "burim/forward.hpp"

namespace burim {

EllipticResult solve_convection_diffusion(double diffusion,
                                          const std::array<ComplexVolume, 3>* convection,
                                          const ComplexVolume* rhs,
                                          const BoundaryField& dirichlet, double rel_tol,
                                          int max_iterations) {
  const Grid3D& g = dirichlet.grid;
  if (diffusion == 0.0) throw std::invalid_argument("solve_convection_diffusion: zero diffusion");
  if (convection)
    for (const auto& w : *convection)
      if (!(w.grid == g)) throw std::invalid_argument("solve_convection_diffusion: grid mismatch");
  if (rhs && !(rhs->grid == g))
    throw std::invalid_argument("solve_convection_diffusion: rhs grid mismatch");

  const int nx = g.counts[0], ny = g.counts[1], nz = g.counts[2];
  const int mx = nx - 2, my = ny - 2, mz = nz - 2;
  if (mx < 1 || my < 1 || mz < 1)
    throw std::invalid_argument("solve_convection_diffusion: grid has no interior");
  const std::size_t unknowns = std::size_t(mx) * my * mz;

  auto interior_index = [&](int i, int j, int l) {
    return std::size_t(i - 1) + std::size_t(mx) * (std::size_t(j - 1) + std::size_t(my) * (l - 1));
  };

  const std::array<double, 3> h = g.spacing;
  const std::array<double, 3> inv_h2 = {1.0 / (h[0] * h[0]), 1.0 / (h[1] * h[1]),
                                        1.0 / (h[2] * h[2])};

  using Trip = Eigen::Triplet<cplx>;
  std::vector<Trip> trips;
  trips.reserve(unknowns * 7);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(Eigen::Index(unknowns));

  for (int l = 1; l < nz - 1; ++l)
    for (int j = 1; j < ny - 1; ++j)
      for (int i = 1; i < nx - 1; ++i) {
        const std::size_t row = interior_index(i, j, l);
        cplx diag = -2.0 * diffusion * (inv_h2[0] + inv_h2[1] + inv_h2[2]);
        trips.emplace_back(int(row), int(row), diag);
        if (rhs) b[Eigen::Index(row)] += rhs->at(i, j, l);

        for (int axis = 0; axis < 3; ++axis) {
          cplx wa(0.0, 0.0);
          if (convection) wa = (*convection)[axis].at(i, j, l);
          const cplx c_plus = diffusion * inv_h2[axis] + wa / (2.0 * h[axis]);
          const cplx c_minus = diffusion * inv_h2[axis] - wa / (2.0 * h[axis]);
          for (int dir = -1; dir <= 1; dir += 2) {
            int ii = i, jj = j, ll = l;
            (axis == 0 ? ii : axis == 1 ? jj : ll) += dir;
            const cplx coef = dir > 0 ? c_plus : c_minus;
            if (ii == 0 || jj == 0 || ll == 0 || ii == nx - 1 || jj == ny - 1 || ll == nz - 1) {
              b[Eigen::Index(row)] -= coef * dirichlet.value_at(ii, jj, ll);
            } else {
              trips.emplace_back(int(row), int(interior_index(ii, jj, ll)), coef);
            }
          }
        }
      }

  const Eigen::Index nu = Eigen::Index(unknowns);
  Eigen::SparseMatrix<cplx> A(nu, nu);
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  EllipticResult out;
  Eigen::VectorXcd x;

  Eigen::BiCGSTAB<Eigen::SparseMatrix<cplx>, Eigen::IncompleteLUT<cplx>> solver;
  solver.setTolerance(rel_tol);
  solver.setMaxIterations(max_iterations);
  solver.preconditioner().setFillfactor(10);
  solver.preconditioner().setDroptol(1e-4);
  solver.compute(A);
  bool ok = solver.info() == Eigen::Success;
  if (ok) {
    x = solver.solve(b);
    ok = solver.info() == Eigen::Success && std::isfinite(solver.error());
    out.residual = solver.error();
    out.iterations = int(solver.iterations());
  }
  if (!ok) {
    Eigen::SparseLU<Eigen::SparseMatrix<cplx>> lu;
    lu.compute(A);
    if (lu.info() != Eigen::Success)
      throw SolverError("solve_convection_diffusion: iterative solve failed and LU breakdown",
                        out.residual);
    x = lu.solve(b);
    out.used_direct = true;
    out.residual = (A * x - b).norm() / std::max(1e-300, b.norm());
    out.iterations = 0;
  }

  ComplexVolume q(g);
  for (int l = 0; l < nz; ++l)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (g.is_boundary(i, j, l))
          q.at(i, j, l) = dirichlet.value_at(i, j, l);
        else
          q.at(i, j, l) = x[Eigen::Index(interior_index(i, j, l))];
      }
  out.q = std::move(q);
  return out;
}

ComplexVolume fd_derivative(const ComplexVolume& v, int axis) {
  const Grid3D& g = v.grid;
  const int n = g.counts[axis];
  const double h = g.spacing[axis];
  ComplexVolume out(g);
  for (int l = 0; l < g.counts[2]; ++l)
    for (int j = 0; j < g.counts[1]; ++j)
      for (int i = 0; i < g.counts[0]; ++i) {
        const int a = axis == 0 ? i : axis == 1 ? j : l;
        auto val = [&](int d) {
          int ii = i, jj = j, ll = l;
          (axis == 0 ? ii : axis == 1 ? jj : ll) = a + d;
          return v.at(ii, jj, ll);
        };
        cplx dv;
        if (a > 0 && a < n - 1)
          dv = (val(1) - val(-1)) / (2.0 * h);
        else if (n < 3)
          dv = (a == 0 ? val(1) - val(0) : val(0) - val(-1)) / h;
        else if (a == 0)
          dv = (-3.0 * val(0) + 4.0 * val(1) - val(2)) / (2.0 * h);
        else
          dv = (3.0 * val(0) - 4.0 * val(-1) + val(-2)) / (2.0 * h);
        out.at(i, j, l) = dv;
      }
  return out;
}

std::array<ComplexVolume, 3> fd_gradient(const ComplexVolume& v) {
  return {fd_derivative(v, 0), fd_derivative(v, 1), fd_derivative(v, 2)};
}

ComplexVolume fd_divergence(const std::array<ComplexVolume, 3>& w) {
  ComplexVolume out(w[0].grid);
  for (int axis = 0; axis < 3; ++axis) {
    ComplexVolume d = fd_derivative(w[axis], axis);
    for (std::size_t q = 0; q < out.values.size(); ++q) out.values[q] += d.values[q];
  }
  return out;
}

}  // namespace burim
