#pragma once

#include <array>
#include <optional>

#include "burim/fields.hpp"
#include "burim/preprocess.hpp"

namespace burim {

// Dirichlet problem  a Δq + W·∇q = f  on the grid interior, 7-point
// Laplacian and centered first differences, boundary values taken from the
// BoundaryField. ILUT-preconditioned BiCGSTAB with a sparse-LU fallback.
struct EllipticResult {
  ComplexVolume q;
  double residual = 0.0;
  int iterations = 0;
  bool used_direct = false;
};

EllipticResult solve_convection_diffusion(double diffusion,
                                          const std::array<ComplexVolume, 3>* convection,
                                          const ComplexVolume* rhs,
                                          const BoundaryField& dirichlet, double rel_tol = 1e-8,
                                          int max_iterations = 4000);

// Finite-difference helpers shared by the tail and coefficient updates:
// centered differences inside, second-order one-sided at the faces.
ComplexVolume fd_derivative(const ComplexVolume& v, int axis);
std::array<ComplexVolume, 3> fd_gradient(const ComplexVolume& v);
ComplexVolume fd_divergence(const std::array<ComplexVolume, 3>& w);

}  // namespace burim
