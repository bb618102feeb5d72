#pragma once

#include <complex>
#include <functional>
#include <vector>

namespace burim {

struct KrylovResult {
  int iterations = 0;
  double residual = 0.0;  // relative to ||b||
  bool converged = false;
};

using LinearOperator =
    std::function<void(const std::vector<std::complex<double>>&, std::vector<std::complex<double>>&)>;

// Restarted GMRES with modified Gram-Schmidt and Givens rotations.
// x holds the initial guess on entry and the solution on exit.
KrylovResult gmres(const LinearOperator& apply, const std::vector<std::complex<double>>& b,
                   std::vector<std::complex<double>>& x, double rel_tol, int max_iterations,
                   int restart);

}  // namespace burim
