#pragma once

#include "starcov/sdp.hpp"

namespace starcov {

struct SdpSolverOptions {
  double tol = 1e-8;        // normalized primal/dual/gap residual target
  int max_iterations = 200;
  double infeasibility_tol = 1e-9;  // Farkas certificate quality
  bool verbose = false;
};

/// Primal-dual interior-point solve of the Hermitian program through its
/// real embedding. Deterministic given identical inputs.
SdpSolution solve_sdp(const SdpProblem& p, const SdpSolverOptions& options = {});

}  // namespace starcov
