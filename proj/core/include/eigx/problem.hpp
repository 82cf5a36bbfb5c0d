#pragma once

#include <vector>

#include "eigx/solve.hpp"

namespace eigx {

/// Discrete eigenpairs scattered back to full coefficient vectors.
struct EigenSolution {
  EigenResult result;              // on the free DOFs
  std::vector<FeFunction> modes;   // ||u_h||_0 = 1
  int n_free = 0;
};

/// a_h(u_h, v) = lambda_h (u_h, v) over the free DOFs of a CR, ECR, P1 or P3 space.
EigenSolution solve_eigenproblem(const FeSpace& space, const CoefficientField& a,
                                 const EigenOptions& options);
EigenSolution solve_eigenproblem(const FeSpace& space, const EigenOptions& options);

/// a_h(u_h, v) = (f, v) for a piecewise-constant load f, homogeneous
/// Dirichlet data on the space's mask.
FeFunction solve_source(const FeSpace& space, const FeFunction& load_p0,
                        const CoefficientField* a = nullptr);

struct MixedSolution {
  FeFunction sigma;  // RT0
  FeFunction u;      // P0
};

/// RT0 x P0 discretization of sigma = grad u, -div sigma = f.
MixedSolution solve_mixed(const FeSpace& rt_space, const FeFunction& load_p0);

}  // namespace eigx
