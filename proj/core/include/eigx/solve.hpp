#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "eigx/assembly.hpp"

namespace eigx {

enum class LinearPath {
  PositiveDefinite,  // sparse LDL^T
  Indefinite,        // sparse LU on the full pattern
};

/// Direct sparse solve. Throws SingularMatrixError with the offending pivot.
Vector solve_sym_linear(const SparseSymMatrix& a, const Vector& rhs,
                        LinearPath path = LinearPath::PositiveDefinite);

/// ||A x - b|| / ||b|| (or ||A x|| when b = 0).
double relative_residual(const SparseSymMatrix& a, const Vector& x, const Vector& b);

enum class EigenMethod { Auto, Dense, ShiftInvert };

struct EigenOptions {
  int k = 1;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  EigenMethod method = EigenMethod::Auto;
  int dense_limit = 2000;  // Auto uses the dense path up to this size
  int max_iterations = 1000;
};

struct EigenResult {
  std::vector<double> eigenvalues;   // ascending
  std::vector<Vector> eigenvectors;  // x^T B x = 1
  std::vector<double> residuals;     // ||Ax - lambda Bx|| / (|lambda| ||Bx||)
  int iterations = 0;
  std::string solver_id;
};

/// Smallest k eigenpairs of A x = lambda B x with A, B symmetric and B
/// positive definite. Each eigenvector's sign is fixed so that its
/// largest-magnitude entry (first such index) is positive.
EigenResult solve_eigs_smallest(const SparseSymMatrix& a, const SparseSymMatrix& b,
                                const EigenOptions& options);

}  // namespace eigx
