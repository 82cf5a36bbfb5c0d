#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "eigx/spaces.hpp"

namespace eigx {

/// Symmetric sparse matrix kept as its lower triangle (column-major CSC).
class SparseSymMatrix {
 public:
  using Storage = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

  SparseSymMatrix() = default;
  explicit SparseSymMatrix(Storage lower);

  int rows() const { return static_cast<int>(lower_.rows()); }
  const Storage& lower() const { return lower_; }
  /// Both triangles.
  Storage full() const;
  Eigen::MatrixXd dense() const;
  Vector multiply(const Vector& x) const;
  double coeff(int i, int j) const;
  /// Max row sum of absolute values.
  double norm_inf() const;

 private:
  Storage lower_;
};

/// Piecewise-constant diffusion coefficient, one positive value per triangle.
class CoefficientField {
 public:
  explicit CoefficientField(std::vector<double> values);
  static CoefficientField constant(const Mesh& mesh, double value = 1.0);
  /// Samples f at every element centroid.
  static CoefficientField from_centroids(const Mesh& mesh, const std::function<double(const Point&)>& f);
  /// Two-valued field split by the line y = y0, averaged exactly over each
  /// element by area fraction. Equals centroid sampling on elements the line
  /// does not cut.
  static CoefficientField split_at_height(const Mesh& mesh, double y0, double below, double above);

  double operator()(int t) const { return values_[t]; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

struct AssemblyOptions {
  /// Replace Dirichlet rows and columns by the identity.
  bool eliminate_dirichlet = true;
};

/// int_K A grad phi_i . grad phi_j over all elements (CR, ECR, P1, P3).
SparseSymMatrix assemble_stiffness(const FeSpace& space, const CoefficientField& a,
                                   const AssemblyOptions& options = {});
SparseSymMatrix assemble_stiffness(const FeSpace& space, const AssemblyOptions& options = {});

/// int_K phi_i phi_j over all elements (CR, ECR, P0, P1, P3), no elimination.
SparseSymMatrix assemble_mass(const FeSpace& space);

/// A system restricted to the free DOFs of a mask.
struct ReducedSystem {
  SparseSymMatrix matrix;
  std::vector<int> free;             // reduced index -> full index
  std::vector<int> full_to_reduced;  // -1 for eliminated DOFs
  std::vector<int> eliminated;

  Vector restrict(const Vector& full) const;
  /// Eliminated entries are set to zero.
  Vector scatter(const Vector& reduced) const;
};

ReducedSystem apply_dirichlet(const SparseSymMatrix& matrix, const std::vector<char>& mask);
ReducedSystem apply_dirichlet(const FeSpace& space, const SparseSymMatrix& matrix);

/// Mask marking every DOF attached to the listed edges (CR/ECR edge DOFs).
std::vector<char> dirichlet_mask_from_edges(const FeSpace& space, const std::vector<int>& edges);

/// Saddle system [[M, B^T], [B, 0]] of the RT0 x P0 mixed source problem
/// with unknowns (flux DOFs, element values) and right-hand side
/// (0, -int_K load). Flux DOFs on Neumann faces are constrained to zero.
struct MixedSystem {
  SparseSymMatrix matrix;
  Vector rhs;
  int n_flux = 0;
  int n_cells = 0;
};

MixedSystem assemble_mixed_rt(const FeSpace& rt_space, const FeFunction& load);

/// Matrix Market coordinate format, symmetric, lower triangle.
std::string to_matrix_market(const SparseSymMatrix& m);

}  // namespace eigx
