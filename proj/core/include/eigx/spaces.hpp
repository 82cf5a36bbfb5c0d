#pragma once

#include <array>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "eigx/mesh.hpp"
#include "eigx/quad.hpp"

namespace eigx {

enum class SpaceKind { CR, ECR, RT0, P0, P1, P3 };

std::string_view to_string(SpaceKind kind);
SpaceKind space_kind_from_string(std::string_view name);

/// Condition imposed on crack faces by spaces with edge or nodal DOFs.
enum class CrackBC { Neumann, Dirichlet };

std::string_view to_string(CrackBC bc);
CrackBC crack_bc_from_string(std::string_view name);

/// Number of local basis functions per triangle.
int local_size(SpaceKind kind);

using LocalValues = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, 10, 1>;
using LocalGrads = Eigen::Matrix<double, Eigen::Dynamic, 2, 0, 10, 2>;

/// Local scalar basis on one triangle, in local DOF order:
///   CR:  1 - 2 psi_i (edge i)
///   ECR: 1 - 2 psi_i - phi_ECR / 3 (edge i), then phi_ECR (element mean)
///   P0:  1
///   P1:  psi_i
///   P3:  vertices, two nodes per local edge (near p[i+1], then near p[i+2]),
///        centroid
/// Either output may be null.
void eval_local_basis(SpaceKind kind, const ElementGeometry& g, const Point& x, LocalValues* values,
                      LocalGrads* grads);

/// Outward-flux RT0 basis (x - p_i) / (2|K|) for local edge i.
Eigen::Matrix<double, 3, 2> rt_local_basis(const ElementGeometry& g, const Point& x);

/// DOF layout of a finite element space over a mesh. Cheap to copy.
class FeSpace {
 public:
  FeSpace(std::shared_ptr<const Mesh> mesh, SpaceKind kind, CrackBC crack_bc = CrackBC::Neumann);
  FeSpace(const Mesh& mesh, SpaceKind kind, CrackBC crack_bc = CrackBC::Neumann);

  SpaceKind kind() const { return data_->kind; }
  CrackBC crack_bc() const { return data_->crack_bc; }
  const Mesh& mesh() const { return *data_->mesh; }
  const std::shared_ptr<const Mesh>& mesh_ptr() const { return data_->mesh; }

  int n_dofs() const { return data_->n_dofs; }
  int local_size() const { return eigx::local_size(data_->kind); }
  std::span<const int> local_dofs(int t) const {
    return {data_->local.data() + static_cast<std::size_t>(t) * local_size(),
            static_cast<std::size_t>(local_size())};
  }
  /// Per local DOF sign; -1 only for RT0 DOFs whose global normal points
  /// into the triangle.
  std::span<const int> local_signs(int t) const {
    return {data_->signs.data() + static_cast<std::size_t>(t) * local_size(),
            static_cast<std::size_t>(local_size())};
  }

  const std::vector<char>& dirichlet_mask() const { return data_->dirichlet; }
  bool is_dirichlet(int dof) const { return data_->dirichlet[dof] != 0; }
  int n_free() const;

  /// Physical location of a nodal DOF (P1, P3 only).
  Point node(int dof) const;

 private:
  struct Data {
    std::shared_ptr<const Mesh> mesh;
    SpaceKind kind;
    CrackBC crack_bc;
    int n_dofs = 0;
    std::vector<int> local;
    std::vector<int> signs;
    std::vector<char> dirichlet;
    std::vector<Point> nodes;
  };
  std::shared_ptr<const Data> data_;
};

/// Whether an edge with this tag carries a Dirichlet constraint under the
/// given crack condition.
bool is_dirichlet_tag(BoundaryTag tag, CrackBC crack_bc);

/// A coefficient vector over a space.
class FeFunction {
 public:
  explicit FeFunction(FeSpace space);
  FeFunction(FeSpace space, Vector coeffs);

  const FeSpace& space() const { return space_; }
  const Vector& coeffs() const { return coeffs_; }
  Vector& coeffs() { return coeffs_; }

  /// Scalar spaces. Throws PreconditionError if x is outside triangle t.
  double value(int t, const Point& x) const;
  Point gradient(int t, const Point& x) const;

  /// RT0 only.
  Point vector_value(int t, const Point& x) const;
  double divergence(int t) const;

  /// dof_index,value rows with a header.
  std::string to_csv() const;

 private:
  FeSpace space_;
  Vector coeffs_;
};

/// Edge means (1/|e|) int_e v ds on every edge, Dirichlet edges included.
FeFunction interp_cr(const ScalarField& v, const FeSpace& space);
FeFunction interp_cr(const ScalarField& v, const Mesh& mesh);

/// Edge means plus element means; the element integral uses `rule`.
FeFunction interp_ecr(const ScalarField& v, const FeSpace& space,
                      const TriangleRule& rule = triangle_rule(6));
FeFunction interp_ecr(const ScalarField& v, const Mesh& mesh,
                      const TriangleRule& rule = triangle_rule(6));

/// Fortin interpolation: int_e q . n_e ds with the global edge normal.
FeFunction interp_rt(const VectorField& q, const FeSpace& space);
FeFunction interp_rt(const VectorField& q, const Mesh& mesh);

/// Element means.
FeFunction project_p0(const ScalarField& v, const FeSpace& space,
                      const TriangleRule& rule = triangle_rule(6));
FeFunction project_p0(const ScalarField& v, const Mesh& mesh,
                      const TriangleRule& rule = triangle_rule(6));

/// Nodal interpolation into P1 or P3.
FeFunction interp_nodal(const ScalarField& v, const FeSpace& space);

/// Per-element closures of the interpolation bubbles of one triangle.
struct BubbleSet {
  std::array<ScalarField, 3> cr;  // phi_CR^i, zero edge means on every edge
  ScalarField ecr;                // phi_ECR, zero edge means and unit element mean
  ScalarField ecr1;               // (x1-M1)^2 - (x2-M2)^2
  ScalarField ecr2;               // (x1-M1)(x2-M2)
};

BubbleSet make_bubbles(const ElementGeometry& g);

/// Sum over elements of ||f - v_h||_{0,K}^2 for a scalar FE function.
double l2_error_sq(const FeFunction& f, const ScalarField& v, const TriangleRule& rule);

}  // namespace eigx
