#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eigx/types.hpp"

namespace eigx {

enum class BoundaryTag : std::uint8_t { Interior, Dirichlet, Neumann, CrackUpper, CrackLower };

std::string_view to_string(BoundaryTag tag);
BoundaryTag boundary_tag_from_string(std::string_view name);

inline bool is_boundary(BoundaryTag tag) { return tag != BoundaryTag::Interior; }
inline bool is_crack(BoundaryTag tag) {
  return tag == BoundaryTag::CrackUpper || tag == BoundaryTag::CrackLower;
}

/// A global edge. For interior edges k1 is the adjacent triangle with the
/// larger index and k2 the smaller one; the global normal n_e points from
/// k1 to k2. Boundary edges have k2 == -1 and n_e is outward for k1.
struct Edge {
  int v0 = -1;
  int v1 = -1;
  int k1 = -1;
  int k2 = -1;
  BoundaryTag tag = BoundaryTag::Interior;

  bool interior() const { return k2 >= 0; }
};

enum class Domain { Square2, Square5, TriangleJump, Crack8 };

std::string_view to_string(Domain d);
/// Accepts the canonical names plus the CLI aliases (square, square_nonuniform,
/// jump, jump_triangle, crack).
Domain domain_from_string(std::string_view name);

/// Everything the formulas need about one triangle. Local edge i is opposite
/// vertex i and runs from p[i+1] to p[i+2] (indices mod 3), so t[i] is the
/// counterclockwise tangent and n[i] the outward normal.
struct ElementGeometry {
  std::array<Point, 3> p;
  double area = 0.0;
  std::array<double, 3> edge_length{};
  std::array<double, 3> height{};
  std::array<Point, 3> midpoint;
  std::array<Point, 3> normal;
  std::array<Point, 3> tangent;
  Point centroid;
  double h2 = 0.0;  // H_K^2, the sum of squared edge lengths
  std::array<Point, 3> grad_bary;
  double diameter = 0.0;

  static ElementGeometry from_vertices(const Point& a, const Point& b, const Point& c);

  /// Barycentric coordinates of x.
  Eigen::Vector3d barycentric(const Point& x) const;
  Point map(const Eigen::Vector3d& bary) const {
    return bary[0] * p[0] + bary[1] * p[1] + bary[2] * p[2];
  }
};

struct UniformityReport {
  double parallel_pair_fraction = 0.0;
  int kappa = 0;
  bool is_uniform = false;
  int interior_edges = 0;
  int parallelogram_edges = 0;
};

class Mesh {
 public:
  using Triangle = std::array<int, 3>;
  using SideTags = std::array<BoundaryTag, 3>;

  /// Builds the edge table. side_tags[t][i] tags local edge i of triangle t;
  /// Interior sides are merged by vertex pair, tagged sides become distinct
  /// boundary edges (so the two faces of a crack stay separate).
  Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
       std::vector<SideTags> side_tags, int level,
       std::vector<std::pair<int, int>> crack_pairs = {});

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Triangle>& triangles() const { return triangles_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<SideTags>& side_tags() const { return side_tags_; }
  const std::vector<std::pair<int, int>>& crack_pairs() const { return crack_pairs_; }

  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  int num_triangles() const { return static_cast<int>(triangles_.size()); }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_interior_edges() const;
  int level() const { return level_; }

  /// Global edge ids of the three local edges of triangle t.
  const std::array<int, 3>& triangle_edges(int t) const { return tri_edges_[t]; }
  /// +1 where the outward normal of local edge i equals the global n_e.
  const std::array<int, 3>& edge_signs(int t) const { return edge_signs_[t]; }

  ElementGeometry geometry(int t) const;
  Point edge_normal(int e) const;
  double edge_length(int e) const;
  Point edge_midpoint(int e) const;

  /// Maximum element diameter.
  double h() const;
  double total_area() const;

  friend bool operator==(const Mesh& a, const Mesh& b);

 private:
  std::vector<Point> vertices_;
  std::vector<Triangle> triangles_;
  std::vector<SideTags> side_tags_;
  std::vector<Edge> edges_;
  std::vector<std::array<int, 3>> tri_edges_;
  std::vector<std::array<int, 3>> edge_signs_;
  std::vector<std::pair<int, int>> crack_pairs_;
  int level_ = 1;
};

/// Level-one triangulation of a built-in domain.
Mesh build_initial(Domain domain);

/// Red refinement. Children of triangle t get labels 4t..4t+3; new vertices
/// are appended in edge order; crack-face midpoints are duplicated.
Mesh refine_uniform(const Mesh& mesh);

/// Initial mesh refined to the given level (level 1 is the initial mesh).
Mesh build_level(Domain domain, int level);

UniformityReport check_uniformity(const Mesh& mesh);

/// Whether the triangles across interior edge e form a parallelogram.
bool forms_parallelogram(const Mesh& mesh, int e, double rel_tol = 1e-12);

/// Parallelogram test for two explicit triangles; the shared edge is found
/// by coordinates.
bool forms_parallelogram(const std::array<Point, 3>& k1, const std::array<Point, 3>& k2,
                         double rel_tol = 1e-12);

}  // namespace eigx
