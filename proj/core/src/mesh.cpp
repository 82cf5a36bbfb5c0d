#include "eigx/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace eigx {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

std::pair<int, int> ordered(int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; }

}  // namespace

std::string_view to_string(BoundaryTag tag) {
  switch (tag) {
    case BoundaryTag::Interior: return "interior";
    case BoundaryTag::Dirichlet: return "dirichlet";
    case BoundaryTag::Neumann: return "neumann";
    case BoundaryTag::CrackUpper: return "crack_upper";
    case BoundaryTag::CrackLower: return "crack_lower";
  }
  return "interior";
}

BoundaryTag boundary_tag_from_string(std::string_view name) {
  for (auto tag : {BoundaryTag::Interior, BoundaryTag::Dirichlet, BoundaryTag::Neumann,
                   BoundaryTag::CrackUpper, BoundaryTag::CrackLower}) {
    if (to_string(tag) == name) return tag;
  }
  throw ConfigError("unknown boundary tag '" + std::string(name) + "'");
}

std::string_view to_string(Domain d) {
  switch (d) {
    case Domain::Square2: return "square2";
    case Domain::Square5: return "square5";
    case Domain::TriangleJump: return "triangle_jump";
    case Domain::Crack8: return "crack8";
  }
  return "square2";
}

Domain domain_from_string(std::string_view name) {
  if (name == "square2" || name == "square") return Domain::Square2;
  if (name == "square5" || name == "square_nonuniform") return Domain::Square5;
  if (name == "triangle_jump" || name == "jump_triangle" || name == "jump")
    return Domain::TriangleJump;
  if (name == "crack8" || name == "crack") return Domain::Crack8;
  throw ConfigError("unknown domain '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// ElementGeometry

ElementGeometry ElementGeometry::from_vertices(const Point& a, const Point& b, const Point& c) {
  ElementGeometry g;
  g.p = {a, b, c};
  g.area = 0.5 * cross(b - a, c - a);
  g.centroid = (a + b + c) / 3.0;
  for (int i = 0; i < 3; ++i) {
    const Point& s = g.p[(i + 1) % 3];
    const Point& e = g.p[(i + 2) % 3];
    const double len = (e - s).norm();
    g.edge_length[i] = len;
    g.tangent[i] = (e - s) / len;
    g.normal[i] = Point(g.tangent[i].y(), -g.tangent[i].x());
    g.midpoint[i] = 0.5 * (s + e);
    g.height[i] = 2.0 * g.area / len;
    g.grad_bary[i] = -g.normal[i] / g.height[i];
    g.h2 += len * len;
    g.diameter = std::max(g.diameter, len);
  }
  return g;
}

Eigen::Vector3d ElementGeometry::barycentric(const Point& x) const {
  Eigen::Vector3d b;
  for (int i = 0; i < 3; ++i) b[i] = grad_bary[i].dot(x - p[(i + 1) % 3]);
  return b;
}

// ---------------------------------------------------------------------------
// Mesh

Mesh::Mesh(std::vector<Point> vertices, std::vector<Triangle> triangles,
           std::vector<SideTags> side_tags, int level, std::vector<std::pair<int, int>> crack_pairs)
    : vertices_(std::move(vertices)),
      triangles_(std::move(triangles)),
      side_tags_(std::move(side_tags)),
      crack_pairs_(std::move(crack_pairs)),
      level_(level) {
  if (side_tags_.size() != triangles_.size())
    throw PreconditionError("side tag count does not match triangle count");
  const int nv = num_vertices();
  for (std::size_t t = 0; t < triangles_.size(); ++t) {
    const auto& tri = triangles_[t];
    for (int v : tri)
      if (v < 0 || v >= nv) throw PreconditionError("triangle references unknown vertex");
    const double a2 =
        cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
    if (!(a2 > 0.0))
      throw PreconditionError("triangle " + std::to_string(t) + " is not counterclockwise");
  }

  tri_edges_.assign(triangles_.size(), {-1, -1, -1});
  edge_signs_.assign(triangles_.size(), {1, 1, 1});
  std::map<std::pair<int, int>, int> open;  // interior sides waiting for a neighbour

  for (int t = 0; t < num_triangles(); ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const BoundaryTag tag = side_tags_[t][i];
      if (tag == BoundaryTag::Interior) {
        auto key = ordered(a, b);
        if (auto it = open.find(key); it != open.end()) {
          Edge& e = edges_[it->second];
          // t is the larger label: it becomes K_e^1 and owns the orientation.
          e.k2 = e.k1;
          e.k1 = t;
          e.v0 = a;
          e.v1 = b;
          tri_edges_[t][i] = it->second;
          edge_signs_[t][i] = 1;
          for (int j = 0; j < 3; ++j)
            if (tri_edges_[e.k2][j] == it->second) edge_signs_[e.k2][j] = -1;
          open.erase(it);
          continue;
        }
        open.emplace(key, num_edges());
      }
      edges_.push_back(Edge{a, b, t, -1, tag});
      tri_edges_[t][i] = num_edges() - 1;
      edge_signs_[t][i] = 1;
    }
  }
  if (!open.empty())
    throw PreconditionError("interior-tagged side without a neighbouring triangle");
}

int Mesh::num_interior_edges() const {
  return static_cast<int>(
      std::count_if(edges_.begin(), edges_.end(), [](const Edge& e) { return e.interior(); }));
}

ElementGeometry Mesh::geometry(int t) const {
  const auto& tri = triangles_[t];
  return ElementGeometry::from_vertices(vertices_[tri[0]], vertices_[tri[1]], vertices_[tri[2]]);
}

Point Mesh::edge_normal(int e) const {
  const Edge& ed = edges_[e];
  const Point t = (vertices_[ed.v1] - vertices_[ed.v0]).normalized();
  return Point(t.y(), -t.x());
}

double Mesh::edge_length(int e) const {
  return (vertices_[edges_[e].v1] - vertices_[edges_[e].v0]).norm();
}

Point Mesh::edge_midpoint(int e) const {
  return 0.5 * (vertices_[edges_[e].v0] + vertices_[edges_[e].v1]);
}

double Mesh::h() const {
  double h = 0.0;
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& tri = triangles_[t];
    for (int i = 0; i < 3; ++i)
      h = std::max(h, (vertices_[tri[(i + 1) % 3]] - vertices_[tri[i]]).norm());
  }
  return h;
}

double Mesh::total_area() const {
  double area = 0.0;
  for (int t = 0; t < num_triangles(); ++t) {
    const auto& tri = triangles_[t];
    area += 0.5 * cross(vertices_[tri[1]] - vertices_[tri[0]], vertices_[tri[2]] - vertices_[tri[0]]);
  }
  return area;
}

bool operator==(const Mesh& a, const Mesh& b) {
  return a.level_ == b.level_ && a.vertices_ == b.vertices_ && a.triangles_ == b.triangles_ &&
         a.side_tags_ == b.side_tags_ && a.crack_pairs_ == b.crack_pairs_;
}

// ---------------------------------------------------------------------------
// Built-in domains

namespace {

using Classifier = BoundaryTag (*)(const Point& a, const Point& b, const Point& centroid);

bool near(double x, double y) { return std::abs(x - y) <= 1e-12; }

Mesh tag_and_build(std::vector<Point> vertices, std::vector<Mesh::Triangle> triangles,
                   Classifier classify, int level) {
  std::map<std::pair<int, int>, int> count;
  for (const auto& tri : triangles)
    for (int i = 0; i < 3; ++i) ++count[ordered(tri[(i + 1) % 3], tri[(i + 2) % 3])];

  std::vector<Mesh::SideTags> tags(triangles.size());
  for (std::size_t t = 0; t < triangles.size(); ++t) {
    const auto& tri = triangles[t];
    const Point c = (vertices[tri[0]] + vertices[tri[1]] + vertices[tri[2]]) / 3.0;
    for (int i = 0; i < 3; ++i) {
      const int a = tri[(i + 1) % 3];
      const int b = tri[(i + 2) % 3];
      const BoundaryTag tag = classify(vertices[a], vertices[b], c);
      const bool shared = count[ordered(a, b)] == 2;
      if (!shared && tag == BoundaryTag::Interior)
        throw PreconditionError("boundary side not recognised by the domain classifier");
      tags[t][i] = (shared && !is_crack(tag)) ? BoundaryTag::Interior : tag;
    }
  }
  return Mesh(std::move(vertices), std::move(triangles), std::move(tags), level);
}

BoundaryTag classify_dirichlet(const Point&, const Point&, const Point&) {
  return BoundaryTag::Dirichlet;
}

BoundaryTag classify_triangle_jump(const Point& a, const Point& b, const Point&) {
  if (near(a.x(), 1.0) && near(b.x(), 1.0)) return BoundaryTag::Neumann;
  return BoundaryTag::Dirichlet;
}

BoundaryTag classify_crack(const Point& a, const Point& b, const Point& c) {
  const bool on_slit = near(a.y(), 0.0) && near(b.y(), 0.0) && a.x() >= -1e-12 &&
                       b.x() >= -1e-12;
  if (on_slit) return c.y() > 0.0 ? BoundaryTag::CrackUpper : BoundaryTag::CrackLower;
  return BoundaryTag::Dirichlet;
}

}  // namespace

Mesh build_initial(Domain domain) {
  switch (domain) {
    case Domain::Square2:
      return tag_and_build({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}},
                           classify_dirichlet, 1);
    case Domain::Square5:
      // (0,0) (1,0) (1,1) (0,1) (0,0.9) (0.05,0) (0.9,1)
      return tag_and_build({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0.9}, {0.05, 0}, {0.9, 1}},
                           {{0, 5, 4}, {5, 6, 4}, {4, 6, 3}, {5, 1, 6}, {1, 2, 6}},
                           classify_dirichlet, 1);
    case Domain::TriangleJump: {
      const double s3 = std::sqrt(3.0);
      Mesh coarse = tag_and_build({{0.5, 0.5 * s3}, {1.0, 0.0}, {1.0, s3}}, {{0, 1, 2}},
                                  classify_triangle_jump, 0);
      return refine_uniform(coarse);
    }
    case Domain::Crack8:
      // 3x3 lattice on (-1,1)^2, every quadrant cut by a north-east diagonal.
      return tag_and_build({{-1, -1}, {0, -1}, {1, -1}, {-1, 0}, {0, 0}, {1, 0}, {-1, 1}, {0, 1}, {1, 1}},
                           {{0, 1, 4}, {0, 4, 3}, {1, 2, 5}, {1, 5, 4},
                            {3, 4, 7}, {3, 7, 6}, {4, 5, 8}, {4, 8, 7}},
                           classify_crack, 1);
  }
  throw ConfigError("unknown domain");
}

Mesh refine_uniform(const Mesh& mesh) {
  const int nv = mesh.num_vertices();
  std::vector<Point> vertices = mesh.vertices();
  vertices.reserve(nv + mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) vertices.push_back(mesh.edge_midpoint(e));

  auto crack_pairs = mesh.crack_pairs();
  std::map<std::pair<double, double>, int> upper_mid;
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges()[e].tag == BoundaryTag::CrackUpper) {
      const Point m = mesh.edge_midpoint(e);
      upper_mid.emplace(std::pair{m.x(), m.y()}, nv + e);
    }
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges()[e].tag == BoundaryTag::CrackLower) {
      const Point m = mesh.edge_midpoint(e);
      auto it = upper_mid.find({m.x(), m.y()});
      if (it == upper_mid.end()) throw PreconditionError("unpaired crack edge");
      crack_pairs.emplace_back(it->second, nv + e);
    }
  }

  std::vector<Mesh::Triangle> tris;
  std::vector<Mesh::SideTags> tags;
  tris.reserve(4 * mesh.num_triangles());
  tags.reserve(4 * mesh.num_triangles());
  constexpr BoundaryTag I = BoundaryTag::Interior;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto& [a, b, c] = mesh.triangles()[t];
    const auto& te = mesh.triangle_edges(t);
    const auto& st = mesh.side_tags()[t];
    const int ma = nv + te[0];
    const int mb = nv + te[1];
    const int mc = nv + te[2];
    tris.push_back({a, mc, mb});
    tags.push_back({I, st[1], st[2]});
    tris.push_back({mc, b, ma});
    tags.push_back({st[0], I, st[2]});
    tris.push_back({mb, ma, c});
    tags.push_back({st[0], st[1], I});
    tris.push_back({ma, mb, mc});
    tags.push_back({I, I, I});
  }
  return Mesh(std::move(vertices), std::move(tris), std::move(tags), mesh.level() + 1,
              std::move(crack_pairs));
}

Mesh build_level(Domain domain, int level) {
  if (level < 1) throw ConfigError("mesh level must be >= 1");
  Mesh m = build_initial(domain);
  while (m.level() < level) m = refine_uniform(m);
  return m;
}

// ---------------------------------------------------------------------------
// Uniformity

namespace {

int local_index(const Mesh& mesh, int t, int e) {
  const auto& te = mesh.triangle_edges(t);
  for (int i = 0; i < 3; ++i)
    if (te[i] == e) return i;
  return -1;
}

}  // namespace

bool forms_parallelogram(const Mesh& mesh, int e, double rel_tol) {
  const Edge& ed = mesh.edges()[e];
  if (!ed.interior()) return false;
  const auto& v = mesh.vertices();
  const Point q1 = v[mesh.triangles()[ed.k1][local_index(mesh, ed.k1, e)]];
  const Point q2 = v[mesh.triangles()[ed.k2][local_index(mesh, ed.k2, e)]];
  const Point m = mesh.edge_midpoint(e);
  const double scale = std::max(mesh.geometry(ed.k1).diameter, mesh.geometry(ed.k2).diameter);
  return (2.0 * m - q1 - q2).norm() <= rel_tol * scale;
}

bool forms_parallelogram(const std::array<Point, 3>& k1, const std::array<Point, 3>& k2,
                         double rel_tol) {
  double scale = 0.0;
  for (int i = 0; i < 3; ++i)
    scale = std::max({scale, (k1[i] - k1[(i + 1) % 3]).norm(), (k2[i] - k2[(i + 1) % 3]).norm()});
  const double tol = rel_tol * scale;
  // Find the shared edge: two vertices of k1 coinciding with two of k2.
  for (int i = 0; i < 3; ++i) {
    const Point& a = k1[(i + 1) % 3];
    const Point& b = k1[(i + 2) % 3];
    for (int j = 0; j < 3; ++j) {
      const Point& c = k2[(j + 1) % 3];
      const Point& d = k2[(j + 2) % 3];
      const bool same = ((a - c).norm() <= tol && (b - d).norm() <= tol) ||
                        ((a - d).norm() <= tol && (b - c).norm() <= tol);
      if (same) return (a + b - k1[i] - k2[j]).norm() <= tol;
    }
  }
  return false;
}

UniformityReport check_uniformity(const Mesh& mesh) {
  UniformityReport r;
  std::vector<char> covered(mesh.num_triangles(), 0);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& ed = mesh.edges()[e];
    if (!ed.interior()) continue;
    ++r.interior_edges;
    if (forms_parallelogram(mesh, e)) {
      ++r.parallelogram_edges;
      covered[ed.k1] = covered[ed.k2] = 1;
    }
  }
  r.kappa = static_cast<int>(std::count(covered.begin(), covered.end(), 0));
  r.parallel_pair_fraction =
      r.interior_edges > 0 ? static_cast<double>(r.parallelogram_edges) / r.interior_edges : 0.0;
  r.is_uniform = r.kappa == 0 && r.parallelogram_edges == r.interior_edges;
  return r;
}

}  // namespace eigx
