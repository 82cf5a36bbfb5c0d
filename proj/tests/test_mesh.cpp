#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "eigx/mesh.hpp"
#include "eigx/mesh_io.hpp"
#include "generators.hpp"

using namespace eigx;

namespace {

constexpr Domain kDomains[] = {Domain::Square2, Domain::Square5, Domain::TriangleJump, Domain::Crack8};

int boundary_edges(const Mesh& m) {
  return static_cast<int>(std::count_if(m.edges().begin(), m.edges().end(),
                                        [](const Edge& e) { return !e.interior(); }));
}

double signed_area(const Mesh& m, int t) {
  const auto& tri = m.triangles()[t];
  const Point a = m.vertices()[tri[1]] - m.vertices()[tri[0]];
  const Point b = m.vertices()[tri[2]] - m.vertices()[tri[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

}  // namespace

TEST(MeshBuild, Square2Counts) {
  const Mesh m = build_initial(Domain::Square2);
  EXPECT_EQ(m.num_triangles(), 2);
  EXPECT_EQ(m.num_edges(), 5);
  EXPECT_EQ(m.num_interior_edges(), 1);
  EXPECT_EQ(m.level(), 1);
}

TEST(MeshBuild, Square5VertexSet) {
  const Mesh m = build_initial(Domain::Square5);
  EXPECT_EQ(m.num_triangles(), 5);
  std::set<std::pair<double, double>> got, want{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0.9}, {0.05, 0}, {0.9, 1}};
  for (const auto& v : m.vertices()) got.emplace(v.x(), v.y());
  EXPECT_EQ(got, want);
}

TEST(MeshBuild, Crack8Level1) {
  const Mesh m = build_initial(Domain::Crack8);
  EXPECT_EQ(m.num_triangles(), 8);
  EXPECT_TRUE(m.crack_pairs().empty());
  EXPECT_NEAR(m.total_area(), 4.0, 1e-14);
}

TEST(MeshBuild, Crack8Level2DuplicatesSlitVertex) {
  const Mesh m = refine_uniform(build_initial(Domain::Crack8));
  ASSERT_EQ(m.crack_pairs().size(), 1u);
  const auto [a, b] = m.crack_pairs()[0];
  EXPECT_NE(a, b);
  EXPECT_EQ(m.vertices()[a], Point(0.5, 0.0));
  EXPECT_EQ(m.vertices()[b], Point(0.5, 0.0));
  int upper = 0, lower = 0;
  for (const auto& e : m.edges()) {
    const Point p = m.vertices()[e.v0], q = m.vertices()[e.v1];
    const bool tip_segment = (p.isZero() && q == Point(0.5, 0)) || (q.isZero() && p == Point(0.5, 0));
    if (!tip_segment) continue;
    upper += e.tag == BoundaryTag::CrackUpper;
    lower += e.tag == BoundaryTag::CrackLower;
  }
  EXPECT_EQ(upper, 1);
  EXPECT_EQ(lower, 1);
}

TEST(MeshBuild, TriangleJumpTags) {
  const Mesh m = build_initial(Domain::TriangleJump);
  EXPECT_EQ(m.num_triangles(), 4);
  for (const auto& e : m.edges()) {
    if (!e.interior()) {
      const bool on_gamma3 = std::abs(m.vertices()[e.v0].x() - 1.0) < 1e-14 &&
                             std::abs(m.vertices()[e.v1].x() - 1.0) < 1e-14;
      EXPECT_EQ(e.tag, on_gamma3 ? BoundaryTag::Neumann : BoundaryTag::Dirichlet);
    }
  }
}

TEST(MeshRefine, Square2CountsByLevel) {
  Mesh m = build_initial(Domain::Square2);
  m = refine_uniform(m);
  EXPECT_EQ(m.num_triangles(), 8);
  EXPECT_EQ(m.num_edges(), 16);
  EXPECT_EQ(m.level(), 2);
  for (int k = 2; k <= 6; ++k) {
    m = refine_uniform(m);
    EXPECT_EQ(m.num_triangles(), 2 << (2 * k));
  }
}

// Structural invariants on every built-in domain and the first few levels.
TEST(MeshProperty, StructuralInvariants) {
  for (Domain d : kDomains) {
    Mesh m = build_initial(d);
    const double area0 = m.total_area();
    const int n0 = m.num_triangles();
    for (int level = 1; level <= 4; ++level) {
      SCOPED_TRACE(std::string(to_string(d)) + " level " + std::to_string(level));
      EXPECT_EQ(m.num_triangles(), n0 << (2 * (level - 1)));
      EXPECT_EQ(3 * m.num_triangles(), 2 * m.num_interior_edges() + boundary_edges(m));
      EXPECT_NEAR(m.total_area(), area0, 1e-13 * area0);
      for (int t = 0; t < m.num_triangles(); ++t) EXPECT_GT(signed_area(m, t), 0.0);
      for (int e = 0; e < m.num_edges(); ++e) {
        const Edge& ed = m.edges()[e];
        if (!ed.interior()) {
          EXPECT_NE(ed.tag, BoundaryTag::Interior);
          continue;
        }
        EXPECT_GT(ed.k1, ed.k2);
        const Point dc = m.geometry(ed.k2).centroid - m.geometry(ed.k1).centroid;
        EXPECT_GT(m.edge_normal(e).dot(dc), 0.0);
      }
      // every triangle sees each of its edges with the right sign
      for (int t = 0; t < m.num_triangles(); ++t) {
        const auto g = m.geometry(t);
        for (int i = 0; i < 3; ++i) {
          const int e = m.triangle_edges(t)[i];
          EXPECT_NEAR(m.edge_signs(t)[i] * m.edge_normal(e).dot(g.normal[i]), 1.0, 1e-13);
        }
      }
      m = refine_uniform(m);
    }
  }
}

TEST(MeshProperty, ElementGeometryRelations) {
  gen::Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = gen::geometry(rng);
    Point sum = Point::Zero();
    for (int i = 0; i < 3; ++i) {
      EXPECT_NEAR(g.height[i] * g.edge_length[i], 2 * g.area, 1e-13 * g.area);
      const Point expect = -g.normal[i] / g.height[i];
      EXPECT_LE((g.grad_bary[i] - expect).norm(), 1e-13 * expect.norm());
      EXPECT_NEAR(g.normal[i].dot(g.tangent[i]), 0.0, 1e-13);
      EXPECT_NEAR(g.normal[i].norm(), 1.0, 1e-13);
      EXPECT_NEAR(g.tangent[i].norm(), 1.0, 1e-13);
      sum += g.grad_bary[i];
    }
    EXPECT_LE(sum.norm(), 1e-13 * g.grad_bary[0].norm());
    const double h2 = g.edge_length[0] * g.edge_length[0] + g.edge_length[1] * g.edge_length[1] +
                      g.edge_length[2] * g.edge_length[2];
    EXPECT_NEAR(g.h2, h2, 1e-14 * h2);
  }
}

TEST(MeshProperty, UniformMeshHasConstantH2) {
  const Mesh m = build_level(Domain::Square2, 4);
  const double h2 = m.geometry(0).h2;
  for (int t = 1; t < m.num_triangles(); ++t) EXPECT_NEAR(m.geometry(t).h2, h2, 1e-13 * h2);
}

TEST(MeshUniformity, Square2IsUniform) {
  for (int level = 1; level <= 4; ++level) {
    const auto r = check_uniformity(build_level(Domain::Square2, level));
    EXPECT_TRUE(r.is_uniform);
    EXPECT_EQ(r.kappa, 0);
  }
}

TEST(MeshUniformity, Square5FractionGrows) {
  double prev = 0.0;
  for (int level = 2; level <= 6; ++level) {
    const auto r = check_uniformity(build_level(Domain::Square5, level));
    EXPECT_FALSE(r.is_uniform);
    EXPECT_GT(r.parallel_pair_fraction, 0.0);
    EXPECT_LT(r.parallel_pair_fraction, 1.0);
    EXPECT_GE(r.parallel_pair_fraction, prev);
    prev = r.parallel_pair_fraction;
  }
}

TEST(MeshUniformity, ParallelogramTest) {
  const std::array<Point, 3> k1{Point(0, 0), Point(1, 0), Point(0, 1)};
  const std::array<Point, 3> k2{Point(1, 1), Point(0, 1), Point(1, 0)};
  EXPECT_TRUE(forms_parallelogram(k1, k2));
  const std::array<Point, 3> k3{Point(1.001, 1), Point(0, 1), Point(1, 0)};
  EXPECT_FALSE(forms_parallelogram(k1, k3));
}

TEST(MeshRefine, Deterministic) {
  for (Domain d : kDomains) EXPECT_TRUE(build_level(d, 3) == build_level(d, 3));
}

TEST(MeshIo, JsonRoundTrip) {
  for (Domain d : kDomains) {
    const Mesh m = build_level(d, 2);
    const Mesh back = mesh_from_json(mesh_to_json(m));
    EXPECT_TRUE(m == back) << to_string(d);
  }
}

TEST(MeshIo, RejectsMalformedInput) {
  EXPECT_THROW(mesh_from_json("{"), ConfigError);
  EXPECT_THROW(mesh_from_json(R"({"level": 1})"), ConfigError);
}

TEST(MeshBuild, DomainNames) {
  EXPECT_EQ(domain_from_string("crack"), Domain::Crack8);
  EXPECT_EQ(domain_from_string("square_nonuniform"), Domain::Square5);
  EXPECT_THROW(domain_from_string("circle"), ConfigError);
}

TEST(MeshBuild, RejectsClockwiseTriangle) {
  std::vector<Point> v{Point(0, 0), Point(1, 0), Point(0, 1)};
  std::vector<Mesh::Triangle> t{{0, 2, 1}};
  std::vector<Mesh::SideTags> tags{{BoundaryTag::Dirichlet, BoundaryTag::Dirichlet, BoundaryTag::Dirichlet}};
  EXPECT_THROW(Mesh(v, t, tags, 1), PreconditionError);
}
