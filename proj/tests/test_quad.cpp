#include <cmath>
#include <numbers>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "eigx/quad.hpp"
#include "generators.hpp"

using namespace eigx;

namespace {

double factorial(int n) {
  double r = 1;
  for (int i = 2; i <= n; ++i) r *= i;
  return r;
}

void expect_exact(const TriangleRule& rule) {
  double wsum = 0;
  for (double w : rule.weights) wsum += w;
  EXPECT_NEAR(wsum, 1.0, 1e-15);
  const int d = rule.exact_degree;
  for (int a = 0; a <= d; ++a)
    for (int b = 0; a + b <= d; ++b)
      for (int c = 0; a + b + c <= d; ++c) {
        double q = 0;
        for (std::size_t i = 0; i < rule.points.size(); ++i)
          q += rule.weights[i] * std::pow(rule.points[i][0], a) * std::pow(rule.points[i][1], b) *
               std::pow(rule.points[i][2], c);
        // mean of psi0^a psi1^b psi2^c over any triangle
        const double exact = 2.0 * factorial(a) * factorial(b) * factorial(c) / factorial(a + b + c + 2);
        EXPECT_NEAR(q, exact, 1e-14 * exact) << "degree " << d << " monomial " << a << b << c;
      }
}

}  // namespace

TEST(Quadrature, ShippedRulesAreExact) {
  for (int d : {2, 4, 6}) {
    const auto& r = triangle_rule(d);
    EXPECT_GE(r.exact_degree, d);
    expect_exact(r);
  }
  EXPECT_EQ(triangle_rule(3).exact_degree, 4);
  EXPECT_THROW(triangle_rule(7), ConfigError);
}

TEST(Quadrature, CollapsedRuleExact) {
  for (int d : {3, 8, 14}) expect_exact(collapsed_gauss_rule(d));
}

TEST(Quadrature, ConstantGivesArea) {
  gen::Rng rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto g = gen::geometry(rng);
    EXPECT_NEAR(integrate_triangle(triangle_rule(6), g, [](const Point&) { return 1.0; }), g.area, 1e-15);
  }
}

TEST(Quadrature, BarycentricProduct) {
  const auto g = ElementGeometry::from_vertices(Point(0, 0), Point(1, 0), Point(0, 1));
  const double v = integrate_triangle(triangle_rule(4), g, [&](const Point& x) {
    const auto l = g.barycentric(x);
    return l[0] * l[1] * l[2];
  });
  EXPECT_NEAR(v, 1.0 / 120.0, 1e-16);
}

TEST(Quadrature, SineProductOverSquare) {
  const Mesh m = build_level(Domain::Square2, 6);
  double s = 0;
  for (int t = 0; t < m.num_triangles(); ++t)
    s += integrate_triangle(triangle_rule(6), m.geometry(t), [](const Point& x) {
      return std::sin(std::numbers::pi * x.x()) * std::sin(std::numbers::pi * x.y());
    });
  EXPECT_NEAR(s, 4.0 / (std::numbers::pi * std::numbers::pi), 1e-8);
}

TEST(Quadrature, VectorIntegrand) {
  const auto g = ElementGeometry::from_vertices(Point(0, 0), Point(2, 0), Point(0, 1));
  const Point v = integrate_triangle(triangle_rule(2), g, [](const Point& x) { return Point(x.x(), 1.0); });
  EXPECT_NEAR(v.x(), g.area * g.centroid.x(), 1e-15);
  EXPECT_NEAR(v.y(), g.area, 1e-15);
}

TEST(Quadrature, EdgeRules) {
  const auto three = gauss_legendre(3);
  EXPECT_EQ(three.exact_degree, 5);
  double q = 0;
  for (std::size_t i = 0; i < three.points.size(); ++i) q += three.weights[i] * std::pow(three.points[i], 5);
  EXPECT_NEAR(q, 1.0 / 6.0, 1e-16);
  EXPECT_EQ(default_edge_rule().exact_degree, 9);
  for (int k = 0; k <= 9; ++k) {
    const double v = integrate_edge(default_edge_rule(), Point(0, 0), Point(3, 4),
                                    [&](const Point& x) { return std::pow(x.x() / 3.0, k); });
    EXPECT_NEAR(v, 5.0 / (k + 1), 1e-14);
  }
  EXPECT_NEAR(integrate_edge(default_edge_rule(), Point(1, 1), Point(2, 3), [](const Point&) { return 2.5; }),
              2.5 * std::sqrt(5.0), 1e-14);
}

// int_{e_i} (psi_{i-1} - 1/2)^2 ds = |e_i| / 12
TEST(Quadrature, EdgeBarycentricIdentity) {
  gen::Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto g = gen::geometry(rng);
    for (int i = 0; i < 3; ++i) {
      const int prev = (i + 2) % 3;
      const double v = integrate_edge(default_edge_rule(), g.p[(i + 1) % 3], g.p[(i + 2) % 3],
                                      [&](const Point& x) {
                                        const double d = g.barycentric(x)[prev] - 0.5;
                                        return d * d;
                                      });
      EXPECT_NEAR(v, g.edge_length[i] / 12.0, 1e-13 * g.edge_length[i]);
    }
  }
}

// Integrate, then map affinely, equals mapping first.
TEST(QuadratureProperty, AffineInvariance) {
  gen::Rng rng(9);
  for (int trial = 0; trial < 30; ++trial) {
    const auto g = gen::geometry(rng);
    Eigen::Matrix2d A;
    A << gen::uniform(rng, 0.5, 2), gen::uniform(rng, -0.5, 0.5), gen::uniform(rng, -0.5, 0.5),
        gen::uniform(rng, 0.5, 2);
    const Point b = gen::point(rng);
    const auto mapped = ElementGeometry::from_vertices(A * g.p[0] + b, A * g.p[1] + b, A * g.p[2] + b);
    auto f = [](const Point& x) { return x.x() * x.x() * x.y() - 3 * x.y() * x.y() * x.y() + x.x(); };
    const double direct = integrate_triangle(triangle_rule(4), mapped, f);
    const double pulled = integrate_triangle(triangle_rule(4), g, [&](const Point& x) { return f(A * x + b); }) *
                          std::abs(A.determinant());
    EXPECT_NEAR(direct, pulled, 1e-13 * std::max(1.0, std::abs(direct)));
  }
}
