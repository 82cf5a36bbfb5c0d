#include <numbers>

#include <Eigen/LU>
#include <gtest/gtest.h>

#include "eigx/analysis.hpp"
#include "eigx/extrapolation.hpp"
#include "generators.hpp"

using namespace eigx;

namespace {
const double kPi = std::numbers::pi;
}

// Frozen from tests/oracles/gamma_oracle.py (exact symbolic integration).
TEST(Gamma, FrozenDiagonalMeshValues) {
  for (int level = 1; level <= 4; ++level) {
    const GammaConstants g = gamma_constants(build_level(Domain::Square2, level));
    for (std::size_t t = 0; t < g.g11.size(); ++t) {
      EXPECT_NEAR(g.g11[t], 1.0 / 6.0, 1e-14);
      EXPECT_NEAR(g.g12[t], 0.0, 1e-14);
      EXPECT_NEAR(g.g22[t], 1.0 / 12.0, 1e-14);
    }
  }
}

TEST(Gamma, FrozenScaleneValues) {
  const auto geo = ElementGeometry::from_vertices(Point(0, 0), Point(2, 0), Point(0.5, 1));
  const auto g = element_gamma(geo, 2.0);
  EXPECT_NEAR(g[0], 11.0 / 96.0, 1e-14);
  EXPECT_NEAR(g[1], -1.0 / 32.0, 1e-14);
  EXPECT_NEAR(g[2], 107.0 / 768.0, 1e-14);
}

TEST(Gamma, LevelIndependentOnUniformMesh) {
  for (int level = 2; level <= 5; ++level) {
    const GammaConstants a = gamma_constants(build_level(Domain::Square2, level));
    const GammaConstants b = gamma_constants(build_level(Domain::Square2, level + 1));
    EXPECT_TRUE(a.is_constant());
    EXPECT_NEAR(a.g11[0], b.g11[0], 1e-12 * a.g11[0]);
    EXPECT_NEAR(a.g22[0], b.g22[0], 1e-12 * a.g22[0]);
    EXPECT_NEAR(a.g12[0], b.g12[0], 1e-12 * a.g11[0]);
  }
}

TEST(Gamma, NonuniformMeshVaries) {
  EXPECT_FALSE(gamma_constants(build_level(Domain::Square5, 2)).is_constant());
}

TEST(RtError, QuadraticExamples) {
  gen::Rng rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    const auto g = gen::geometry(rng);
    const double h = g.diameter;
    const auto gm = element_gamma(g, h);
    // radial quadratic: grad w lies in RT0
    const auto radial = quadratic_field(0.3, Point(1, -2), 2 * Eigen::Matrix2d::Identity());
    EXPECT_NEAR(rt_error_quadratic(radial, g), 0.0, 1e-14);
    EXPECT_NEAR(rt_error_direct(radial, g, triangle_rule(4)), 0.0, 1e-14);
    Eigen::Matrix2d xy;
    xy << 0, 1, 1, 0;
    EXPECT_NEAR(rt_error_quadratic(quadratic_field(0, Point::Zero(), xy), g), h * h * gm[2] * g.area, 1e-14);
    Eigen::Matrix2d xx;
    xx << 2, 0, 0, 0;
    const auto x2 = quadratic_field(0, Point::Zero(), xx);
    EXPECT_NEAR(rt_error_quadratic(x2, g), h * h * gm[0] * g.area, 1e-14);
    EXPECT_NEAR(rt_error_direct(x2, g, triangle_rule(4)), h * h * gm[0] * g.area, 1e-13);
  }
}

// 50 random quadratics per mesh, expansion against direct quadrature.
TEST(RtErrorProperty, ExpansionMatchesDirect) {
  gen::Rng rng(41);
  for (Domain d : {Domain::Square2, Domain::Square5}) {
    const Mesh m = build_level(d, 2);
    for (int trial = 0; trial < 50; ++trial) {
      const auto q = gen::quadratic(rng);
      const auto geo = m.geometry(static_cast<int>(rng() % m.num_triangles()));
      const double e = rt_error_quadratic(q.field(), geo);
      const double dir = rt_error_direct(q.field(), geo, triangle_rule(4));
      EXPECT_NEAR(e, dir, 1e-11 * std::max(dir, q.H.squaredNorm() * geo.area * geo.diameter * geo.diameter));
    }
  }
}

TEST(RtError, RejectsNonQuadratic) {
  const auto g = ElementGeometry::from_vertices(Point(0, 0), Point(1, 0), Point(0, 1));
  EXPECT_THROW(rt_error_quadratic(square_eigenpair(1, 1).u, g), PreconditionError);
  ScalarField no_hessian = linear_field(1, Point(1, 1));
  no_hessian.hessian = nullptr;
  EXPECT_THROW(rt_error_quadratic(no_hessian, g), PreconditionError);
}

TEST(RtError, FieldExpansion) {
  const Mesh m = build_level(Domain::Square2, 3);
  const RtErrorField lin = rt_error_field(linear_field(1, Point(2, 3)), m);
  EXPECT_NEAR(lin.direct, 0.0, 1e-20);
  EXPECT_NEAR(lin.expansion, 0.0, 1e-20);
  std::vector<double> diff;
  for (int level = 4; level <= 7; ++level) {
    const RtErrorField f = rt_error_field(square_eigenpair(1, 1).u, build_level(Domain::Square2, level));
    diff.push_back(std::abs(f.direct - f.expansion));
  }
  for (std::size_t i = 1; i < diff.size(); ++i) EXPECT_GE(std::log2(diff[i - 1] / diff[i]), 3.5);
}

// For u = 2 sin(pi x) sin(pi y): u11 - u22 = 0 and ||u12||^2 = pi^4, so the
// expansion is h^2 gamma22 pi^4.
TEST(RtError, SineHessianTerms) {
  const Mesh m = build_level(Domain::Square2, 4);
  const GammaConstants g = gamma_constants(m);
  const double v = gamma_hessian_terms(square_eigenpair(1, 1).u, m, g, collapsed_gauss_rule(14));
  EXPECT_NEAR(v, g.h * g.h * g.g22[0] * std::pow(kPi, 4), 1e-10 * v);
}

TEST(Parallelogram, ConstantsGiveZero) {
  const std::array<Point, 3> k1{Point(0, 0), Point(1, 0), Point(0, 1)};
  const std::array<Point, 3> k2{Point(1, 1), Point(0, 1), Point(1, 0)};
  const auto c = linear_field(2.0, Point::Zero());
  EXPECT_EQ(parallelogram_orthogonality(k1, k2, c, c, NcElement::CR), 0.0);
}

TEST(ParallelogramProperty, OrthogonalUnderAffineMaps) {
  gen::Rng rng(43);
  const std::array<Point, 3> k1{Point(0, 0), Point(1, 0), Point(0, 1)};
  const std::array<Point, 3> k2{Point(1, 1), Point(0, 1), Point(1, 0)};
  for (int trial = 0; trial < 100; ++trial) {
    const auto q = gen::quadratic(rng);
    const auto v = linear_field(gen::uniform(rng, -1, 1), gen::point(rng));
    for (auto which : {NcElement::CR, NcElement::ECR}) {
      EXPECT_LE(std::abs(parallelogram_orthogonality(k1, k2, q.field(), v, which)), 1e-13);
      Eigen::Matrix2d A;
      do {
        A << gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2);
      } while (std::abs(A.determinant()) < 0.3);
      const Point b = gen::point(rng);
      auto map = [&](const std::array<Point, 3>& k) {
        std::array<Point, 3> r{A * k[0] + b, A * k[1] + b, A * k[2] + b};
        if (A.determinant() < 0) std::swap(r[1], r[2]);
        return r;
      };
      EXPECT_LE(std::abs(parallelogram_orthogonality(map(k1), map(k2), q.field(), v, which)), 1e-12);
    }
  }
}

TEST(Parallelogram, PerturbedPairRejected) {
  const std::array<Point, 3> k1{Point(0, 0), Point(1, 0), Point(0, 1)};
  const std::array<Point, 3> k2{Point(1.001, 1), Point(0, 1), Point(1, 0)};
  const auto w = quadratic_field(0, Point::Zero(), Eigen::Matrix2d::Identity());
  EXPECT_THROW(parallelogram_orthogonality(k1, k2, w, linear_field(1, Point(1, 0)), NcElement::ECR),
               PreconditionError);
}

TEST(Marini, ZeroLoad) {
  const auto zero = linear_field(0, Point::Zero());
  const MariniReport r = verify_marini(build_level(Domain::Square2, 3), 0.0, zero);
  EXPECT_EQ(r.cr, 0.0);
  EXPECT_EQ(r.ecr, 0.0);
}

TEST(Marini, RelationsHoldOnBothMeshes) {
  const auto p = square_eigenpair(1, 1);
  for (auto [d, level] : {std::pair{Domain::Square2, 4}, std::pair{Domain::Square5, 3}}) {
    const MariniReport r = verify_marini(build_level(d, level), p.lambda, p.u);
    EXPECT_LE(r.cr, 1e-9);
    EXPECT_LE(r.ecr, 1e-9);
  }
}

TEST(Marini, RequiresDirichletBoundary) {
  const auto p = square_eigenpair(1, 1);
  EXPECT_THROW(verify_marini(build_level(Domain::TriangleJump, 1), p.lambda, p.u), PreconditionError);
}

TEST(ErrorIdentity, HoldsOnSquareLevels) {
  const auto p = square_eigenpair(1, 1);
  for (auto which : {NcElement::CR, NcElement::ECR})
    for (int level = 3; level <= 5; ++level) {
      const IdentityReport r = error_identity_check(build_level(Domain::Square2, level), which, p);
      EXPECT_LE(r.residual, 1e-8) << to_string(which) << " level " << level;
      EXPECT_LE(r.commuting_residual, 1e-8);
      EXPECT_GT(r.lhs, 0.0);  // lower bounds
    }
}

TEST(Expansion, CrTermsBehave) {
  const auto p = square_eigenpair(1, 1);
  const ExpansionReport rep = decompose_error_levels(Domain::Square2, 4, 6, NcElement::CR, p);
  ASSERT_EQ(rep.rows.size(), 3u);
  std::vector<double> dev, small, res, pred;
  for (const auto& row : rep.rows) {
    const double target = -p.lambda * p.lambda * row.H2 / 72.0;
    dev.push_back(std::abs(row.term("I_CR") - target) / std::abs(target));
    small.push_back(std::abs(row.term("I_RT")) + std::abs(row.term("I_CR1")) + std::abs(row.term("I_CR2")));
    res.push_back(std::abs(row.residual));
    pred.push_back(std::abs(row.predicted_residual));
    EXPECT_NEAR(row.term("lambda2_H2_144"), p.lambda * p.lambda * row.H2 / 144.0, 1e-12);
  }
  for (std::size_t i = 1; i < dev.size(); ++i) {
    EXPECT_LT(dev[i], dev[i - 1]);
    EXPECT_GE(std::log2(small[i - 1] / small[i]), 3.0);
    EXPECT_GE(std::log2(res[i - 1] / res[i]), 3.0);
    EXPECT_GE(std::log2(pred[i - 1] / pred[i]), 3.0);
  }
  EXPECT_THROW(rep.rows[0].term("nope"), PreconditionError);
  const std::string csv = expansion_csv(rep);
  EXPECT_EQ(csv.substr(0, csv.find('\n')).find("level,h,H2"), 0u);
}

TEST(Expansion, EcrLeadingTerm) {
  const auto p = square_eigenpair(1, 1);
  const ExpansionReport rep = decompose_error_levels(Domain::Square2, 4, 6, NcElement::ECR, p);
  for (std::size_t i = 1; i < rep.rows.size(); ++i) {
    EXPECT_GE(std::log2(std::abs(rep.rows[i - 1].residual) / std::abs(rep.rows[i].residual)), 3.0);
    EXPECT_GE(std::log2(std::abs(rep.rows[i - 1].predicted_residual) / std::abs(rep.rows[i].predicted_residual)),
              3.0);
  }
}

TEST(Superclose, SecondOrder) {
  const auto p = square_eigenpair(1, 1);
  for (auto which : {NcElement::CR, NcElement::ECR}) {
    const ExpansionReport rep = decompose_error_levels(Domain::Square2, 4, 6, which, p);
    for (std::size_t i = 1; i < rep.rows.size(); ++i)
      EXPECT_GE(std::log2(rep.rows[i - 1].superclose / rep.rows[i].superclose), 1.9) << to_string(which);
  }
}

TEST(Analysis, ExactPairs) {
  const auto vals = square_exact_eigenvalues(4);
  const double pi2 = kPi * kPi;
  EXPECT_NEAR(vals[0], 2 * pi2, 1e-13);
  EXPECT_NEAR(vals[1], 5 * pi2, 1e-13);
  EXPECT_NEAR(vals[2], 5 * pi2, 1e-13);
  EXPECT_NEAR(vals[3], 8 * pi2, 1e-13);
  const auto p = square_eigenpair(1, 2);
  const Point x(0.3, 0.7);
  EXPECT_NEAR(-p.u.hessian(x).trace(), p.lambda * p.u.value(x), 1e-11);
  EXPECT_EQ(nc_element_from_string("ecr"), NcElement::ECR);
  EXPECT_THROW(nc_element_from_string("p2"), ConfigError);
}
