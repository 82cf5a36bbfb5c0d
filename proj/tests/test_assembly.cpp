#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include "eigx/analysis.hpp"
#include "generators.hpp"

using namespace eigx;

TEST(Assembly, CrInteriorSelfEnergyOnSquare2) {
  const Mesh m = build_initial(Domain::Square2);
  const FeSpace cr(m, SpaceKind::CR);
  const SparseSymMatrix k = assemble_stiffness(cr);
  int interior = -1;
  for (int e = 0; e < m.num_edges(); ++e)
    if (m.edges()[e].interior()) interior = e;
  ASSERT_GE(interior, 0);
  EXPECT_NEAR(k.coeff(interior, interior), 8.0, 1e-14);  // 4 from each right triangle
  for (int e = 0; e < m.num_edges(); ++e) {
    if (e == interior) continue;
    EXPECT_EQ(k.coeff(e, e), 1.0);  // eliminated
    EXPECT_EQ(k.coeff(e, interior), 0.0);
  }
}

TEST(Assembly, SplitCoefficientMatchesAreaBelowInterface) {
  // area of the jump triangle below x2 = 1, integrated by hand
  const double s3 = std::sqrt(3.0);
  const double exact = 1.0 / (4.0 * s3) + 1.0 - s3 / 2.0;
  for (int level = 1; level <= 4; ++level) {
    const Mesh m = build_level(Domain::TriangleJump, level);
    const CoefficientField a = CoefficientField::split_at_height(m, 1.0, 2.0, 1.0);
    double below = 0.0;
    for (int t = 0; t < m.num_triangles(); ++t) {
      const ElementGeometry g = m.geometry(t);
      EXPECT_GE(a(t), 1.0);
      EXPECT_LE(a(t), 2.0);
      if (g.p[0].y() < 1 && g.p[1].y() < 1 && g.p[2].y() < 1) EXPECT_EQ(a(t), 2.0);
      below += (a(t) - 1.0) * g.area;
    }
    EXPECT_NEAR(below, exact, 1e-14) << "level " << level;
  }
}

TEST(Assembly, SymmetricByConstruction) {
  const Mesh m = build_level(Domain::Square5, 2);
  for (SpaceKind kind : {SpaceKind::CR, SpaceKind::ECR, SpaceKind::P1, SpaceKind::P3}) {
    const Eigen::MatrixXd d = assemble_stiffness(FeSpace(m, kind)).dense();
    EXPECT_EQ((d - d.transpose()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Assembly, LinearReproduction) {
  const Mesh m = build_level(Domain::Square5, 2);
  const FeSpace cr(m, SpaceKind::CR);
  const CoefficientField a = CoefficientField::from_centroids(m, [](const Point& x) { return 1.0 + x.x(); });
  AssemblyOptions keep;
  keep.eliminate_dirichlet = false;
  const SparseSymMatrix k = assemble_stiffness(cr, a, keep);
  const Point gv(0.3, -1.1), gw(2.0, 0.5);
  const Vector v = interp_cr(linear_field(0.2, gv), cr).coeffs();
  const Vector w = interp_cr(linear_field(-1.0, gw), cr).coeffs();
  double exact = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) exact += a(t) * m.geometry(t).area * gv.dot(gw);
  EXPECT_NEAR(v.dot(k.multiply(w)), exact, 1e-12 * std::abs(exact));
}

TEST(Assembly, ConstantsInNeumannKernel) {
  const Mesh m = build_level(Domain::Square5, 2);
  AssemblyOptions keep;
  keep.eliminate_dirichlet = false;
  for (SpaceKind kind : {SpaceKind::CR, SpaceKind::ECR, SpaceKind::P1, SpaceKind::P3}) {
    const FeSpace s(m, kind);
    const SparseSymMatrix k = assemble_stiffness(s, keep);
    const Vector one = kind == SpaceKind::P1 || kind == SpaceKind::P3
                           ? interp_nodal(linear_field(1.0, Point::Zero()), s).coeffs()
                           : Vector::Ones(s.n_dofs());
    EXPECT_LE(k.multiply(one).cwiseAbs().maxCoeff(), 1e-11 * k.norm_inf()) << to_string(kind);
  }
}

TEST(Assembly, PositiveDefiniteAfterElimination) {
  for (Domain d : {Domain::Square2, Domain::Square5, Domain::TriangleJump, Domain::Crack8}) {
    const Mesh m = build_level(d, 2);
    for (SpaceKind kind : {SpaceKind::CR, SpaceKind::ECR, SpaceKind::P3}) {
      const Eigen::MatrixXd k = assemble_stiffness(FeSpace(m, kind)).dense();
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(k).eigenvalues().minCoeff(), 0.0);
    }
  }
}

TEST(Assembly, Deterministic) {
  const Mesh m = build_level(Domain::Crack8, 3);
  const FeSpace s(m, SpaceKind::ECR);
  EXPECT_EQ(to_matrix_market(assemble_stiffness(s)), to_matrix_market(assemble_stiffness(s)));
}

TEST(Mass, P0RowSumsAreAreas) {
  const Mesh m = build_level(Domain::Square5, 2);
  const SparseSymMatrix mm = assemble_mass(FeSpace(m, SpaceKind::P0));
  const Vector r = mm.multiply(Vector::Ones(m.num_triangles()));
  for (int t = 0; t < m.num_triangles(); ++t) EXPECT_NEAR(r[t], m.geometry(t).area, 1e-15);
}

TEST(Mass, CrOnesGiveArea) {
  const Mesh m = build_level(Domain::TriangleJump, 2);
  const FeSpace cr(m, SpaceKind::CR);
  const Vector one = Vector::Ones(cr.n_dofs());
  EXPECT_NEAR(one.dot(assemble_mass(cr).multiply(one)), m.total_area(), 1e-13);
  const FeSpace ecr(m, SpaceKind::ECR);
  Vector e1 = Vector::Zero(ecr.n_dofs());
  e1.head(m.num_edges()).setOnes();
  e1.tail(m.num_triangles()).setOnes();
  EXPECT_NEAR(e1.dot(assemble_mass(ecr).multiply(e1)), m.total_area(), 1e-13);
}

TEST(Mass, EcrElementMatrixMatchesHighOrderQuadrature) {
  const Mesh m = build_initial(Domain::Square2);
  const FeSpace ecr(m, SpaceKind::ECR);
  const Eigen::MatrixXd mm = assemble_mass(ecr).dense();
  const TriangleRule rule = collapsed_gauss_rule(10);
  Eigen::MatrixXd ref = Eigen::MatrixXd::Zero(ecr.n_dofs(), ecr.n_dofs());
  for (int t = 0; t < m.num_triangles(); ++t) {
    const auto g = m.geometry(t);
    const auto dofs = ecr.local_dofs(t);
    const Eigen::MatrixXd loc = integrate_triangle(rule, g, [&](const Point& x) {
      LocalValues v;
      eval_local_basis(SpaceKind::ECR, g, x, &v, nullptr);
      return Eigen::MatrixXd(v * v.transpose());
    });
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) ref(dofs[i], dofs[j]) += loc(i, j);
  }
  EXPECT_LE((mm - ref).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Dirichlet, EliminationCounts) {
  const FeSpace sq(build_initial(Domain::Square2), SpaceKind::CR);
  const ReducedSystem r = apply_dirichlet(sq, assemble_stiffness(sq));
  EXPECT_EQ(r.matrix.rows(), 1);
  EXPECT_EQ(r.eliminated.size(), 4u);

  const Mesh jump = build_level(Domain::TriangleJump, 1);
  const FeSpace cr(jump, SpaceKind::CR);
  for (int e = 0; e < jump.num_edges(); ++e)
    if (jump.edges()[e].tag == BoundaryTag::Neumann) EXPECT_FALSE(cr.is_dirichlet(e));

  // crack faces keep their own DOFs under the Neumann condition
  const Mesh crack = build_level(Domain::Crack8, 2);
  const FeSpace cn(crack, SpaceKind::CR, CrackBC::Neumann);
  int crack_edges = 0, dirichlet_edges = 0;
  for (const auto& e : crack.edges()) {
    crack_edges += is_crack(e.tag);
    dirichlet_edges += e.tag == BoundaryTag::Dirichlet;
  }
  EXPECT_EQ(cn.n_free(), crack.num_edges() - dirichlet_edges);
  EXPECT_EQ(cn.n_free(), crack.num_interior_edges() + crack_edges);
}

TEST(Dirichlet, ScatterRestrictRoundTrip) {
  const FeSpace s(build_level(Domain::Square5, 2), SpaceKind::ECR);
  const ReducedSystem r = apply_dirichlet(s, assemble_stiffness(s));
  Vector full = Vector::LinSpaced(s.n_dofs(), 1.0, 2.0);
  const Vector back = r.scatter(r.restrict(full));
  for (int i = 0; i < s.n_dofs(); ++i) EXPECT_EQ(back[i], s.is_dirichlet(i) ? 0.0 : full[i]);
}

TEST(Dirichlet, EdgeMaskValidation) {
  const FeSpace s(build_initial(Domain::Square2), SpaceKind::CR);
  EXPECT_NO_THROW(dirichlet_mask_from_edges(s, {0, 1}));
  EXPECT_THROW(dirichlet_mask_from_edges(s, {99}), PreconditionError);
}

TEST(Coefficient, RejectsNonPositive) {
  EXPECT_THROW(CoefficientField({1.0, 0.0}), PreconditionError);
  EXPECT_THROW(assemble_stiffness(FeSpace(build_initial(Domain::Square2), SpaceKind::RT0)), PreconditionError);
}

TEST(Mixed, ZeroLoadGivesZero) {
  const Mesh m = build_level(Domain::Square5, 2);
  const FeSpace rt(m, SpaceKind::RT0);
  const MixedSolution s = solve_mixed(rt, FeFunction(FeSpace(m, SpaceKind::P0)));
  EXPECT_EQ(s.sigma.coeffs().cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ(s.u.coeffs().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Mixed, DiscreteConservation) {
  const auto pair = square_eigenpair(1, 1);
  const Mesh m = build_level(Domain::Square2, 4);
  const FeSpace rt(m, SpaceKind::RT0);
  ScalarField lu{[&](const Point& x) { return pair.lambda * pair.u.value(x); }, {}, {}};
  const FeFunction load = project_p0(lu, m);
  const MixedSolution s = solve_mixed(rt, load);
  for (int t = 0; t < m.num_triangles(); ++t)
    EXPECT_NEAR(s.sigma.divergence(t), -load.coeffs()[t], 1e-12 * pair.lambda * 2);
}

TEST(Mixed, FluxConvergesAtFirstOrder) {
  const auto pair = square_eigenpair(1, 1);
  std::vector<double> err;
  for (int level = 3; level <= 6; ++level) {
    const Mesh m = build_level(Domain::Square2, level);
    ScalarField lu{[&](const Point& x) { return pair.lambda * pair.u.value(x); }, {}, {}};
    const MixedSolution s = solve_mixed(FeSpace(m, SpaceKind::RT0), project_p0(lu, m));
    double e = 0;
    for (int t = 0; t < m.num_triangles(); ++t)
      e += integrate_triangle(triangle_rule(6), m.geometry(t), [&](const Point& x) {
        return (pair.u.gradient(x) - s.sigma.vector_value(t, x)).squaredNorm();
      });
    err.push_back(std::sqrt(e));
  }
  for (std::size_t i = 1; i < err.size(); ++i) EXPECT_GE(std::log2(err[i - 1] / err[i]), 0.95);
}

TEST(MatrixMarket, Header) {
  const SparseSymMatrix k = assemble_stiffness(FeSpace(build_initial(Domain::Square2), SpaceKind::CR));
  const std::string mm = to_matrix_market(k);
  EXPECT_EQ(mm.rfind("%%MatrixMarket matrix coordinate real symmetric", 0), 0u);
}
