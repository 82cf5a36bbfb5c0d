#include <numbers>

#include <gtest/gtest.h>

#include "eigx/analysis.hpp"
#include "generators.hpp"

using namespace eigx;

namespace {

SparseSymMatrix diag(std::initializer_list<double> d) {
  std::vector<Eigen::Triplet<double>> t;
  int i = 0;
  for (double v : d) t.emplace_back(i, i, v), ++i;
  SparseSymMatrix::Storage s(i, i);
  s.setFromTriplets(t.begin(), t.end());
  return SparseSymMatrix(s);
}

struct Pencil {
  SparseSymMatrix a, b;
};

Pencil pencil(Domain d, int level, SpaceKind kind) {
  const FeSpace s(build_level(d, level), kind, CrackBC::Dirichlet);
  const CoefficientField c = d == Domain::TriangleJump
                                 ? CoefficientField::from_centroids(s.mesh(), [](const Point& x) { return x.y() < 1 ? 2.0 : 1.0; })
                                 : CoefficientField::constant(s.mesh());
  const ReducedSystem k = apply_dirichlet(s, assemble_stiffness(s, c));
  const ReducedSystem m = apply_dirichlet(s, assemble_mass(s));
  return {k.matrix, m.matrix};
}

}  // namespace

TEST(LinearSolve, Identity) {
  const SparseSymMatrix id = diag({1, 1, 1});
  Vector b(3);
  b << 1, -2, 3;
  EXPECT_EQ(solve_sym_linear(id, b), b);
}

TEST(LinearSolve, SingularReportsPivot) {
  try {
    solve_sym_linear(diag({1, 0, 2}), Vector::Ones(3));
    FAIL() << "expected SingularMatrixError";
  } catch (const SingularMatrixError& e) {
    EXPECT_EQ(e.pivot(), 1);
  }
}

TEST(LinearSolve, CrSourceResidual) {
  const auto pair = square_eigenpair(1, 1);
  const Mesh m = build_level(Domain::Square2, 4);
  const FeSpace cr(m, SpaceKind::CR);
  ScalarField lu{[&](const Point& x) { return pair.lambda * pair.u.value(x); }, {}, {}};
  const FeFunction load = project_p0(lu, m);
  const ReducedSystem k = apply_dirichlet(cr, assemble_stiffness(cr));
  // rhs_i = int f phi_i with f piecewise constant: f_K |K| / 3 per CR basis
  Vector rhs = Vector::Zero(cr.n_dofs());
  for (int t = 0; t < m.num_triangles(); ++t)
    for (int e : cr.local_dofs(t)) rhs[e] += load.coeffs()[t] * m.geometry(t).area / 3.0;
  const Vector r = k.restrict(rhs);
  const Vector x = solve_sym_linear(k.matrix, r);
  EXPECT_LE(relative_residual(k.matrix, x, r), 1e-11);
  EXPECT_LE((k.scatter(x) - solve_source(cr, load).coeffs()).norm(), 1e-12 * x.norm());
}

TEST(Eigen, TwoByTwo) {
  EigenOptions o;
  o.k = 2;
  const auto r = solve_eigs_smallest(diag({3, 2}), diag({1, 1}), o);
  ASSERT_EQ(r.eigenvalues.size(), 2u);
  EXPECT_NEAR(r.eigenvalues[0], 2.0, 1e-14);
  EXPECT_NEAR(r.eigenvalues[1], 3.0, 1e-14);
  EXPECT_EQ(r.solver_id, "dense");
}

TEST(Eigen, ResultInvariants) {
  const Pencil p = pencil(Domain::Square5, 3, SpaceKind::ECR);
  for (EigenMethod method : {EigenMethod::Dense, EigenMethod::ShiftInvert}) {
    EigenOptions o;
    o.k = 6;
    o.method = method;
    o.seed = 3;
    const auto r = solve_eigs_smallest(p.a, p.b, o);
    for (int i = 0; i < o.k; ++i) {
      if (i > 0) EXPECT_LE(r.eigenvalues[i - 1], r.eigenvalues[i]);
      EXPECT_LE(r.residuals[i], o.tol);
      EXPECT_NEAR(r.eigenvectors[i].dot(p.b.multiply(r.eigenvectors[i])), 1.0, 1e-12);
      for (int j = 0; j < i; ++j)
        EXPECT_LE(std::abs(r.eigenvectors[i].dot(p.b.multiply(r.eigenvectors[j]))), 1e-9);
    }
  }
}

// Both paths on every small problem; n stays under the dense limit.
TEST(EigenProperty, DenseAndShiftInvertAgree) {
  for (Domain d : {Domain::Square2, Domain::Square5, Domain::TriangleJump, Domain::Crack8})
    for (SpaceKind kind : {SpaceKind::CR, SpaceKind::ECR, SpaceKind::P3})
      for (int level : {2, 3}) {
        const Pencil p = pencil(d, level, kind);
        if (p.a.rows() > 2000 || p.a.rows() < 8) continue;
        EigenOptions o;
        o.k = 4;
        o.method = EigenMethod::Dense;
        const auto dense = solve_eigs_smallest(p.a, p.b, o);
        o.method = EigenMethod::ShiftInvert;
        o.seed = 99;
        const auto si = solve_eigs_smallest(p.a, p.b, o);
        EXPECT_EQ(si.solver_id, "shift-invert");
        for (int i = 0; i < o.k; ++i)
          EXPECT_NEAR(si.eigenvalues[i], dense.eigenvalues[i], 1e-9 * dense.eigenvalues[i])
              << to_string(d) << " " << to_string(kind) << " level " << level << " index " << i;
      }
}

TEST(Eigen, SquareDegenerateModes) {
  const Pencil p = pencil(Domain::Square2, 4, SpaceKind::CR);
  EigenOptions o;
  o.k = 4;
  const auto r = solve_eigs_smallest(p.a, p.b, o);
  const double pi2 = std::numbers::pi * std::numbers::pi;
  EXPECT_NEAR(r.eigenvalues[1], 5 * pi2, 0.05 * 5 * pi2);
  EXPECT_NEAR(r.eigenvalues[1], r.eigenvalues[2], 1e-9 * r.eigenvalues[1]);
}

TEST(Eigen, SeedDeterminism) {
  const Pencil p = pencil(Domain::Square2, 6, SpaceKind::CR);
  EigenOptions o;
  o.k = 3;
  o.seed = 7;
  const auto a = solve_eigs_smallest(p.a, p.b, o);
  const auto b = solve_eigs_smallest(p.a, p.b, o);
  EXPECT_EQ(a.solver_id, "shift-invert");
  for (int i = 0; i < o.k; ++i) {
    EXPECT_EQ(a.eigenvalues[i], b.eigenvalues[i]);
    EXPECT_EQ(a.eigenvectors[i], b.eigenvectors[i]);
  }
}

TEST(Eigen, CrHalvingPattern) {
  const double exact = 2 * std::numbers::pi * std::numbers::pi;
  EigenOptions o;
  const double l5 = solve_eigenproblem(FeSpace(build_level(Domain::Square2, 5), SpaceKind::CR), o).result.eigenvalues[0];
  const double l6 = solve_eigenproblem(FeSpace(build_level(Domain::Square2, 6), SpaceKind::CR), o).result.eigenvalues[0];
  EXPECT_LT(l6, exact);
  EXPECT_NEAR(exact - l6, (exact - l5) / 4, 0.1 * (exact - l5) / 4);
}

TEST(Eigen, CrIncreasesTowardExact) {
  double prev = 0;
  for (int level = 3; level <= 7; ++level) {
    const double l = solve_eigenproblem(FeSpace(build_level(Domain::Square2, level), SpaceKind::CR), EigenOptions{})
                         .result.eigenvalues[0];
    EXPECT_GT(l, prev);
    EXPECT_LT(l, 2 * std::numbers::pi * std::numbers::pi);
    prev = l;
  }
}

TEST(Eigen, ModesAreL2Normalized) {
  const FeSpace s(build_level(Domain::Square5, 3), SpaceKind::ECR);
  EigenOptions o;
  o.k = 2;
  const auto sol = solve_eigenproblem(s, o);
  ScalarField zero{[](const Point&) { return 0.0; }, {}, {}};
  for (const auto& mode : sol.modes) EXPECT_NEAR(l2_error_sq(mode, zero, triangle_rule(6)), 1.0, 1e-12);
}
