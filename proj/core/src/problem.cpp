#include "eigx/problem.hpp"

namespace eigx {

EigenSolution solve_eigenproblem(const FeSpace& space, const CoefficientField& a,
                                 const EigenOptions& options) {
  const SparseSymMatrix k = assemble_stiffness(space, a);
  const SparseSymMatrix m = assemble_mass(space);
  const ReducedSystem rk = apply_dirichlet(space, k);
  const ReducedSystem rm = apply_dirichlet(space, m);
  EigenSolution s;
  s.n_free = rk.matrix.rows();
  s.result = solve_eigs_smallest(rk.matrix, rm.matrix, options);
  for (const Vector& x : s.result.eigenvectors) s.modes.emplace_back(space, rk.scatter(x));
  return s;
}

EigenSolution solve_eigenproblem(const FeSpace& space, const EigenOptions& options) {
  return solve_eigenproblem(space, CoefficientField::constant(space.mesh()), options);
}

FeFunction solve_source(const FeSpace& space, const FeFunction& load, const CoefficientField* a) {
  if (load.space().kind() != SpaceKind::P0) throw PreconditionError("source load must be a P0 function");
  const Mesh& m = space.mesh();
  const SparseSymMatrix k =
      a ? assemble_stiffness(space, *a) : assemble_stiffness(space, CoefficientField::constant(m));
  Vector rhs = Vector::Zero(space.n_dofs());
  const TriangleRule& rule = triangle_rule(3);
  LocalValues v;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = m.geometry(t);
    LocalValues integral = LocalValues::Zero(space.local_size());
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      eval_local_basis(space.kind(), g, g.map(rule.points[q]), &v, nullptr);
      integral += rule.weights[q] * v;
    }
    const auto dofs = space.local_dofs(t);
    for (int i = 0; i < space.local_size(); ++i) rhs[dofs[i]] += load.coeffs()[t] * g.area * integral[i];
  }
  const ReducedSystem r = apply_dirichlet(space, k);
  const Vector x = solve_sym_linear(r.matrix, r.restrict(rhs));
  return FeFunction(space, r.scatter(x));
}

MixedSolution solve_mixed(const FeSpace& rt, const FeFunction& load) {
  const MixedSystem sys = assemble_mixed_rt(rt, load);
  const Vector x = solve_sym_linear(sys.matrix, sys.rhs, LinearPath::Indefinite);
  FeSpace p0(rt.mesh_ptr(), SpaceKind::P0);
  return {FeFunction(rt, x.head(sys.n_flux)), FeFunction(p0, x.tail(sys.n_cells))};
}

}  // namespace eigx
