#include "eigx/assembly.hpp"

#include <algorithm>
#include <cstdio>

namespace eigx {

using Triplet = Eigen::Triplet<double, int>;

SparseSymMatrix::SparseSymMatrix(Storage lower) : lower_(std::move(lower)) {
  lower_.prune(0.0);
  lower_.makeCompressed();
}

SparseSymMatrix::Storage SparseSymMatrix::full() const {
  Storage f = lower_.selfadjointView<Eigen::Lower>();
  f.makeCompressed();
  return f;
}

Eigen::MatrixXd SparseSymMatrix::dense() const { return Eigen::MatrixXd(full()); }

Vector SparseSymMatrix::multiply(const Vector& x) const {
  return lower_.selfadjointView<Eigen::Lower>() * x;
}

double SparseSymMatrix::coeff(int i, int j) const {
  return i >= j ? lower_.coeff(i, j) : lower_.coeff(j, i);
}

double SparseSymMatrix::norm_inf() const {
  Vector rows = Vector::Zero(this->rows());
  for (int k = 0; k < lower_.outerSize(); ++k)
    for (Storage::InnerIterator it(lower_, k); it; ++it) {
      rows[it.row()] += std::abs(it.value());
      if (it.row() != it.col()) rows[it.col()] += std::abs(it.value());
    }
  return rows.size() ? rows.maxCoeff() : 0.0;
}

CoefficientField::CoefficientField(std::vector<double> values) : values_(std::move(values)) {
  for (double v : values_)
    if (!(v > 0.0)) throw PreconditionError("diffusion coefficient must be positive");
}

CoefficientField CoefficientField::constant(const Mesh& mesh, double value) {
  return CoefficientField(std::vector<double>(mesh.num_triangles(), value));
}

CoefficientField CoefficientField::from_centroids(const Mesh& mesh,
                                                  const std::function<double(const Point&)>& f) {
  std::vector<double> v(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) v[t] = f(mesh.geometry(t).centroid);
  return CoefficientField(std::move(v));
}

CoefficientField CoefficientField::split_at_height(const Mesh& mesh, double y0, double below,
                                                   double above) {
  std::vector<double> v(mesh.num_triangles());
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const ElementGeometry g = mesh.geometry(t);
    const double lo = std::min({g.p[0].y(), g.p[1].y(), g.p[2].y()});
    const double hi = std::max({g.p[0].y(), g.p[1].y(), g.p[2].y()});
    if (hi <= y0 || lo >= y0) {
      v[t] = hi <= y0 ? below : above;
      continue;
    }
    // clip the triangle to y < y0 and take the shoelace area
    std::vector<Point> poly;
    for (int i = 0; i < 3; ++i) {
      const Point& a = g.p[i];
      const Point& b = g.p[(i + 1) % 3];
      const bool ia = a.y() < y0, ib = b.y() < y0;
      if (ia) poly.push_back(a);
      if (ia != ib) poly.push_back(a + (y0 - a.y()) / (b.y() - a.y()) * (b - a));
    }
    double twice = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const Point& a = poly[i];
      const Point& b = poly[(i + 1) % poly.size()];
      twice += a.x() * b.y() - a.y() * b.x();
    }
    const double f = std::clamp(0.5 * twice / g.area, 0.0, 1.0);
    v[t] = f * below + (1.0 - f) * above;
  }
  return CoefficientField(std::move(v));
}

namespace {

// Degree of the local basis polynomials.
int basis_degree(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::P0: return 0;
    case SpaceKind::CR:
    case SpaceKind::P1: return 1;
    case SpaceKind::ECR: return 2;
    case SpaceKind::P3: return 3;
    case SpaceKind::RT0: return 1;
  }
  return 1;
}

SparseSymMatrix build_lower(int n, std::vector<Triplet>& trips, const std::vector<char>* eliminate) {
  if (eliminate)
    for (int i = 0; i < n; ++i)
      if ((*eliminate)[i]) trips.emplace_back(i, i, 1.0);
  SparseSymMatrix::Storage m(n, n);
  m.setFromTriplets(trips.begin(), trips.end());
  return SparseSymMatrix(std::move(m));
}

void add_lower(std::vector<Triplet>& trips, int i, int j, double v) {
  if (i >= j)
    trips.emplace_back(i, j, v);
  else
    trips.emplace_back(j, i, v);
}

}  // namespace

SparseSymMatrix assemble_stiffness(const FeSpace& space, const CoefficientField& a,
                                   const AssemblyOptions& options) {
  const SpaceKind kind = space.kind();
  if (kind == SpaceKind::RT0 || kind == SpaceKind::P0)
    throw PreconditionError("stiffness is defined for CR, ECR, P1 and P3; use assemble_mixed_rt");
  const Mesh& m = space.mesh();
  if (static_cast<int>(a.values().size()) != m.num_triangles())
    throw PreconditionError("coefficient field does not match the mesh");
  const int deg = 2 * (basis_degree(kind) - 1);
  const TriangleRule& rule = triangle_rule(std::max(deg, 1));
  const auto& mask = space.dirichlet_mask();
  const bool elim = options.eliminate_dirichlet;

  std::vector<Triplet> trips;
  const int ls = space.local_size();
  trips.reserve(static_cast<std::size_t>(m.num_triangles()) * ls * (ls + 1) / 2);
  LocalGrads gr;
  Eigen::MatrixXd ke(ls, ls);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = m.geometry(t);
    ke.setZero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      eval_local_basis(kind, g, g.map(rule.points[q]), nullptr, &gr);
      ke.noalias() += rule.weights[q] * gr * gr.transpose();
    }
    ke *= a(t) * g.area;
    const auto dofs = space.local_dofs(t);
    for (int i = 0; i < ls; ++i) {
      if (elim && mask[dofs[i]]) continue;
      for (int j = 0; j <= i; ++j) {
        if (elim && mask[dofs[j]]) continue;
        if (i != j && dofs[i] == dofs[j]) {
          add_lower(trips, dofs[i], dofs[j], 2.0 * ke(i, j));
        } else {
          add_lower(trips, dofs[i], dofs[j], ke(i, j));
        }
      }
    }
  }
  return build_lower(space.n_dofs(), trips, elim ? &mask : nullptr);
}

SparseSymMatrix assemble_stiffness(const FeSpace& space, const AssemblyOptions& options) {
  return assemble_stiffness(space, CoefficientField::constant(space.mesh()), options);
}

SparseSymMatrix assemble_mass(const FeSpace& space) {
  const SpaceKind kind = space.kind();
  if (kind == SpaceKind::RT0) throw PreconditionError("use assemble_mixed_rt for RT0");
  const Mesh& m = space.mesh();
  const TriangleRule& rule = triangle_rule(std::max(2 * basis_degree(kind), 1));
  const int ls = space.local_size();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(m.num_triangles()) * ls * (ls + 1) / 2);
  LocalValues v;
  Eigen::MatrixXd me(ls, ls);
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = m.geometry(t);
    me.setZero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      eval_local_basis(kind, g, g.map(rule.points[q]), &v, nullptr);
      me.noalias() += rule.weights[q] * v * v.transpose();
    }
    me *= g.area;
    const auto dofs = space.local_dofs(t);
    for (int i = 0; i < ls; ++i)
      for (int j = 0; j <= i; ++j) add_lower(trips, dofs[i], dofs[j], me(i, j));
  }
  return build_lower(space.n_dofs(), trips, nullptr);
}

// ---------------------------------------------------------------------------

Vector ReducedSystem::restrict(const Vector& full) const {
  Vector r(free.size());
  for (std::size_t i = 0; i < free.size(); ++i) r[i] = full[free[i]];
  return r;
}

Vector ReducedSystem::scatter(const Vector& reduced) const {
  Vector f = Vector::Zero(full_to_reduced.size());
  for (std::size_t i = 0; i < free.size(); ++i) f[free[i]] = reduced[i];
  return f;
}

ReducedSystem apply_dirichlet(const SparseSymMatrix& matrix, const std::vector<char>& mask) {
  const int n = matrix.rows();
  if (static_cast<int>(mask.size()) != n)
    throw PreconditionError("Dirichlet mask size does not match the matrix");
  ReducedSystem r;
  r.full_to_reduced.assign(n, -1);
  for (int i = 0; i < n; ++i) {
    if (mask[i]) {
      r.eliminated.push_back(i);
    } else {
      r.full_to_reduced[i] = static_cast<int>(r.free.size());
      r.free.push_back(i);
    }
  }
  std::vector<Triplet> trips;
  trips.reserve(matrix.lower().nonZeros());
  const auto& low = matrix.lower();
  for (int k = 0; k < low.outerSize(); ++k)
    for (SparseSymMatrix::Storage::InnerIterator it(low, k); it; ++it) {
      const int i = r.full_to_reduced[it.row()];
      const int j = r.full_to_reduced[it.col()];
      if (i >= 0 && j >= 0) add_lower(trips, i, j, it.value());
    }
  const int nf = static_cast<int>(r.free.size());
  SparseSymMatrix::Storage m(nf, nf);
  m.setFromTriplets(trips.begin(), trips.end());
  r.matrix = SparseSymMatrix(std::move(m));
  return r;
}

ReducedSystem apply_dirichlet(const FeSpace& space, const SparseSymMatrix& matrix) {
  return apply_dirichlet(matrix, space.dirichlet_mask());
}

std::vector<char> dirichlet_mask_from_edges(const FeSpace& space, const std::vector<int>& edges) {
  if (space.kind() != SpaceKind::CR && space.kind() != SpaceKind::ECR)
    throw PreconditionError("edge masks apply to CR and ECR spaces");
  std::vector<char> mask(space.n_dofs(), 0);
  for (int e : edges) {
    if (e < 0 || e >= space.mesh().num_edges())
      throw PreconditionError("edge " + std::to_string(e) + " does not exist");
    mask[e] = 1;
  }
  return mask;
}

// ---------------------------------------------------------------------------

MixedSystem assemble_mixed_rt(const FeSpace& rt, const FeFunction& load) {
  if (rt.kind() != SpaceKind::RT0) throw PreconditionError("assemble_mixed_rt needs an RT0 space");
  if (load.space().kind() != SpaceKind::P0)
    throw PreconditionError("mixed load must be a P0 function");
  const Mesh& m = rt.mesh();
  if (load.space().mesh_ptr() != rt.mesh_ptr() && !(load.space().mesh() == m))
    throw PreconditionError("load lives on a different mesh");

  const int ne = m.num_edges();
  const int nt = m.num_triangles();
  std::vector<char> fixed(ne, 0);
  for (int e = 0; e < ne; ++e) {
    const BoundaryTag tag = m.edges()[e].tag;
    fixed[e] = tag == BoundaryTag::Neumann || (is_crack(tag) && rt.crack_bc() == CrackBC::Neumann);
  }

  const TriangleRule& rule = triangle_rule(2);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(nt) * 9);
  MixedSystem sys;
  sys.n_flux = ne;
  sys.n_cells = nt;
  sys.rhs = Vector::Zero(ne + nt);
  for (int t = 0; t < nt; ++t) {
    const ElementGeometry g = m.geometry(t);
    Eigen::Matrix3d me = Eigen::Matrix3d::Zero();
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const auto b = rt_local_basis(g, g.map(rule.points[q]));
      me.noalias() += rule.weights[q] * b * b.transpose();
    }
    me *= g.area;
    const auto dofs = rt.local_dofs(t);
    const auto sg = rt.local_signs(t);
    for (int i = 0; i < 3; ++i) {
      if (fixed[dofs[i]]) continue;
      for (int j = 0; j <= i; ++j) {
        if (fixed[dofs[j]]) continue;
        add_lower(trips, dofs[i], dofs[j], sg[i] * sg[j] * me(i, j));
      }
      // int_K div(tau_i) * 1 = sign
      trips.emplace_back(ne + t, dofs[i], static_cast<double>(sg[i]));
    }
    sys.rhs[ne + t] = -load.coeffs()[t] * g.area;
  }
  for (int e = 0; e < ne; ++e)
    if (fixed[e]) trips.emplace_back(e, e, 1.0);
  SparseSymMatrix::Storage mat(ne + nt, ne + nt);
  mat.setFromTriplets(trips.begin(), trips.end());
  sys.matrix = SparseSymMatrix(std::move(mat));
  return sys;
}

std::string to_matrix_market(const SparseSymMatrix& m) {
  const auto& low = m.lower();
  std::string out = "%%MatrixMarket matrix coordinate real symmetric\n";
  char buf[96];
  std::snprintf(buf, sizeof buf, "%d %d %ld\n", m.rows(), m.rows(), static_cast<long>(low.nonZeros()));
  out += buf;
  for (int k = 0; k < low.outerSize(); ++k)
    for (SparseSymMatrix::Storage::InnerIterator it(low, k); it; ++it) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", static_cast<int>(it.row()) + 1,
                    static_cast<int>(it.col()) + 1, it.value());
      out += buf;
    }
  return out;
}

}  // namespace eigx
