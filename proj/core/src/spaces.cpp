#include "eigx/spaces.hpp"

#include <cstdio>
#include <sstream>

namespace eigx {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::CR: return "cr";
    case SpaceKind::ECR: return "ecr";
    case SpaceKind::RT0: return "rt0";
    case SpaceKind::P0: return "p0";
    case SpaceKind::P1: return "p1";
    case SpaceKind::P3: return "p3";
  }
  return "cr";
}

SpaceKind space_kind_from_string(std::string_view name) {
  for (auto k : {SpaceKind::CR, SpaceKind::ECR, SpaceKind::RT0, SpaceKind::P0, SpaceKind::P1,
                 SpaceKind::P3})
    if (to_string(k) == name) return k;
  throw ConfigError("unknown element '" + std::string(name) + "'");
}

std::string_view to_string(CrackBC bc) { return bc == CrackBC::Neumann ? "neumann" : "dirichlet"; }

CrackBC crack_bc_from_string(std::string_view name) {
  if (name == "neumann") return CrackBC::Neumann;
  if (name == "dirichlet") return CrackBC::Dirichlet;
  throw ConfigError("unknown crack condition '" + std::string(name) + "'");
}

int local_size(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::CR: return 3;
    case SpaceKind::ECR: return 4;
    case SpaceKind::RT0: return 3;
    case SpaceKind::P0: return 1;
    case SpaceKind::P1: return 3;
    case SpaceKind::P3: return 10;
  }
  return 0;
}

bool is_dirichlet_tag(BoundaryTag tag, CrackBC crack_bc) {
  return tag == BoundaryTag::Dirichlet || (is_crack(tag) && crack_bc == CrackBC::Dirichlet);
}

// ---------------------------------------------------------------------------
// Local bases

void eval_local_basis(SpaceKind kind, const ElementGeometry& g, const Point& x, LocalValues* values,
                      LocalGrads* grads) {
  const Eigen::Vector3d psi = g.barycentric(x);
  const auto& dp = g.grad_bary;
  const int n = local_size(kind);
  if (values) values->resize(n);
  if (grads) grads->resize(n, 2);

  switch (kind) {
    case SpaceKind::P0:
      if (values) (*values)(0) = 1.0;
      if (grads) grads->setZero();
      return;
    case SpaceKind::P1:
      for (int i = 0; i < 3; ++i) {
        if (values) (*values)(i) = psi[i];
        if (grads) grads->row(i) = dp[i].transpose();
      }
      return;
    case SpaceKind::CR:
    case SpaceKind::ECR: {
      const bool ecr = kind == SpaceKind::ECR;
      const Point r = x - g.centroid;
      const double c = 36.0 / g.h2;
      const double bubble = 2.0 - c * r.squaredNorm();
      const Point dbubble = -2.0 * c * r;
      for (int i = 0; i < 3; ++i) {
        if (values) (*values)(i) = 1.0 - 2.0 * psi[i] - (ecr ? bubble / 3.0 : 0.0);
        if (grads) {
          const Point gi = ecr ? Point(-2.0 * dp[i] - dbubble / 3.0) : Point(-2.0 * dp[i]);
          grads->row(i) = gi.transpose();
        }
      }
      if (ecr) {
        if (values) (*values)(3) = bubble;
        if (grads) grads->row(3) = dbubble.transpose();
      }
      return;
    }
    case SpaceKind::P3: {
      for (int i = 0; i < 3; ++i) {
        const double s = psi[i];
        if (values) (*values)(i) = 0.5 * s * (3.0 * s - 1.0) * (3.0 * s - 2.0);
        if (grads) grads->row(i) = (0.5 * (27.0 * s * s - 18.0 * s + 2.0) * dp[i]).transpose();
      }
      for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 2; ++k) {
          const int a = (i + 1 + k) % 3;  // the vertex the node sits closer to
          const int b = (i + 2 - k) % 3;
          const double sa = psi[a], sb = psi[b];
          const int row = 3 + 2 * i + k;
          if (values) (*values)(row) = 4.5 * sa * sb * (3.0 * sa - 1.0);
          if (grads)
            grads->row(row) =
                (4.5 * (sb * (6.0 * sa - 1.0) * dp[a] + sa * (3.0 * sa - 1.0) * dp[b])).transpose();
        }
      }
      if (values) (*values)(9) = 27.0 * psi[0] * psi[1] * psi[2];
      if (grads)
        grads->row(9) = (27.0 * (psi[1] * psi[2] * dp[0] + psi[0] * psi[2] * dp[1] +
                                 psi[0] * psi[1] * dp[2]))
                            .transpose();
      return;
    }
    case SpaceKind::RT0:
      throw PreconditionError("RT0 is vector valued; use rt_local_basis");
  }
}

Eigen::Matrix<double, 3, 2> rt_local_basis(const ElementGeometry& g, const Point& x) {
  Eigen::Matrix<double, 3, 2> b;
  for (int i = 0; i < 3; ++i) b.row(i) = ((x - g.p[i]) / (2.0 * g.area)).transpose();
  return b;
}

// ---------------------------------------------------------------------------
// FeSpace

FeSpace::FeSpace(const Mesh& mesh, SpaceKind kind, CrackBC crack_bc)
    : FeSpace(std::make_shared<const Mesh>(mesh), kind, crack_bc) {}

FeSpace::FeSpace(std::shared_ptr<const Mesh> mesh_ptr, SpaceKind kind, CrackBC crack_bc) {
  auto d = std::make_shared<Data>();
  d->mesh = std::move(mesh_ptr);
  d->kind = kind;
  d->crack_bc = crack_bc;
  const Mesh& m = *d->mesh;
  const int nt = m.num_triangles();
  const int ne = m.num_edges();
  const int nv = m.num_vertices();
  const int ls = eigx::local_size(kind);
  d->local.resize(static_cast<std::size_t>(nt) * ls);
  d->signs.assign(static_cast<std::size_t>(nt) * ls, 1);

  auto edge_dirichlet = [&](int e) { return is_dirichlet_tag(m.edges()[e].tag, crack_bc); };

  switch (kind) {
    case SpaceKind::CR:
    case SpaceKind::ECR:
    case SpaceKind::RT0: {
      const bool ecr = kind == SpaceKind::ECR;
      d->n_dofs = ne + (ecr ? nt : 0);
      d->dirichlet.assign(d->n_dofs, 0);
      for (int t = 0; t < nt; ++t) {
        for (int i = 0; i < 3; ++i) {
          d->local[t * ls + i] = m.triangle_edges(t)[i];
          if (kind == SpaceKind::RT0) d->signs[t * ls + i] = m.edge_signs(t)[i];
        }
        if (ecr) d->local[t * ls + 3] = ne + t;
      }
      if (kind != SpaceKind::RT0)
        for (int e = 0; e < ne; ++e) d->dirichlet[e] = edge_dirichlet(e);
      break;
    }
    case SpaceKind::P0:
      d->n_dofs = nt;
      d->dirichlet.assign(nt, 0);
      for (int t = 0; t < nt; ++t) d->local[t] = t;
      break;
    case SpaceKind::P1:
    case SpaceKind::P3: {
      const bool p3 = kind == SpaceKind::P3;
      d->n_dofs = p3 ? nv + 2 * ne + nt : nv;
      d->dirichlet.assign(d->n_dofs, 0);
      d->nodes.resize(d->n_dofs);
      for (int v = 0; v < nv; ++v) d->nodes[v] = m.vertices()[v];
      for (int e = 0; e < ne; ++e) {
        const Edge& ed = m.edges()[e];
        if (edge_dirichlet(e)) {
          d->dirichlet[ed.v0] = d->dirichlet[ed.v1] = 1;
          if (p3) d->dirichlet[nv + 2 * e] = d->dirichlet[nv + 2 * e + 1] = 1;
        }
        if (p3) {
          const Point& a = m.vertices()[ed.v0];
          const Point& b = m.vertices()[ed.v1];
          d->nodes[nv + 2 * e] = (2.0 * a + b) / 3.0;
          d->nodes[nv + 2 * e + 1] = (a + 2.0 * b) / 3.0;
        }
      }
      for (int t = 0; t < nt; ++t) {
        const auto& tri = m.triangles()[t];
        for (int i = 0; i < 3; ++i) d->local[t * ls + i] = tri[i];
        if (!p3) continue;
        for (int i = 0; i < 3; ++i) {
          const int e = m.triangle_edges(t)[i];
          const bool same = m.edge_signs(t)[i] > 0;  // local p[i+1] -> p[i+2] equals v0 -> v1
          d->local[t * ls + 3 + 2 * i] = nv + 2 * e + (same ? 0 : 1);
          d->local[t * ls + 3 + 2 * i + 1] = nv + 2 * e + (same ? 1 : 0);
        }
        d->local[t * ls + 9] = nv + 2 * ne + t;
        d->nodes[nv + 2 * ne + t] = m.geometry(t).centroid;
      }
      break;
    }
  }
  data_ = std::move(d);
}

int FeSpace::n_free() const {
  int n = 0;
  for (char c : data_->dirichlet) n += c == 0;
  return n;
}

Point FeSpace::node(int dof) const {
  if (data_->nodes.empty()) throw PreconditionError("space has no nodal DOFs");
  return data_->nodes.at(dof);
}

// ---------------------------------------------------------------------------
// FeFunction

FeFunction::FeFunction(FeSpace space) : space_(std::move(space)), coeffs_(Vector::Zero(space_.n_dofs())) {}

FeFunction::FeFunction(FeSpace space, Vector coeffs) : space_(std::move(space)), coeffs_(std::move(coeffs)) {
  if (coeffs_.size() != space_.n_dofs())
    throw PreconditionError("coefficient vector length does not match the space");
}

namespace {

ElementGeometry checked_geometry(const Mesh& m, int t, const Point& x) {
  if (t < 0 || t >= m.num_triangles()) throw PreconditionError("triangle index out of range");
  ElementGeometry g = m.geometry(t);
  const Eigen::Vector3d b = g.barycentric(x);
  constexpr double tol = 1e-10;
  if (b.minCoeff() < -tol || b.maxCoeff() > 1.0 + tol)
    throw PreconditionError("point outside triangle " + std::to_string(t));
  return g;
}

}  // namespace

double FeFunction::value(int t, const Point& x) const {
  const ElementGeometry g = checked_geometry(space_.mesh(), t, x);
  LocalValues v;
  eval_local_basis(space_.kind(), g, x, &v, nullptr);
  const auto dofs = space_.local_dofs(t);
  double s = 0.0;
  for (int i = 0; i < v.size(); ++i) s += coeffs_[dofs[i]] * v[i];
  return s;
}

Point FeFunction::gradient(int t, const Point& x) const {
  const ElementGeometry g = checked_geometry(space_.mesh(), t, x);
  LocalGrads gr;
  eval_local_basis(space_.kind(), g, x, nullptr, &gr);
  const auto dofs = space_.local_dofs(t);
  Point s = Point::Zero();
  for (int i = 0; i < gr.rows(); ++i) s += coeffs_[dofs[i]] * gr.row(i).transpose();
  return s;
}

Point FeFunction::vector_value(int t, const Point& x) const {
  if (space_.kind() != SpaceKind::RT0) throw PreconditionError("vector_value needs an RT0 function");
  const ElementGeometry g = checked_geometry(space_.mesh(), t, x);
  const auto b = rt_local_basis(g, x);
  const auto dofs = space_.local_dofs(t);
  const auto sg = space_.local_signs(t);
  Point s = Point::Zero();
  for (int i = 0; i < 3; ++i) s += sg[i] * coeffs_[dofs[i]] * b.row(i).transpose();
  return s;
}

double FeFunction::divergence(int t) const {
  if (space_.kind() != SpaceKind::RT0) throw PreconditionError("divergence needs an RT0 function");
  const double area = space_.mesh().geometry(t).area;
  const auto dofs = space_.local_dofs(t);
  const auto sg = space_.local_signs(t);
  double s = 0.0;
  for (int i = 0; i < 3; ++i) s += sg[i] * coeffs_[dofs[i]];
  return s / area;
}

std::string FeFunction::to_csv() const {
  std::string out = "dof_index,value\n";
  char buf[64];
  for (int i = 0; i < coeffs_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", i, coeffs_[i]);
    out += buf;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Interpolation

namespace {

void require_kind(const FeSpace& s, SpaceKind k, const char* op) {
  if (s.kind() != k)
    throw PreconditionError(std::string(op) + " needs a " + std::string(to_string(k)) + " space");
}

void fill_edge_means(const ScalarField& v, const Mesh& m, Vector& c) {
  const EdgeRule& rule = default_edge_rule();
  for (int e = 0; e < m.num_edges(); ++e) {
    const Point& a = m.vertices()[m.edges()[e].v0];
    const Point& b = m.vertices()[m.edges()[e].v1];
    c[e] = integrate_edge(rule, a, b, v.value) / (b - a).norm();
  }
}

}  // namespace

FeFunction interp_cr(const ScalarField& v, const FeSpace& space) {
  require_kind(space, SpaceKind::CR, "interp_cr");
  FeFunction f(space);
  fill_edge_means(v, space.mesh(), f.coeffs());
  return f;
}

FeFunction interp_cr(const ScalarField& v, const Mesh& mesh) {
  return interp_cr(v, FeSpace(mesh, SpaceKind::CR));
}

FeFunction interp_ecr(const ScalarField& v, const FeSpace& space, const TriangleRule& rule) {
  require_kind(space, SpaceKind::ECR, "interp_ecr");
  FeFunction f(space);
  const Mesh& m = space.mesh();
  fill_edge_means(v, m, f.coeffs());
  const int ne = m.num_edges();
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = m.geometry(t);
    f.coeffs()[ne + t] = integrate_triangle(rule, g, v.value) / g.area;
  }
  return f;
}

FeFunction interp_ecr(const ScalarField& v, const Mesh& mesh, const TriangleRule& rule) {
  return interp_ecr(v, FeSpace(mesh, SpaceKind::ECR), rule);
}

FeFunction interp_rt(const VectorField& q, const FeSpace& space) {
  require_kind(space, SpaceKind::RT0, "interp_rt");
  FeFunction f(space);
  const Mesh& m = space.mesh();
  const EdgeRule& rule = default_edge_rule();
  for (int e = 0; e < m.num_edges(); ++e) {
    const Point& a = m.vertices()[m.edges()[e].v0];
    const Point& b = m.vertices()[m.edges()[e].v1];
    const Point n = m.edge_normal(e);
    f.coeffs()[e] = integrate_edge(rule, a, b, [&](const Point& x) { return q(x).dot(n); });
  }
  return f;
}

FeFunction interp_rt(const VectorField& q, const Mesh& mesh) {
  return interp_rt(q, FeSpace(mesh, SpaceKind::RT0));
}

FeFunction project_p0(const ScalarField& v, const FeSpace& space, const TriangleRule& rule) {
  require_kind(space, SpaceKind::P0, "project_p0");
  FeFunction f(space);
  const Mesh& m = space.mesh();
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = m.geometry(t);
    f.coeffs()[t] = integrate_triangle(rule, g, v.value) / g.area;
  }
  return f;
}

FeFunction project_p0(const ScalarField& v, const Mesh& mesh, const TriangleRule& rule) {
  return project_p0(v, FeSpace(mesh, SpaceKind::P0), rule);
}

FeFunction interp_nodal(const ScalarField& v, const FeSpace& space) {
  if (space.kind() != SpaceKind::P1 && space.kind() != SpaceKind::P3)
    throw PreconditionError("interp_nodal needs a P1 or P3 space");
  FeFunction f(space);
  for (int i = 0; i < space.n_dofs(); ++i) f.coeffs()[i] = v.value(space.node(i));
  return f;
}

double l2_error_sq(const FeFunction& f, const ScalarField& v, const TriangleRule& rule) {
  const FeSpace& s = f.space();
  const Mesh& m = s.mesh();
  double total = 0.0;
  LocalValues vals;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = m.geometry(t);
    const auto dofs = s.local_dofs(t);
    total += integrate_triangle(rule, g, [&](const Point& x) {
      eval_local_basis(s.kind(), g, x, &vals, nullptr);
      double fh = 0.0;
      for (int i = 0; i < vals.size(); ++i) fh += f.coeffs()[dofs[i]] * vals[i];
      const double d = v.value(x) - fh;
      return d * d;
    });
  }
  return total;
}

}  // namespace eigx
