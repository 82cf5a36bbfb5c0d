#include "eigx/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace eigx {

using std::numbers::pi;

// ---------------------------------------------------------------------------
// Fields

ExactEigenpair square_eigenpair(int m, int n) {
  if (m < 1 || n < 1) throw ConfigError("square eigenpair indices must be positive");
  const double a = m * pi, b = n * pi;
  ExactEigenpair e;
  e.lambda = a * a + b * b;
  e.u.value = [a, b](const Point& x) { return 2.0 * std::sin(a * x.x()) * std::sin(b * x.y()); };
  e.u.gradient = [a, b](const Point& x) {
    return Point(2.0 * a * std::cos(a * x.x()) * std::sin(b * x.y()),
                 2.0 * b * std::sin(a * x.x()) * std::cos(b * x.y()));
  };
  e.u.hessian = [a, b](const Point& x) {
    const double s1 = std::sin(a * x.x()), c1 = std::cos(a * x.x());
    const double s2 = std::sin(b * x.y()), c2 = std::cos(b * x.y());
    Eigen::Matrix2d h;
    h << -2.0 * a * a * s1 * s2, 2.0 * a * b * c1 * c2, 2.0 * a * b * c1 * c2, -2.0 * b * b * s1 * s2;
    return h;
  };
  return e;
}

std::vector<double> square_exact_eigenvalues(int k) {
  std::vector<int> sums;
  const int limit = k + 2;
  for (int m = 1; m <= limit; ++m)
    for (int n = 1; n <= limit; ++n) sums.push_back(m * m + n * n);
  std::sort(sums.begin(), sums.end());
  std::vector<double> out;
  for (int i = 0; i < k; ++i) out.push_back(sums[i] * pi * pi);
  return out;
}

ScalarField quadratic_field(double c, const Point& b, const Eigen::Matrix2d& hess) {
  const Eigen::Matrix2d h = 0.5 * (hess + hess.transpose());
  ScalarField f;
  f.value = [c, b, h](const Point& x) { return c + b.dot(x) + 0.5 * x.dot(h * x); };
  f.gradient = [b, h](const Point& x) { return Point(b + h * x); };
  f.hessian = [h](const Point&) { return h; };
  return f;
}

ScalarField linear_field(double c, const Point& b) {
  return quadratic_field(c, b, Eigen::Matrix2d::Zero());
}

// ---------------------------------------------------------------------------
// Gamma constants

Eigen::Vector3d local_rt_coefficients(const VectorField& q, const ElementGeometry& g) {
  Eigen::Vector3d a;
  const EdgeRule& rule = default_edge_rule();
  for (int j = 0; j < 3; ++j) {
    const Point& s = g.p[(j + 1) % 3];
    const Point& e = g.p[(j + 2) % 3];
    a[j] = integrate_edge(rule, s, e, [&](const Point& x) { return q(x).dot(g.normal[j]); }) /
           (2.0 * g.area);
  }
  return a;
}

namespace {

Point rt_eval(const Eigen::Vector3d& a, const ElementGeometry& g, const Point& x) {
  return a[0] * (x - g.p[0]) + a[1] * (x - g.p[1]) + a[2] * (x - g.p[2]);
}

Point phi_rt(int i, const ElementGeometry& g, const Point& x) {
  const Point r = x - g.centroid;
  return i == 0 ? Point(r.x(), -r.y()) : Point(r.y(), r.x());
}

}  // namespace

std::array<double, 3> element_gamma(const ElementGeometry& g, double h) {
  std::array<Eigen::Vector3d, 2> a;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j)
      a[i][j] = g.edge_length[j] / (2.0 * g.area) * phi_rt(i, g, g.midpoint[j]).dot(g.normal[j]);
  // Both error fields are linear, so the degree-2 rule is exact.
  const TriangleRule& rule = triangle_rule(2);
  Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = g.map(rule.points[q]);
    const Point e0 = phi_rt(0, g, x) - rt_eval(a[0], g, x);
    const Point e1 = phi_rt(1, g, x) - rt_eval(a[1], g, x);
    gram(0, 0) += rule.weights[q] * e0.dot(e0);
    gram(0, 1) += rule.weights[q] * e0.dot(e1);
    gram(1, 1) += rule.weights[q] * e1.dot(e1);
  }
  // weights sum to one, so gram already carries the 1/|K| factor
  return {gram(0, 0) / (h * h), gram(0, 1) / (h * h), gram(1, 1) / (h * h)};
}

double GammaConstants::spread() const {
  double s = 0.0;
  for (std::size_t t = 1; t < g11.size(); ++t) {
    const double scale = std::max({std::abs(g11[0]), std::abs(g12[0]), std::abs(g22[0])});
    s = std::max({s, std::abs(g11[t] - g11[0]) / scale, std::abs(g12[t] - g12[0]) / scale,
                  std::abs(g22[t] - g22[0]) / scale});
  }
  return s;
}

GammaConstants gamma_constants(const Mesh& mesh) {
  GammaConstants c;
  c.h = mesh.h();
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const auto v = element_gamma(mesh.geometry(t), c.h);
    c.g11.push_back(v[0]);
    c.g12.push_back(v[1]);
    c.g22.push_back(v[2]);
  }
  return c;
}

namespace {

Eigen::Matrix2d constant_hessian(const ScalarField& w, const ElementGeometry& g) {
  if (!w.has_hessian()) throw PreconditionError("field has no Hessian");
  const Eigen::Matrix2d h = w.hessian(g.centroid);
  for (const Point& p : g.p)
    if ((w.hessian(p) - h).norm() > 1e-12 * std::max(1.0, h.norm()))
      throw PreconditionError("field is not quadratic on this element");
  return h;
}

double hessian_form(const std::array<double, 3>& gm, const Eigen::Matrix2d& h) {
  const double d = h(0, 0) - h(1, 1);
  const double o = h(0, 1);
  return gm[0] / 4.0 * d * d + gm[2] * o * o + gm[1] * d * o;
}

}  // namespace

double rt_error_quadratic(const ScalarField& w, const ElementGeometry& g) {
  const Eigen::Matrix2d h = constant_hessian(w, g);
  const double hn = g.diameter;
  return hn * hn * hessian_form(element_gamma(g, hn), h) * g.area;
}

double rt_error_direct(const ScalarField& w, const ElementGeometry& g, const TriangleRule& rule) {
  if (!w.has_gradient()) throw PreconditionError("field has no gradient");
  const Eigen::Vector3d a = local_rt_coefficients(w.gradient, g);
  return integrate_triangle(rule, g, [&](const Point& x) {
    return (w.gradient(x) - rt_eval(a, g, x)).squaredNorm();
  });
}

double gamma_hessian_terms(const ScalarField& u, const Mesh& mesh, const GammaConstants& gamma,
                           const TriangleRule& rule) {
  if (!u.has_hessian()) throw PreconditionError("field has no Hessian");
  double total = 0.0;
  for (int t = 0; t < mesh.num_triangles(); ++t) {
    const std::array<double, 3> gm{gamma.g11[t], gamma.g12[t], gamma.g22[t]};
    total += integrate_triangle(rule, mesh.geometry(t),
                                [&](const Point& x) { return hessian_form(gm, u.hessian(x)); });
  }
  return gamma.h * gamma.h * total;
}

RtErrorField rt_error_field(const ScalarField& u, const Mesh& mesh) {
  if (!u.has_hessian() || !u.has_gradient()) throw PreconditionError("field needs gradient and Hessian");
  const TriangleRule rule = collapsed_gauss_rule(14);
  RtErrorField r;
  for (int t = 0; t < mesh.num_triangles(); ++t) r.direct += rt_error_direct(u, mesh.geometry(t), rule);
  r.expansion = gamma_hessian_terms(u, mesh, gamma_constants(mesh), rule);
  return r;
}

// ---------------------------------------------------------------------------
// Local identities

std::string_view to_string(NcElement e) { return e == NcElement::CR ? "cr" : "ecr"; }

NcElement nc_element_from_string(std::string_view name) {
  if (name == "cr") return NcElement::CR;
  if (name == "ecr") return NcElement::ECR;
  throw ConfigError("unknown nonconforming element '" + std::string(name) + "'");
}

namespace {

// Local DOFs of Pi_CR w or Pi_ECR w.
LocalValues local_nc_dofs(const ScalarField& w, const ElementGeometry& g, NcElement which,
                          const TriangleRule& rule, const EdgeRule& er = default_edge_rule()) {
  LocalValues c(which == NcElement::CR ? 3 : 4);
  for (int i = 0; i < 3; ++i)
    c[i] = integrate_edge(er, g.p[(i + 1) % 3], g.p[(i + 2) % 3], w.value) / g.edge_length[i];
  if (which == NcElement::ECR) c[3] = integrate_triangle(rule, g, w.value) / g.area;
  return c;
}

ElementGeometry ccw_geometry(std::array<Point, 3> p) {
  const Point d1 = p[1] - p[0], d2 = p[2] - p[0];
  if (d1.x() * d2.y() - d1.y() * d2.x() < 0.0) std::swap(p[1], p[2]);
  return ElementGeometry::from_vertices(p[0], p[1], p[2]);
}

}  // namespace

double local_interpolant(const ScalarField& w, const ElementGeometry& g, NcElement which, const Point& x) {
  const LocalValues c = local_nc_dofs(w, g, which, triangle_rule(6));
  LocalValues v;
  eval_local_basis(space_kind(which), g, x, &v, nullptr);
  return c.dot(v);
}

double parallelogram_orthogonality(const std::array<Point, 3>& k1, const std::array<Point, 3>& k2,
                                   const ScalarField& w, const ScalarField& v, NcElement which) {
  if (!forms_parallelogram(k1, k2)) throw PreconditionError("triangles do not form a parallelogram");
  const TriangleRule& rule = triangle_rule(6);
  double total = 0.0;
  for (const auto& pts : {k1, k2}) {
    const ElementGeometry g = ccw_geometry(pts);
    const LocalValues c = local_nc_dofs(w, g, which, rule);
    const double vmean = integrate_triangle(rule, g, v.value) / g.area;
    LocalValues b;
    total += integrate_triangle(rule, g, [&](const Point& x) {
      eval_local_basis(space_kind(which), g, x, &b, nullptr);
      return (w.value(x) - c.dot(b)) * (v.value(x) - vmean);
    });
  }
  return total;
}

double commuting_defect(const ScalarField& w, const ElementGeometry& g, NcElement which) {
  if (!w.has_gradient()) throw PreconditionError("field has no gradient");
  static const TriangleRule rule = collapsed_gauss_rule(14);
  static const EdgeRule edge = gauss_legendre(8);
  const LocalValues c = local_nc_dofs(w, g, which, rule, edge);
  const int n = static_cast<int>(c.size());
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
  LocalGrads gr;
  for (std::size_t q = 0; q < rule.points.size(); ++q) {
    const Point x = g.map(rule.points[q]);
    eval_local_basis(space_kind(which), g, x, nullptr, &gr);
    const Point err = w.gradient(x) - gr.transpose() * c;
    acc += rule.weights[q] * (gr * err);
  }
  return acc.cwiseAbs().maxCoeff();  // weights sum to one: this is the integral over |K|
}

double cr_error_expansion(const ScalarField& w, const ElementGeometry& g, const Point& x) {
  const Eigen::Matrix2d h = constant_hessian(w, g);
  const BubbleSet b = make_bubbles(g);
  double s = 0.0;
  for (int i = 0; i < 3; ++i)
    s += g.edge_length[i] * g.edge_length[i] * g.tangent[i].dot(h * g.tangent[i]) * b.cr[i].value(x);
  return -s / 8.0;
}

// ---------------------------------------------------------------------------
// Global checks

namespace {

// Local view of an FE function on one element.
class LocalFe {
 public:
  explicit LocalFe(const FeFunction& f) : f_(f) {}

  void load(int t, const ElementGeometry& g) {
    g_ = &g;
    const auto dofs = f_.space().local_dofs(t);
    const auto sg = f_.space().local_signs(t);
    c_.resize(static_cast<Eigen::Index>(dofs.size()));
    for (std::size_t i = 0; i < dofs.size(); ++i) c_[i] = sg[i] * f_.coeffs()[dofs[i]];
  }
  double value(const Point& x) {
    eval_local_basis(f_.space().kind(), *g_, x, &v_, nullptr);
    return c_.dot(v_);
  }
  Point grad(const Point& x) {
    eval_local_basis(f_.space().kind(), *g_, x, nullptr, &gr_);
    return gr_.transpose() * c_;
  }
  Point vec(const Point& x) const { return rt_local_basis(*g_, x).transpose() * c_; }

 private:
  const FeFunction& f_;
  const ElementGeometry* g_ = nullptr;
  LocalValues c_;
  LocalValues v_;
  LocalGrads gr_;
};

void require_dirichlet_boundary(const Mesh& mesh) {
  for (const Edge& e : mesh.edges())
    if (e.tag != BoundaryTag::Interior && e.tag != BoundaryTag::Dirichlet)
      throw PreconditionError("this check needs a Dirichlet condition on the whole boundary");
}

FeFunction load_p0(const std::shared_ptr<const Mesh>& mesh, double lambda, const ScalarField& u,
                   const TriangleRule& rule) {
  ScalarField f;
  f.value = [&](const Point& x) { return lambda * u.value(x); };
  return project_p0(f, FeSpace(mesh, SpaceKind::P0), rule);
}

// First eigenfunction with its sign aligned to the exact u.
struct AlignedMode {
  double lambda_h;
  FeFunction u_h;
};

AlignedMode first_mode(const FeSpace& space, const ScalarField& u, const AnalysisOptions& opt,
                       const TriangleRule& rule) {
  EigenOptions eo;
  eo.k = 1;
  eo.tol = opt.eig_tol;
  eo.seed = opt.seed;
  EigenSolution s = solve_eigenproblem(space, eo);
  FeFunction uh = s.modes[0];
  const Mesh& m = space.mesh();
  LocalFe loc(uh);
  double ip = 0.0;
  for (int t = 0; t < m.num_triangles(); ++t) {
    const ElementGeometry g = m.geometry(t);
    loc.load(t, g);
    ip += integrate_triangle(rule, g, [&](const Point& x) { return u.value(x) * loc.value(x); });
  }
  if (ip < 0.0) uh.coeffs() = -uh.coeffs();
  return {s.result.eigenvalues[0], std::move(uh)};
}

}  // namespace

MariniReport verify_marini(const Mesh& mesh_in, double lambda, const ScalarField& u,
                           const AnalysisOptions& opt) {
  require_dirichlet_boundary(mesh_in);
  auto mesh = std::make_shared<const Mesh>(mesh_in);
  const TriangleRule rule = collapsed_gauss_rule(opt.quad_degree);
  const FeFunction f = load_p0(mesh, lambda, u, rule);
  const MixedSolution mixed = solve_mixed(FeSpace(mesh, SpaceKind::RT0), f);
  const FeFunction ucr = solve_source(FeSpace(mesh, SpaceKind::CR), f);
  const FeFunction uecr = solve_source(FeSpace(mesh, SpaceKind::ECR), f);

  LocalFe sig(mixed.sigma), cr(ucr), ecr(uecr);
  const TriangleRule& samples = triangle_rule(4);
  MariniReport r;
  double dcr = 0.0, decr = 0.0;
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const ElementGeometry g = mesh->geometry(t);
    sig.load(t, g);
    cr.load(t, g);
    ecr.load(t, g);
    std::vector<Point> pts(g.p.begin(), g.p.end());
    for (const auto& b : samples.points) pts.push_back(g.map(b));
    for (const Point& x : pts) {
      const Point s = sig.vec(x);
      r.sigma_inf = std::max(r.sigma_inf, s.cwiseAbs().maxCoeff());
      const Point rcr = cr.grad(x) - 0.5 * f.coeffs()[t] * (x - g.centroid);
      dcr = std::max(dcr, (s - rcr).cwiseAbs().maxCoeff());
      decr = std::max(decr, (s - ecr.grad(x)).cwiseAbs().maxCoeff());
    }
  }
  const double scale = r.sigma_inf > 0.0 ? r.sigma_inf : 1.0;
  r.cr = dcr / scale;
  r.ecr = decr / scale;
  return r;
}

IdentityReport error_identity_check(const Mesh& mesh_in, NcElement element, const ExactEigenpair& exact,
                                    const AnalysisOptions& opt) {
  if (!exact.u.has_gradient()) throw PreconditionError("exact eigenfunction needs a gradient");
  auto mesh = std::make_shared<const Mesh>(mesh_in);
  const TriangleRule rule = collapsed_gauss_rule(opt.quad_degree);
  const FeSpace space(mesh, space_kind(element));
  const AlignedMode mode = first_mode(space, exact.u, opt, rule);
  const FeFunction pi_u = element == NcElement::CR ? interp_cr(exact.u, space) : interp_ecr(exact.u, space, rule);

  LocalFe uh(mode.u_h), pu(pi_u);
  double energy = 0.0, l2 = 0.0, ip = 0.0, a_uuh = 0.0, m_uuh = 0.0;
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const ElementGeometry g = mesh->geometry(t);
    uh.load(t, g);
    pu.load(t, g);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = g.map(rule.points[q]);
      const double w = rule.weights[q] * g.area;
      const double uv = exact.u.value(x);
      const Point ug = exact.u.gradient(x);
      const double hv = uh.value(x);
      const Point hg = uh.grad(x);
      energy += w * (ug - hg).squaredNorm();
      l2 += w * (uv - hv) * (uv - hv);
      ip += w * (uv - pu.value(x)) * hv;
      a_uuh += w * ug.dot(hg);
      m_uuh += w * uv * hv;
    }
  }
  IdentityReport r;
  r.lambda = exact.lambda;
  r.lambda_h = mode.lambda_h;
  r.lhs = exact.lambda - mode.lambda_h;
  r.energy = energy;
  r.interpolation = -2.0 * mode.lambda_h * ip;
  r.l2 = -mode.lambda_h * l2;
  r.rhs = r.energy + r.interpolation + r.l2;
  r.residual = std::abs(r.lhs - r.rhs) / std::abs(r.lhs);
  r.consistency = a_uuh - mode.lambda_h * m_uuh;
  r.commuted = -mode.lambda_h * ip;
  // the consistency term is O(h^4) for ECR, so measure against a_h(u, u_h)
  r.commuting_residual = std::abs(r.consistency - r.commuted) / std::abs(a_uuh);
  return r;
}

double ExpansionRow::term(const std::string& name) const {
  for (const auto& t : terms)
    if (t.name == name) return t.value;
  throw PreconditionError("no expansion term named '" + name + "'");
}

ExpansionRow decompose_error(const Mesh& mesh_in, NcElement element, const ExactEigenpair& exact,
                             const AnalysisOptions& opt) {
  require_dirichlet_boundary(mesh_in);
  const ScalarField& u = exact.u;
  if (!u.has_gradient() || !u.has_hessian()) throw PreconditionError("exact eigenfunction needs derivatives");
  auto mesh = std::make_shared<const Mesh>(mesh_in);
  const TriangleRule rule = collapsed_gauss_rule(opt.quad_degree);
  const double lambda = exact.lambda;

  const FeFunction f = load_p0(mesh, lambda, u, rule);
  const FeSpace space(mesh, space_kind(element));
  const MixedSolution mixed = solve_mixed(FeSpace(mesh, SpaceKind::RT0), f);
  const FeFunction u_src = solve_source(space, f);
  const AlignedMode mode = first_mode(space, u, opt, rule);
  const FeFunction pi_u = element == NcElement::CR ? interp_cr(u, space) : interp_ecr(u, space, rule);

  LocalFe sig(mixed.sigma), src(u_src), uh(mode.u_h), pu(pi_u);
  double t0 = 0, th = 0, icr_a = 0, icr_b = 0, irt = 0, icr1 = 0, icr2 = 0, ecr_b = 0, iecr = 0, sc = 0;
  double h2max = 0.0;
  for (int t = 0; t < mesh->num_triangles(); ++t) {
    const ElementGeometry g = mesh->geometry(t);
    h2max = std::max(h2max, g.h2);
    sig.load(t, g);
    src.load(t, g);
    uh.load(t, g);
    pu.load(t, g);
    const Eigen::Vector3d a = local_rt_coefficients(u.gradient, g);
    const double umean = f.coeffs()[t] / lambda;
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
      const Point x = g.map(rule.points[q]);
      const double w = rule.weights[q] * g.area;
      const double uv = u.value(x);
      const Point ug = u.gradient(x);
      const Point prt = rt_eval(a, g, x);
      const Point s = sig.vec(x);
      const Point gsrc = src.grad(x);
      const Point gh = uh.grad(x);
      const Point drt = ug - prt;
      t0 += w * drt.squaredNorm();
      th += w * g.h2 * uv * uv;
      if (element == NcElement::CR) {
        icr_a += w * drt.dot(s - gsrc);
        icr_b += w * (uv - pu.value(x)) * uv;
        irt += w * drt.dot(prt - s);
        icr1 += w * drt.dot(gsrc - gh);
        icr2 += w * (prt - s).dot(s - gh);
        sc += w * (gh - gsrc).squaredNorm();
      } else {
        ecr_b += w * (uv - pu.value(x)) * (uv - umean);
        iecr += w * drt.dot(s - gh);
        sc += w * (s - gh).squaredNorm();
      }
    }
  }

  ExpansionRow row;
  row.level = mesh->level();
  row.h = mesh->h();
  row.H2 = h2max;
  row.lambda = lambda;
  row.lambda_h = mode.lambda_h;
  row.error = lambda - mode.lambda_h;
  const double lam_term = lambda * lambda / 144.0 * th;
  if (element == NcElement::CR) {
    row.terms = {{"rt_interp", t0},
                 {"lambda2_H2_144", lam_term},
                 {"I_CR", 2.0 * icr_a - 2.0 * lambda * icr_b},
                 {"I_RT", 2.0 * irt},
                 {"I_CR1", 2.0 * icr1},
                 {"I_CR2", 2.0 * icr2}};
  } else {
    row.terms = {{"rt_interp", t0}, {"ecr_consistency", -2.0 * lambda * ecr_b}, {"I_ECR", 2.0 * iecr}};
  }
  for (const auto& t : row.terms) row.sum += t.value;
  row.residual = row.error - row.sum;
  const double gamma_terms = gamma_hessian_terms(u, *mesh, gamma_constants(*mesh), rule);
  row.predicted = element == NcElement::CR ? gamma_terms - lam_term : gamma_terms;
  row.predicted_residual = row.error - row.predicted;
  row.superclose = std::sqrt(sc);
  return row;
}

ExpansionReport decompose_error_levels(Domain domain, int first, int last, NcElement element,
                                       const ExactEigenpair& exact, const AnalysisOptions& opt) {
  ExpansionReport rep;
  rep.element = element;
  Mesh m = build_level(domain, first);
  for (int l = first; l <= last; ++l) {
    if (l > first) m = refine_uniform(m);
    rep.rows.push_back(decompose_error(m, element, exact, opt));
  }
  return rep;
}

std::string expansion_csv(const ExpansionReport& rep) {
  std::string out = "level,h,H2,lambda,lambda_h,error";
  if (!rep.rows.empty())
    for (const auto& t : rep.rows.front().terms) out += "," + t.name;
  out += ",sum,residual,predicted,predicted_residual,superclose\n";
  char buf[64];
  auto num = [&](double v) {
    std::snprintf(buf, sizeof buf, ",%.12e", v);
    out += buf;
  };
  for (const auto& r : rep.rows) {
    out += std::to_string(r.level);
    num(r.h);
    num(r.H2);
    num(r.lambda);
    num(r.lambda_h);
    num(r.error);
    for (const auto& t : r.terms) num(t.value);
    num(r.sum);
    num(r.residual);
    num(r.predicted);
    num(r.predicted_residual);
    num(r.superclose);
    out += "\n";
  }
  return out;
}

}  // namespace eigx
