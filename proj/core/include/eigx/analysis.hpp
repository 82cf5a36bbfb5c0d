#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eigx/problem.hpp"

namespace eigx {

/// u = 2 sin(m pi x1) sin(n pi x2) on the unit square, lambda = (m^2+n^2) pi^2.
ExactEigenpair square_eigenpair(int m, int n);

/// The k smallest values of (m^2+n^2) pi^2, with multiplicity.
std::vector<double> square_exact_eigenvalues(int k);

/// w = c + b.x + x^T H x / 2 with value, gradient and Hessian.
ScalarField quadratic_field(double c, const Point& b, const Eigen::Matrix2d& hess);
ScalarField linear_field(double c, const Point& b);

// ---------------------------------------------------------------------------
// Raviart-Thomas interpolation error constants

/// gamma^{11}, gamma^{12}, gamma^{22} of one element for normalization h.
std::array<double, 3> element_gamma(const ElementGeometry& g, double h);

struct GammaConstants {
  double h = 0.0;  // normalization: maximum element diameter
  std::vector<double> g11, g12, g22;

  /// Largest relative deviation of any element from element 0.
  double spread() const;
  bool is_constant(double rel_tol = 1e-12) const { return spread() <= rel_tol; }
};

GammaConstants gamma_constants(const Mesh& mesh);

/// Coefficients a_j (outward flux / 2|K|) of the local Fortin interpolant
/// sum_j a_j (x - p_j) of q, using edge quadrature.
Eigen::Vector3d local_rt_coefficients(const VectorField& q, const ElementGeometry& g);

/// ||(I - Pi_RT) grad w||_{0,K}^2 by its gamma expansion; w must be quadratic.
double rt_error_quadratic(const ScalarField& w, const ElementGeometry& g);

/// ||(I - Pi_RT) grad w||_{0,K}^2 by direct quadrature.
double rt_error_direct(const ScalarField& w, const ElementGeometry& g, const TriangleRule& rule);

struct RtErrorField {
  double direct = 0.0;
  double expansion = 0.0;
};

/// Global ||(I - Pi_RT) grad u||_0^2 and its h^2 gamma expansion.
RtErrorField rt_error_field(const ScalarField& u, const Mesh& mesh);

/// h^2 (g11/4 ||u11-u22||^2 + g22 ||u12||^2 + g12 (u11-u22, u12)) summed
/// elementwise with each element's gamma.
double gamma_hessian_terms(const ScalarField& u, const Mesh& mesh, const GammaConstants& gamma,
                           const TriangleRule& rule);

// ---------------------------------------------------------------------------
// Local identities

enum class NcElement { CR, ECR };

std::string_view to_string(NcElement e);
NcElement nc_element_from_string(std::string_view name);
inline SpaceKind space_kind(NcElement e) { return e == NcElement::CR ? SpaceKind::CR : SpaceKind::ECR; }

/// (w - Pi w, v - Pi^0 v) over K1 u K2 for a parallelogram pair. Throws
/// PreconditionError if the triangles do not form a parallelogram.
double parallelogram_orthogonality(const std::array<Point, 3>& k1, const std::array<Point, 3>& k2,
                                   const ScalarField& w, const ScalarField& v, NcElement which);

/// max over basis functions of |int_K grad(w - Pi w) . grad phi_i| / |K| on one element.
double commuting_defect(const ScalarField& w, const ElementGeometry& g, NcElement which);

/// (I - Pi_CR) w on K from the bubble expansion -1/8 sum |e_i|^2 d_tt w phi_CR^i.
double cr_error_expansion(const ScalarField& w, const ElementGeometry& g, const Point& x);

/// Pi_CR w or Pi_ECR w evaluated on a single element.
double local_interpolant(const ScalarField& w, const ElementGeometry& g, NcElement which,
                         const Point& x);

// ---------------------------------------------------------------------------
// Global identity checks

struct AnalysisOptions {
  int quad_degree = 14;     // collapsed Gauss degree for integrals of analytic fields
  double eig_tol = 1e-12;
  std::uint64_t seed = 7;
};

struct MariniReport {
  double cr = 0.0;   // max |sigma_RT - (grad u_CR^f - f/2 (x - M))| / ||sigma_RT||_inf
  double ecr = 0.0;  // max |sigma_RT - grad u_ECR^f| / ||sigma_RT||_inf
  double sigma_inf = 0.0;
};

/// Solves the mixed, CR and ECR source problems with load Pi^0 (lambda u)
/// and compares the solutions elementwise. Requires homogeneous Dirichlet
/// data on the whole boundary.
MariniReport verify_marini(const Mesh& mesh, double lambda, const ScalarField& u,
                           const AnalysisOptions& options = {});

struct IdentityReport {
  double lambda = 0.0;
  double lambda_h = 0.0;
  double lhs = 0.0;                 // lambda - lambda_h
  double energy = 0.0;              // ||grad_h (u - u_h)||^2
  double interpolation = 0.0;       // -2 lambda_h (u - Pi u, u_h)
  double l2 = 0.0;                  // -lambda_h ||u - u_h||^2
  double rhs = 0.0;
  double residual = 0.0;            // |lhs - rhs| / |lhs|
  double consistency = 0.0;         // a_h(u, u_h) - lambda_h (u, u_h)
  double commuted = 0.0;            // -lambda_h (u - Pi u, u_h)
  double commuting_residual = 0.0;  // |consistency - commuted| / |a_h(u, u_h)|
};

/// First discrete eigenpair of `element` against the exact pair.
IdentityReport error_identity_check(const Mesh& mesh, NcElement element, const ExactEigenpair& exact,
                                    const AnalysisOptions& options = {});

struct ExpansionTerm {
  std::string name;
  double value = 0.0;
};

struct ExpansionRow {
  int level = 0;
  double h = 0.0;
  double H2 = 0.0;  // max H_K^2
  double lambda = 0.0;
  double lambda_h = 0.0;
  double error = 0.0;  // lambda - lambda_h
  std::vector<ExpansionTerm> terms;
  double sum = 0.0;
  double residual = 0.0;            // error - sum
  double predicted = 0.0;           // leading-term formula
  double predicted_residual = 0.0;  // error - predicted
  double superclose = 0.0;          // CR: ||grad_h(u_CR - u_CR^f)||, ECR: ||sigma_RT - grad_h u_ECR||

  double term(const std::string& name) const;
};

struct ExpansionReport {
  NcElement element = NcElement::CR;
  std::vector<ExpansionRow> rows;
};

/// The term-by-term decomposition of lambda - lambda_h on one mesh.
ExpansionRow decompose_error(const Mesh& mesh, NcElement element, const ExactEigenpair& exact,
                             const AnalysisOptions& options = {});

ExpansionReport decompose_error_levels(Domain domain, int first, int last, NcElement element,
                                       const ExactEigenpair& exact, const AnalysisOptions& options = {});

/// CSV with one row per level and one column per term.
std::string expansion_csv(const ExpansionReport& report);

}  // namespace eigx
