#include "eigx/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace eigx {

namespace {

using Ldlt = Eigen::SimplicialLDLT<SparseSymMatrix::Storage, Eigen::Lower>;

// Factorizes and checks the pivots. With require_positive, a non-positive
// pivot is reported as well.
void factorize_checked(Ldlt& solver, const SparseSymMatrix& a, bool require_positive,
                       const char* what) {
  solver.compute(a.lower());
  const Vector d = solver.vectorD();
  const double scale = d.size() ? d.cwiseAbs().maxCoeff() : 0.0;
  const double eps = 64.0 * std::numeric_limits<double>::epsilon() * std::max(scale, 1e-300);
  for (int i = 0; i < d.size(); ++i) {
    if (std::abs(d[i]) <= eps || (require_positive && d[i] < 0.0) || !std::isfinite(d[i])) {
      const int original = solver.permutationPinv().indices()[i];
      throw SingularMatrixError(std::string(what) +
                                    (require_positive && d[i] < 0.0 ? ": matrix is not positive definite"
                                                                    : ": singular matrix"),
                                original);
    }
  }
  if (solver.info() != Eigen::Success) throw SolverError(std::string(what) + ": factorization failed");
}

void fix_sign(Vector& x) {
  Eigen::Index idx = 0;
  x.cwiseAbs().maxCoeff(&idx);
  if (x[idx] < 0.0) x = -x;
}

double residual(const SparseSymMatrix& a, const SparseSymMatrix& b, double lambda, const Vector& x) {
  const Vector bx = b.multiply(x);
  const Vector r = a.multiply(x) - lambda * bx;
  const double denom = std::abs(lambda) * bx.norm();
  return denom > 0.0 ? r.norm() / denom : r.norm();
}

EigenResult dense_path(const SparseSymMatrix& a, const SparseSymMatrix& b, int k) {
  const Eigen::MatrixXd ad = a.dense();
  const Eigen::MatrixXd bd = b.dense();
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ad, bd, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
  if (es.info() != Eigen::Success) throw SolverError("dense eigensolver failed; B may not be positive definite");
  EigenResult r;
  r.solver_id = "dense";
  for (int i = 0; i < k; ++i) {
    Vector x = es.eigenvectors().col(i);
    x /= std::sqrt(x.dot(bd * x));
    fix_sign(x);
    r.eigenvalues.push_back(es.eigenvalues()[i]);
    r.eigenvectors.push_back(std::move(x));
  }
  return r;
}

EigenResult shift_invert_path(const SparseSymMatrix& a, const SparseSymMatrix& b,
                              const EigenOptions& opt) {
  const int n = a.rows();
  const int k = opt.k;
  const int p = std::min(n, std::max(2 * k, k + 8));

  Ldlt fa;
  factorize_checked(fa, a, false, "shift-invert");
  {
    Ldlt fb;
    factorize_checked(fb, b, true, "mass matrix");
  }

  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Eigen::MatrixXd x(n, p);
  for (int j = 0; j < p; ++j)
    for (int i = 0; i < n; ++i) x(i, j) = dist(rng);

  const auto& bl = b.lower();
  const auto& al = a.lower();
  EigenResult r;
  r.solver_id = "shift-invert";
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const Eigen::MatrixXd bx = bl.selfadjointView<Eigen::Lower>() * x;
    const Eigen::MatrixXd y = fa.solve(bx);
    const Eigen::MatrixXd ay = al.selfadjointView<Eigen::Lower>() * y;
    const Eigen::MatrixXd by = bl.selfadjointView<Eigen::Lower>() * y;
    Eigen::MatrixXd ar = y.transpose() * ay;
    Eigen::MatrixXd br = y.transpose() * by;
    ar = 0.5 * (ar + ar.transpose()).eval();
    br = 0.5 * (br + br.transpose()).eval();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(ar, br);
    if (es.info() != Eigen::Success) throw SolverError("Rayleigh-Ritz step failed");
    x = y * es.eigenvectors();
    for (int j = 0; j < p; ++j) {
      const double nb = std::sqrt(x.col(j).dot(bl.selfadjointView<Eigen::Lower>() * x.col(j)));
      x.col(j) /= nb;
    }
    bool converged = true;
    for (int j = 0; j < k && converged; ++j)
      converged = residual(a, b, es.eigenvalues()[j], x.col(j)) <= opt.tol;
    if (converged || it == opt.max_iterations) {
      r.iterations = it;
      for (int j = 0; j < k; ++j) {
        Vector v = x.col(j);
        fix_sign(v);
        r.eigenvalues.push_back(es.eigenvalues()[j]);
        r.eigenvectors.push_back(std::move(v));
      }
      if (!converged)
        throw SolverError("shift-invert iteration did not converge in " +
                          std::to_string(opt.max_iterations) + " iterations");
      break;
    }
  }
  return r;
}

}  // namespace

Vector solve_sym_linear(const SparseSymMatrix& a, const Vector& rhs, LinearPath path) {
  if (rhs.size() != a.rows()) throw PreconditionError("right-hand side has the wrong length");
  if (path == LinearPath::PositiveDefinite) {
    Ldlt solver;
    factorize_checked(solver, a, false, "linear solve");
    return solver.solve(rhs);
  }
  SparseSymMatrix::Storage full = a.full();
  Eigen::SparseLU<SparseSymMatrix::Storage, Eigen::COLAMDOrdering<int>> lu;
  lu.analyzePattern(full);
  lu.factorize(full);
  if (lu.info() != Eigen::Success) {
    // SparseLU reports the failing column in its message; recover the index.
    const std::string msg = lu.lastErrorMessage();
    int pivot = -1;
    if (auto pos = msg.find_last_of(' '); pos != std::string::npos) {
      try {
        pivot = std::stoi(msg.substr(pos + 1));
      } catch (...) {
      }
    }
    throw SingularMatrixError("indefinite solve: " + msg, pivot);
  }
  return lu.solve(rhs);
}

double relative_residual(const SparseSymMatrix& a, const Vector& x, const Vector& b) {
  const double nb = b.norm();
  const double nr = (a.multiply(x) - b).norm();
  return nb > 0.0 ? nr / nb : nr;
}

EigenResult solve_eigs_smallest(const SparseSymMatrix& a, const SparseSymMatrix& b,
                                const EigenOptions& options) {
  if (options.k < 1) throw ConfigError("number of eigenpairs must be at least 1");
  if (a.rows() != b.rows()) throw PreconditionError("A and B differ in size");
  if (options.k > a.rows()) throw ConfigError("more eigenpairs requested than DOFs");
  EigenMethod method = options.method;
  if (method == EigenMethod::Auto)
    method = a.rows() <= options.dense_limit ? EigenMethod::Dense : EigenMethod::ShiftInvert;

  EigenResult r = method == EigenMethod::Dense ? dense_path(a, b, options.k)
                                               : shift_invert_path(a, b, options);
  for (int j = 0; j < options.k; ++j) r.residuals.push_back(residual(a, b, r.eigenvalues[j], r.eigenvectors[j]));
  return r;
}

}  // namespace eigx
