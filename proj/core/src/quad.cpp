#include "eigx/quad.hpp"

#include <cmath>
#include <numbers>

namespace eigx {

namespace {

void add_s21(TriangleRule& r, double a, double w) {
  const double b = 1.0 - 2.0 * a;
  for (const auto& p : {Eigen::Vector3d(a, a, b), Eigen::Vector3d(a, b, a), Eigen::Vector3d(b, a, a)}) {
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

void add_s111(TriangleRule& r, double a, double b, double w) {
  const double c = 1.0 - a - b;
  for (const auto& p : {Eigen::Vector3d(a, b, c), Eigen::Vector3d(a, c, b), Eigen::Vector3d(b, a, c),
                        Eigen::Vector3d(b, c, a), Eigen::Vector3d(c, a, b), Eigen::Vector3d(c, b, a)}) {
    r.points.push_back(p);
    r.weights.push_back(w);
  }
}

TriangleRule make_degree2() {
  TriangleRule r;
  r.exact_degree = 2;
  add_s21(r, 1.0 / 6.0, 1.0 / 3.0);
  return r;
}

// Symmetric Dunavant rules, coordinates refined to full double precision by
// tests/oracles/dunavant_rules.py.
TriangleRule make_degree4() {
  TriangleRule r;
  r.exact_degree = 4;
  add_s21(r, 0.09157621350977074345957146, 0.1099517436553218676383263);
  add_s21(r, 0.4459484909159648863183293, 0.2233815896780114656950071);
  return r;
}

TriangleRule make_degree6() {
  TriangleRule r;
  r.exact_degree = 6;
  add_s21(r, 0.2492867451709104212916386, 0.1167862757263793660252896);
  add_s21(r, 0.0630890144915022283403316, 0.05084490637020681692093681);
  add_s111(r, 0.05314504984481694735324967, 0.3103524510337844054166077,
           0.08285107561837357519355346);
  return r;
}

}  // namespace

const TriangleRule& triangle_rule(int degree) {
  static const TriangleRule d2 = make_degree2();
  static const TriangleRule d4 = make_degree4();
  static const TriangleRule d6 = make_degree6();
  if (degree <= 2) return d2;
  if (degree <= 4) return d4;
  if (degree <= 6) return d6;
  throw ConfigError("no shipped triangle rule of degree " + std::to_string(degree) +
                    "; use collapsed_gauss_rule");
}

EdgeRule gauss_legendre(int n) {
  if (n < 1) throw ConfigError("Gauss rule needs at least one point");
  EdgeRule r;
  r.exact_degree = 2 * n - 1;
  r.points.resize(n);
  r.weights.resize(n);
  for (int i = 0; i < n; ++i) {
    // Newton on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute derivative at the converged root for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.points[n - 1 - i] = 0.5 * (1.0 + x);
    r.weights[n - 1 - i] = 0.5 * w;
  }
  return r;
}

const EdgeRule& default_edge_rule() {
  static const EdgeRule r = gauss_legendre(5);
  return r;
}

TriangleRule collapsed_gauss_rule(int degree) {
  const int n = degree / 2 + 1;
  const EdgeRule g = gauss_legendre(n + 1);  // one extra point for the Jacobian factor
  TriangleRule r;
  r.exact_degree = degree;
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= n; ++j) {
      const double u = g.points[i];
      const double v = g.points[j];
      const double x = u;
      const double y = v * (1.0 - u);
      r.points.emplace_back(1.0 - x - y, x, y);
      r.weights.push_back(2.0 * g.weights[i] * g.weights[j] * (1.0 - u));
    }
  }
  return r;
}

}  // namespace eigx
