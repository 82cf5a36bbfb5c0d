#pragma once

#include <type_traits>
#include <vector>

#include "eigx/mesh.hpp"

namespace eigx {

/// Rule on the reference triangle in barycentric coordinates; weights sum to 1.
struct TriangleRule {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

/// Rule on [0,1]; weights sum to 1.
struct EdgeRule {
  std::vector<double> points;
  std::vector<double> weights;
  int exact_degree = 0;
};

/// Shipped symmetric rules: degree 2 (3 points), 4 (6 points), 6 (12 points).
/// Returns the cheapest shipped rule of at least the requested degree.
const TriangleRule& triangle_rule(int degree);

/// Collapsed tensor Gauss rule (Duffy map) exact to any requested degree.
/// Used where integrals of smooth non-polynomial fields must sit well below
/// the quantities being compared.
TriangleRule collapsed_gauss_rule(int degree);

/// n-point Gauss-Legendre rule on [0,1], exact to degree 2n-1.
EdgeRule gauss_legendre(int n);

/// The 5-point edge rule used by the interpolation operators.
const EdgeRule& default_edge_rule();

namespace detail {
template <class R, class = void>
struct Plain {
  using type = R;
};
template <class R>
struct Plain<R, std::void_t<typename R::PlainObject>> {
  using type = typename R::PlainObject;
};
template <class F>
using IntegralType = typename Plain<std::decay_t<std::invoke_result_t<F, const Point&>>>::type;
}  // namespace detail

template <class F>
auto integrate_triangle(const TriangleRule& rule, const ElementGeometry& geom, F&& f) {
  using Acc = detail::IntegralType<F>;
  Acc acc = rule.weights[0] * f(geom.map(rule.points[0]));
  for (std::size_t q = 1; q < rule.points.size(); ++q) acc += rule.weights[q] * f(geom.map(rule.points[q]));
  return Acc(acc * geom.area);
}

template <class F>
auto integrate_edge(const EdgeRule& rule, const Point& a, const Point& b, F&& f) {
  using Acc = detail::IntegralType<F>;
  const Point d = b - a;
  Acc acc = rule.weights[0] * f(Point(a + rule.points[0] * d));
  for (std::size_t q = 1; q < rule.points.size(); ++q)
    acc += rule.weights[q] * f(Point(a + rule.points[q] * d));
  return Acc(acc * d.norm());
}

}  // namespace eigx
