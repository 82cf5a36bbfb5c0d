#include "eigx/spaces.hpp"

namespace eigx {

BubbleSet make_bubbles(const ElementGeometry& g) {
  BubbleSet b;
  for (int i = 0; i < 3; ++i) {
    const int im = (i + 2) % 3;
    const int ip = (i + 1) % 3;
    b.cr[i].value = [g, i, im, ip](const Point& x) {
      const Eigen::Vector3d s = g.barycentric(x);
      return (2.0 * s[im] - 1.0) * (2.0 * s[ip] - 1.0) - 2.0 / 3.0 * s[i] + 1.0 / 3.0;
    };
    b.cr[i].gradient = [g, i, im, ip](const Point& x) {
      const Eigen::Vector3d s = g.barycentric(x);
      return Point(2.0 * (2.0 * s[ip] - 1.0) * g.grad_bary[im] +
                   2.0 * (2.0 * s[im] - 1.0) * g.grad_bary[ip] - 2.0 / 3.0 * g.grad_bary[i]);
    };
    const Eigen::Matrix2d hess = 4.0 * (g.grad_bary[im] * g.grad_bary[ip].transpose() +
                                        g.grad_bary[ip] * g.grad_bary[im].transpose());
    b.cr[i].hessian = [hess](const Point&) { return hess; };
  }

  const Point m = g.centroid;
  const double c = 36.0 / g.h2;
  b.ecr.value = [m, c](const Point& x) { return 2.0 - c * (x - m).squaredNorm(); };
  b.ecr.gradient = [m, c](const Point& x) { return Point(-2.0 * c * (x - m)); };
  b.ecr.hessian = [c](const Point&) { return Eigen::Matrix2d(-2.0 * c * Eigen::Matrix2d::Identity()); };

  b.ecr1.value = [m](const Point& x) {
    const Point r = x - m;
    return r.x() * r.x() - r.y() * r.y();
  };
  b.ecr1.gradient = [m](const Point& x) {
    const Point r = x - m;
    return Point(2.0 * r.x(), -2.0 * r.y());
  };
  b.ecr1.hessian = [](const Point&) { return Eigen::Matrix2d(Eigen::Vector2d(2.0, -2.0).asDiagonal()); };

  b.ecr2.value = [m](const Point& x) { return (x.x() - m.x()) * (x.y() - m.y()); };
  b.ecr2.gradient = [m](const Point& x) { return Point(x.y() - m.y(), x.x() - m.x()); };
  b.ecr2.hessian = [](const Point&) {
    Eigen::Matrix2d h;
    h << 0.0, 1.0, 1.0, 0.0;
    return h;
  };
  return b;
}

}  // namespace eigx
