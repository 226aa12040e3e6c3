#pragma once

#include <cmath>

#include "mpnp/graph/geometry.hpp"

namespace mpnp::test_support {

// Circumcircle test computed from the explicit centre, independent of incircle().
inline bool strictly_inside_circumcircle(graph::Point2 a, graph::Point2 b, graph::Point2 c, graph::Point2 p, double slack) {
  const double d = 2 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
  const double a2 = a.x * a.x + a.y * a.y, b2 = b.x * b.x + b.y * b.y, c2 = c.x * c.x + c.y * c.y;
  const double ux = (a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / d;
  const double uy = (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / d;
  const double r = std::hypot(a.x - ux, a.y - uy);
  return std::hypot(p.x - ux, p.y - uy) < r - slack;
}

}  // namespace mpnp::test_support
