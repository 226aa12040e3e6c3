#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "mpnp/graph/geometry.hpp"

namespace mpnp::graph {

double orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d) {
  const double abx = b.x - a.x, aby = b.y - a.y, abz = b.z - a.z;
  const double acx = c.x - a.x, acy = c.y - a.y, acz = c.z - a.z;
  const double adx = d.x - a.x, ady = d.y - a.y, adz = d.z - a.z;
  const double nx = aby * acz - abz * acy;
  const double ny = abz * acx - abx * acz;
  const double nz = abx * acy - aby * acx;
  return nx * adx + ny * ady + nz * adz;
}

namespace {

double norm(const Point3& a, const Point3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) + (a.z - b.z) * (a.z - b.z));
}

}  // namespace

Hull convex_hull_3d(std::span<const Point3> points) {
  const std::size_t n = points.size();
  if (n < 4) throw std::invalid_argument("convex_hull_3d: need at least 4 points");
  double extent = 0.0;
  for (const auto& p : points) extent = std::max({extent, std::abs(p.x), std::abs(p.y), std::abs(p.z)});
  const double tol = 1e-12 * std::max(extent * extent * extent, 1e-300);

  // Initial tetrahedron from the first non-degenerate quadruple.
  std::uint32_t i0 = 0, i1 = 0, i2 = 0, i3 = 0;
  bool found = false;
  for (std::uint32_t a = 1; a < n && !found; ++a) {
    if (norm(points[0], points[a]) <= 1e-12 * extent) continue;
    for (std::uint32_t b = a + 1; b < n && !found; ++b) {
      const Point3& p = points[0];
      const Point3& q = points[a];
      const Point3& r = points[b];
      const double cx = (q.y - p.y) * (r.z - p.z) - (q.z - p.z) * (r.y - p.y);
      const double cy = (q.z - p.z) * (r.x - p.x) - (q.x - p.x) * (r.z - p.z);
      const double cz = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
      if (std::sqrt(cx * cx + cy * cy + cz * cz) <= 1e-12 * extent * extent) continue;
      for (std::uint32_t c = b + 1; c < n; ++c) {
        if (std::abs(orient3d(p, q, r, points[c])) > tol) {
          i0 = 0, i1 = a, i2 = b, i3 = c;
          found = true;
          break;
        }
      }
    }
  }
  if (!found) throw std::invalid_argument("convex_hull_3d: points are coplanar");

  std::vector<Triangle> faces;
  auto add_oriented = [&](std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t inside) {
    if (orient3d(points[a], points[b], points[c], points[inside]) > 0.0) std::swap(b, c);
    faces.push_back({a, b, c});
  };
  add_oriented(i0, i1, i2, i3);
  add_oriented(i0, i1, i3, i2);
  add_oriented(i0, i2, i3, i1);
  add_oriented(i1, i2, i3, i0);

  for (std::uint32_t p = 0; p < n; ++p) {
    if (p == i0 || p == i1 || p == i2 || p == i3) continue;
    std::vector<char> visible(faces.size(), 0);
    bool any_strict = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      const double v = orient3d(points[faces[f][0]], points[faces[f][1]], points[faces[f][2]], points[p]);
      if (v > tol) {
        visible[f] = 1;
        any_strict = true;
      } else if (v >= -tol) {
        visible[f] = 2;  // coplanar
      }
    }
    if (!any_strict) {
      // On or inside the hull. A coplanar point on the boundary still has to
      // become a vertex, so coplanar faces are replaced; interior points are dropped.
      bool coplanar = std::find(visible.begin(), visible.end(), 2) != visible.end();
      if (!coplanar) continue;
    }
    std::set<std::pair<std::uint32_t, std::uint32_t>> directed;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (visible[f])
        for (int k = 0; k < 3; ++k) directed.insert({faces[f][k], faces[f][(k + 1) % 3]});
    std::vector<Triangle> next;
    next.reserve(faces.size() + 8);
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (const auto& [a, b] : directed)
      if (!directed.contains({b, a})) next.push_back({a, b, p});
    faces = std::move(next);
  }
  return Hull{std::move(faces)};
}

}  // namespace mpnp::graph
