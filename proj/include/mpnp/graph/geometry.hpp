#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace mpnp::graph {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

struct Point3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

using Triangle = std::array<std::uint32_t, 3>;

/// > 0 when a, b, c turn counter-clockwise.
double orient2d(const Point2& a, const Point2& b, const Point2& c);

/// > 0 when d lies strictly inside the circumcircle of counter-clockwise (a, b, c).
double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d);

/// Signed volume (times 6) of tetrahedron (a, b, c, d); > 0 when d is on the
/// side the counter-clockwise face (a, b, c) faces.
double orient3d(const Point3& a, const Point3& b, const Point3& c, const Point3& d);

struct Triangulation {
  std::vector<Point2> sites;        // input sites after any degeneracy perturbation
  std::vector<Triangle> triangles;  // counter-clockwise
  std::size_t perturbations = 0;
};

/// Planar Delaunay triangulation by incremental Bowyer-Watson insertion into a
/// super-triangle. A site that is (numerically) cocircular with an existing
/// triangle is nudged by 1e-9 and re-inserted.
Triangulation delaunay_triangulation(std::span<const Point2> sites);

struct Hull {
  std::vector<Triangle> faces;  // outward facing, counter-clockwise seen from outside
};

/// Incremental 3-D convex hull. Throws when all points are coplanar.
Hull convex_hull_3d(std::span<const Point3> points);

/// Unique undirected edges of a triangle list, u < v, sorted.
std::vector<std::array<std::uint32_t, 2>> triangle_edges(std::span<const Triangle> triangles);

}  // namespace mpnp::graph
