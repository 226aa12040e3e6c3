#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "mpnp/common/random.hpp"
#include "mpnp/graph/geometry.hpp"

namespace mpnp::graph {

double orient2d(const Point2& a, const Point2& b, const Point2& c) {
  return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
}

double incircle(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) + clift * (adx * bdy - ady * bdx);
}

namespace {

/// Magnitude bound for the incircle expansion, used to judge near-zero results.
double incircle_scale(const Point2& a, const Point2& b, const Point2& c, const Point2& d) {
  const double adx = a.x - d.x, ady = a.y - d.y;
  const double bdx = b.x - d.x, bdy = b.y - d.y;
  const double cdx = c.x - d.x, cdy = c.y - d.y;
  const double alift = adx * adx + ady * ady;
  const double blift = bdx * bdx + bdy * bdy;
  const double clift = cdx * cdx + cdy * cdy;
  return alift * (std::abs(bdx * cdy) + std::abs(bdy * cdx)) + blift * (std::abs(cdx * ady) + std::abs(cdy * adx)) +
         clift * (std::abs(adx * bdy) + std::abs(ady * bdx));
}

constexpr double kDegenerateRelTol = 1e-10;
constexpr double kPerturbation = 1e-9;
constexpr int kMaxPerturbations = 64;

struct Builder {
  std::vector<Point2> pts;  // sites followed by the three super vertices
  std::vector<Triangle> tris;
  std::uint32_t first_super = 0;

  // Returns false when the site is degenerate against some triangle.
  bool try_insert(std::uint32_t site) {
    const Point2& p = pts[site];
    std::vector<std::size_t> bad;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      const auto& tri = tris[t];
      const double det = incircle(pts[tri[0]], pts[tri[1]], pts[tri[2]], p);
      const double bound = incircle_scale(pts[tri[0]], pts[tri[1]], pts[tri[2]], p);
      if (std::abs(det) <= kDegenerateRelTol * bound) return false;
      if (det > 0.0) bad.push_back(t);
    }
    // Boundary of the cavity: directed edges of bad triangles whose reverse is
    // not also an edge of a bad triangle.
    std::map<std::pair<std::uint32_t, std::uint32_t>, int> directed;
    for (std::size_t t : bad)
      for (int k = 0; k < 3; ++k) directed[{tris[t][k], tris[t][(k + 1) % 3]}] = 1;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> boundary;
    for (const auto& [edge, unused] : directed)
      if (!directed.contains({edge.second, edge.first})) boundary.push_back(edge);
    for (const auto& [a, b] : boundary)
      if (orient2d(pts[a], pts[b], p) <= 0.0) return false;

    std::vector<Triangle> kept;
    kept.reserve(tris.size() + boundary.size());
    std::size_t next_bad = 0;
    for (std::size_t t = 0; t < tris.size(); ++t) {
      if (next_bad < bad.size() && bad[next_bad] == t) {
        ++next_bad;
        continue;
      }
      kept.push_back(tris[t]);
    }
    for (const auto& [a, b] : boundary) kept.push_back({a, b, site});
    tris = std::move(kept);
    return true;
  }
};

}  // namespace

Triangulation delaunay_triangulation(std::span<const Point2> sites) {
  if (sites.size() < 3) throw std::invalid_argument("delaunay_triangulation: need at least 3 sites");
  double min_x = sites[0].x, max_x = sites[0].x, min_y = sites[0].y, max_y = sites[0].y;
  for (const auto& s : sites) {
    if (!std::isfinite(s.x) || !std::isfinite(s.y)) throw std::invalid_argument("delaunay_triangulation: non-finite site");
    min_x = std::min(min_x, s.x);
    max_x = std::max(max_x, s.x);
    min_y = std::min(min_y, s.y);
    max_y = std::max(max_y, s.y);
  }
  const double span = std::max({max_x - min_x, max_y - min_y, 1e-12});
  const double cx = 0.5 * (min_x + max_x), cy = 0.5 * (min_y + max_y);
  const double big = 1e4 * span;

  Builder b;
  b.pts.assign(sites.begin(), sites.end());
  b.first_super = static_cast<std::uint32_t>(sites.size());
  b.pts.push_back({cx - big, cy - big});
  b.pts.push_back({cx + big, cy - big});
  b.pts.push_back({cx, cy + big});
  b.tris.push_back({b.first_super, b.first_super + 1, b.first_super + 2});

  Rng nudge(0x5eedf00dULL);
  Triangulation out;
  for (std::uint32_t i = 0; i < sites.size(); ++i) {
    int attempts = 0;
    while (!b.try_insert(i)) {
      if (++attempts > kMaxPerturbations)
        throw std::runtime_error("delaunay_triangulation: could not resolve degenerate site " + std::to_string(i));
      const double angle = 2.0 * 3.141592653589793 * uniform01(nudge);
      b.pts[i].x = sites[i].x + kPerturbation * span * attempts * std::cos(angle);
      b.pts[i].y = sites[i].y + kPerturbation * span * attempts * std::sin(angle);
      ++out.perturbations;
    }
  }

  for (const auto& t : b.tris)
    if (t[0] < b.first_super && t[1] < b.first_super && t[2] < b.first_super) out.triangles.push_back(t);
  out.sites.assign(b.pts.begin(), b.pts.begin() + static_cast<std::ptrdiff_t>(sites.size()));
  return out;
}

std::vector<std::array<std::uint32_t, 2>> triangle_edges(std::span<const Triangle> triangles) {
  std::vector<std::array<std::uint32_t, 2>> edges;
  edges.reserve(triangles.size() * 3);
  for (const auto& t : triangles)
    for (int k = 0; k < 3; ++k) {
      std::uint32_t a = t[k], c = t[(k + 1) % 3];
      if (a > c) std::swap(a, c);
      edges.push_back({a, c});
    }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

}  // namespace mpnp::graph
