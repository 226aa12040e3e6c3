#include "mpnp/graph/generators.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace mpnp::graph {

Graph torus_lattice(std::size_t rows, std::size_t cols) {
  if (rows < 3 || cols < 3) throw std::invalid_argument("torus_lattice: both dimensions must be >= 3");
  std::set<Edge> edges;
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) {
      const auto u = static_cast<NodeId>(r * cols + c);
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          const std::size_t rr = (r + rows - 1 + static_cast<std::size_t>(dr + 1)) % rows;
          const std::size_t cc = (c + cols - 1 + static_cast<std::size_t>(dc + 1)) % cols;
          const auto v = static_cast<NodeId>(rr * cols + cc);
          edges.insert(u < v ? Edge{u, v} : Edge{v, u});
        }
    }
  Graph g(rows * cols, {edges.begin(), edges.end()});
  g.meta["family"] = "torus";
  g.meta["rows"] = rows;
  g.meta["cols"] = cols;
  return g;
}

Graph watts_strogatz(std::size_t n, std::size_t k, double p, Rng& rng) {
  if (k % 2 != 0) throw std::invalid_argument("watts_strogatz: k must be even");
  if (n <= k) throw std::invalid_argument("watts_strogatz: n must exceed k");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("watts_strogatz: p must lie in [0, 1]");
  std::vector<std::set<NodeId>> adj(n);
  auto connect = [&](NodeId a, NodeId b) {
    adj[a].insert(b);
    adj[b].insert(a);
  };
  for (std::size_t j = 1; j <= k / 2; ++j)
    for (std::size_t u = 0; u < n; ++u) connect(static_cast<NodeId>(u), static_cast<NodeId>((u + j) % n));

  // Rewire each lattice edge (u, u+j) to (u, w) with probability p, one ring
  // distance at a time; w is redrawn until it is neither u nor a neighbour.
  std::size_t rewired = 0;
  for (std::size_t j = 1; j <= k / 2; ++j) {
    for (std::size_t u = 0; u < n; ++u) {
      if (uniform01(rng) >= p) continue;
      const auto a = static_cast<NodeId>(u);
      const auto v = static_cast<NodeId>((u + j) % n);
      if (!adj[a].contains(v)) continue;  // already moved by an earlier rewiring
      if (adj[a].size() >= n - 1) continue;
      NodeId w;
      do {
        w = static_cast<NodeId>(uniform_index(rng, 0, n - 1));
      } while (w == a || adj[a].contains(w));
      adj[a].erase(v);
      adj[v].erase(a);
      connect(a, w);
      ++rewired;
    }
  }
  std::vector<Edge> edges;
  for (std::size_t u = 0; u < n; ++u)
    for (NodeId v : adj[u])
      if (u < v) edges.push_back({static_cast<NodeId>(u), v});
  Graph g(n, std::move(edges));
  g.meta["family"] = "watts_strogatz";
  g.meta["k"] = k;
  g.meta["p"] = p;
  g.meta["rewired"] = rewired;
  g.meta["connected"] = is_connected(g);
  return g;
}

Graph barabasi_albert(std::size_t n, std::size_t m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("barabasi_albert: m must be >= 1");
  if (n <= m) throw std::invalid_argument("barabasi_albert: n must exceed m");
  std::vector<Edge> edges;
  std::vector<NodeId> targets(m);
  for (std::size_t i = 0; i < m; ++i) targets[i] = static_cast<NodeId>(i);
  // Each node appears once per incident edge, so uniform draws are degree-proportional.
  std::vector<NodeId> repeated;
  for (std::size_t source = m; source < n; ++source) {
    const auto s = static_cast<NodeId>(source);
    for (NodeId t : targets) edges.push_back({t, s});
    repeated.insert(repeated.end(), targets.begin(), targets.end());
    repeated.insert(repeated.end(), m, s);
    std::set<NodeId> chosen;
    while (chosen.size() < m) chosen.insert(repeated[uniform_index(rng, 0, repeated.size() - 1)]);
    targets.assign(chosen.begin(), chosen.end());
  }
  Graph g(n, std::move(edges));
  g.meta["family"] = "barabasi_albert";
  g.meta["m"] = m;
  return g;
}

Graph voronoi_adjacency(std::span<const Point2> sites) {
  if (sites.size() < 3) throw std::invalid_argument("voronoi_adjacency: need at least 3 sites");
  const Triangulation tri = delaunay_triangulation(sites);
  std::vector<Edge> edges;
  for (const auto& [a, b] : triangle_edges(tri.triangles)) edges.push_back({a, b});
  Graph g(sites.size(), std::move(edges));
  Positions pos{2, {}};
  for (const auto& s : sites) {
    pos.coords.push_back(s.x);
    pos.coords.push_back(s.y);
  }
  g.set_positions(std::move(pos));
  g.meta["family"] = "voronoi";
  g.meta["perturbations"] = tri.perturbations;
  return g;
}

Graph voronoi_adjacency(std::size_t n, Rng& rng) {
  if (n < 3) throw std::invalid_argument("voronoi_adjacency: need at least 3 sites");
  std::vector<Point2> sites(n);
  for (auto& s : sites) {
    s.x = uniform01(rng);
    s.y = uniform01(rng);
  }
  return voronoi_adjacency(sites);
}

Graph spherical_voronoi_adjacency(std::span<const Point3> sites) {
  if (sites.size() < 4) throw std::invalid_argument("spherical_voronoi_adjacency: need at least 4 sites");
  const Hull hull = convex_hull_3d(sites);
  const Point3 origin{};
  for (const auto& f : hull.faces)
    if (orient3d(sites[f[0]], sites[f[1]], sites[f[2]], origin) >= -1e-12)
      throw std::invalid_argument("spherical_voronoi_adjacency: sites do not surround the centre (hemisphere-degenerate)");
  std::vector<Edge> edges;
  for (const auto& [a, b] : triangle_edges(hull.faces)) edges.push_back({a, b});
  Graph g(sites.size(), std::move(edges));
  Positions pos{3, {}};
  for (const auto& s : sites) pos.coords.insert(pos.coords.end(), {s.x, s.y, s.z});
  g.set_positions(std::move(pos));
  g.meta["family"] = "spherical_voronoi";
  g.meta["hull_faces"] = hull.faces.size();
  return g;
}

Graph spherical_voronoi_adjacency(std::size_t n, Rng& rng) {
  if (n < 4) throw std::invalid_argument("spherical_voronoi_adjacency: need at least 4 sites");
  std::vector<Point3> sites(n);
  for (auto& s : sites) {
    double norm = 0.0;
    do {
      s = {standard_normal(rng), standard_normal(rng), standard_normal(rng)};
      norm = std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z);
    } while (norm < 1e-12);
    s.x /= norm;
    s.y /= norm;
    s.z /= norm;
  }
  return spherical_voronoi_adjacency(sites);
}

}  // namespace mpnp::graph
