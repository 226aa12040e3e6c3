#pragma once

#include "mpnp/common/random.hpp"
#include "mpnp/graph/geometry.hpp"
#include "mpnp/graph/graph.hpp"

namespace mpnp::graph {

/// Moore-neighbourhood (8-connected) torus. Node id = row * cols + col.
Graph torus_lattice(std::size_t rows, std::size_t cols);

/// Ring lattice of k nearest neighbours, each edge rewired with probability p.
/// meta records "rewired" and "connected".
Graph watts_strogatz(std::size_t n, std::size_t k, double p, Rng& rng);

/// Preferential attachment starting from m isolated seed nodes; node m joins
/// all seeds, later nodes pick m distinct degree-weighted targets.
Graph barabasi_albert(std::size_t n, std::size_t m, Rng& rng);

/// Sites uniform in the unit square; edges join sites whose Voronoi cells share a border.
Graph voronoi_adjacency(std::size_t n, Rng& rng);
Graph voronoi_adjacency(std::span<const Point2> sites);

/// Sites uniform on the unit sphere; edges of the convex hull (spherical Delaunay).
Graph spherical_voronoi_adjacency(std::size_t n, Rng& rng);
Graph spherical_voronoi_adjacency(std::span<const Point3> sites);

}  // namespace mpnp::graph
