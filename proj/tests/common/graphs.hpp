#pragma once

#include "qgraph/graph.hpp"
#include "qgraph/parallel.hpp"

#include <cmath>
#include <numbers>
#include <vector>

namespace testgraphs {

using qgraph::Edge;
using qgraph::MetricGraph;
using qgraph::Vertex;
using qgraph::VertexCondition;

inline Edge bond(int id, int from, int to, double len) { return Edge{id, from, to, len}; }
inline Edge lead(int id, int from) { return Edge{id, from, std::nullopt, qgraph::kInfiniteLength}; }

inline std::vector<Vertex> nk_vertices(int n) {
  std::vector<Vertex> vs;
  for (int i = 0; i < n; ++i) vs.push_back({i, VertexCondition::nk()});
  return vs;
}

// Vertex 0 is the degree-one end, vertex 1 carries the loop. Edge 0 runs from
// the loop vertex to the end so that its origin sits on the loop.
inline MetricGraph tadpole(double l1, double l2, VertexCondition loop_vertex = VertexCondition::nk()) {
  auto vs = nk_vertices(2);
  vs[1].condition = loop_vertex;
  return MetricGraph(vs, {bond(0, 1, 0, l1), bond(1, 1, 1, l2)});
}

// Centre is vertex 0; tips are 1..n.
inline MetricGraph star(const std::vector<double>& lengths, VertexCondition tip = VertexCondition::nk()) {
  const int n = static_cast<int>(lengths.size());
  auto vs = nk_vertices(n + 1);
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i) {
    vs[i + 1].condition = tip;
    es.push_back(bond(i, 0, i + 1, lengths[i]));
  }
  return MetricGraph(vs, es);
}

inline MetricGraph equal_star(int n, double l) { return star(std::vector<double>(n, l)); }

inline MetricGraph interval(double l, VertexCondition a, VertexCondition b) {
  return MetricGraph({{0, a}, {1, b}}, {bond(0, 0, 1, l)});
}

inline MetricGraph figure_eight(double l1, double l2) {
  return MetricGraph(nk_vertices(1), {bond(0, 0, 0, l1), bond(1, 0, 0, l2)});
}

inline MetricGraph open_loop(double l) { return MetricGraph(nk_vertices(1), {lead(0, 0), bond(1, 0, 0, l)}); }

// Tips 1,2 NK; tips 3,4 Dirichlet; centre 0.
inline MetricGraph star_dirichlet_tips(const std::vector<double>& l) {
  auto vs = nk_vertices(5);
  vs[3].condition = VertexCondition::dirichlet();
  vs[4].condition = VertexCondition::dirichlet();
  return MetricGraph(vs, {bond(0, 0, 1, l[0]), bond(1, 0, 2, l[1]), bond(2, 0, 3, l[2]), bond(3, 0, 4, l[3])});
}

// v0 (degree one) - e0 - v1, parallel bonds e1, e2 between v1 and v2, and
// e3 from v2 to the Dirichlet vertex v3.
inline MetricGraph tadpole_two_tails(const std::vector<double>& l) {
  auto vs = nk_vertices(4);
  vs[3].condition = VertexCondition::dirichlet();
  return MetricGraph(vs, {bond(0, 1, 0, l[0]), bond(1, 1, 2, l[1]), bond(2, 1, 2, l[2]), bond(3, 2, 3, l[3])});
}

// Square v0-v2-v1-v3-v0 with the diagonal v2-v3; v0 and v1 are the
// degree-two corners.
inline MetricGraph square_diagonal(const std::vector<double>& l) {
  return MetricGraph(nk_vertices(4), {bond(0, 0, 2, l[0]), bond(1, 2, 1, l[1]), bond(2, 1, 3, l[2]),
                                      bond(3, 3, 0, l[3]), bond(4, 2, 3, l[4])});
}

inline MetricGraph complete_graph(int n, double l = 1.0) {
  std::vector<Edge> es;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) es.push_back(bond(static_cast<int>(es.size()), i, j, l));
  return MetricGraph(nk_vertices(n), es);
}

// Random connected multigraph with up to max_bonds bonds, lengths in [lo, hi].
inline MetricGraph random_graph(std::uint64_t seed, int max_bonds, double lo = 0.5, double hi = 2.0,
                                bool allow_loops = true) {
  qgraph::CounterRng rng(seed, 0);
  const int bonds = 1 + static_cast<int>(rng.uniform() * max_bonds);
  const int nv = 2 + static_cast<int>(rng.uniform() * bonds);
  const int v = std::min(nv, bonds + 1);
  std::vector<Edge> es;
  auto len = [&] { return lo + (hi - lo) * rng.uniform(); };
  for (int i = 1; i < v; ++i) {
    const int parent = static_cast<int>(rng.uniform() * i);
    es.push_back(bond(static_cast<int>(es.size()), parent, i, len()));
  }
  while (static_cast<int>(es.size()) < bonds) {
    int a = static_cast<int>(rng.uniform() * v);
    int b = static_cast<int>(rng.uniform() * v);
    if (!allow_loops && a == b) continue;
    es.push_back(bond(static_cast<int>(es.size()), a, b, len()));
  }
  return MetricGraph(nk_vertices(v), es);
}

}  // namespace testgraphs
