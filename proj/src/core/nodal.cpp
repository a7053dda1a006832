#include "qgraph/nodal.hpp"

#include "qgraph/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace qgraph {

namespace {

struct UnionFind {
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
  std::vector<int> parent;
};

// Vertex node for each edge end in the cut graph: non-Dirichlet vertices
// keep their id, every Dirichlet endpoint gets a fresh one.
struct CutGraph {
  std::vector<int> from, to;  // indexed by edge id, -1 for leads
  int nodes = 0;
};

CutGraph cut_graph(const MetricGraph& g) {
  CutGraph c;
  c.from.assign(g.edge_count(), -1);
  c.to.assign(g.edge_count(), -1);
  c.nodes = g.vertex_count();
  auto node = [&](int v) { return g.vertex(v).condition.kind == ConditionKind::Dirichlet ? c.nodes++ : v; };
  for (int e : g.bonds()) {
    c.from[e] = node(g.edge(e).origin);
    c.to[e] = node(*g.edge(e).terminus);
  }
  return c;
}

void require_nodal_graph(const MetricGraph& g) {
  require_valid(g);
  if (!g.is_closed()) throw InputError("nodal analysis needs a closed graph", "edges");
  for (const Vertex& v : g.vertices()) {
    const auto& c = v.condition;
    if (c.kind == ConditionKind::CustomUnitary)
      throw InputError("nodal analysis needs delta-type or Dirichlet conditions", "vertices");
    if (c.kind == ConditionKind::Delta && c.alpha < 0)
      throw InputError("nodal analysis needs non-negative delta couplings", "vertices");
  }
  const CutGraph c = cut_graph(g);
  UnionFind uf(c.nodes);
  int components = c.nodes;
  for (int e : g.bonds()) components -= uf.unite(c.from[e], c.to[e]);
  // Dirichlet vertices of the original graph are not nodes of the cut graph.
  for (const Vertex& v : g.vertices())
    if (v.condition.kind == ConditionKind::Dirichlet) --components;
  if (components != 1) throw InputError("graph is disconnected once Dirichlet vertices are cut", "vertices");
}

// Zeros of 2|B| cos(kx + arg B) on the open interval (0, len).
int edge_zero_count(double k, double len, cplx b) {
  constexpr double eps = 1e-8;  // in units of pi
  const double a = (std::arg(b) - 0.5 * std::numbers::pi) / std::numbers::pi;
  const double hi = a + k * len / std::numbers::pi;
  return std::max(0, static_cast<int>(std::ceil(hi - eps) - std::floor(a + eps)) - 1);
}

struct Analysis {
  std::vector<int> zeros;  // per edge id
  double min_vertex_ratio = 0.0;
  bool vertex_nonzero = true;
};

Analysis analyse(const MetricGraph& g, const Eigenfunction& ef, const NodalOptions& opts) {
  require_nodal_graph(g);
  if (!ef.real_gauge) throw InputError("nodal analysis needs a real eigenfunction", "eigenfunction");
  if (ef.B.size() != g.edge_count()) throw InputError("eigenfunction does not match the graph", "eigenfunction");
  Analysis a;
  a.zeros.assign(g.edge_count(), 0);
  const double sup = ef.sup_bound();
  if (!(sup > 0)) throw NonGenericError("eigenfunction vanishes identically");
  a.min_vertex_ratio = std::numeric_limits<double>::infinity();
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (g.vertex(v).condition.kind == ConditionKind::Dirichlet) continue;
    a.min_vertex_ratio = std::min(a.min_vertex_ratio, std::abs(ef.vertex_value(g, v)) / sup);
  }
  for (int e : g.bonds()) {
    // An edge between Dirichlet vertices can carry an identically zero piece.
    if (2.0 * std::abs(ef.B[e]) <= opts.vertex_zero * sup) a.min_vertex_ratio = 0.0;
    a.zeros[e] = edge_zero_count(ef.k, g.edge(e).length, ef.B[e]);
  }
  if (!std::isfinite(a.min_vertex_ratio)) a.min_vertex_ratio = 1.0;
  a.vertex_nonzero = a.min_vertex_ratio > opts.vertex_zero;
  return a;
}

int domain_count(const MetricGraph& g, const std::vector<int>& zeros) {
  const CutGraph c = cut_graph(g);
  std::vector<int> base(g.edge_count(), 0);
  int total = c.nodes;
  for (int e : g.bonds()) {
    base[e] = total;
    total += zeros[e] + 1;
  }
  UnionFind uf(total);
  for (int e : g.bonds()) {
    uf.unite(c.from[e], base[e]);
    uf.unite(c.to[e], base[e] + zeros[e]);
  }
  std::vector<int> roots;
  for (int e : g.bonds())
    for (int s = 0; s <= zeros[e]; ++s) roots.push_back(uf.find(base[e] + s));
  std::sort(roots.begin(), roots.end());
  return static_cast<int>(std::unique(roots.begin(), roots.end()) - roots.begin());
}

void require_generic(const Analysis& a) {
  if (!a.vertex_nonzero)
    throw NonGenericError("eigenfunction vanishes at a vertex (|psi(v)|/sup = " + std::to_string(a.min_vertex_ratio) + ")");
}

}  // namespace

int nodal_beta(const MetricGraph& g) {
  require_nodal_graph(g);
  const CutGraph c = cut_graph(g);
  int dirichlet = 0;
  for (const Vertex& v : g.vertices()) dirichlet += v.condition.kind == ConditionKind::Dirichlet;
  // Connected cut graph: beta = |E| - |V_cut| + 1.
  return g.bond_count() - (c.nodes - dirichlet) + 1;
}

std::vector<int> cycle_edges(const MetricGraph& g) {
  require_nodal_graph(g);
  const CutGraph c = cut_graph(g);
  UnionFind uf(c.nodes);
  std::vector<int> out;
  for (int e : g.bonds())
    if (!uf.unite(c.from[e], c.to[e])) out.push_back(e);
  return out;
}

NodalData nodal_count(const MetricGraph& g, const Eigenfunction& ef, const NodalOptions& opts) {
  const Analysis a = analyse(g, ef, opts);
  require_generic(a);
  NodalData d;
  d.k = ef.k;
  d.min_vertex_ratio = a.min_vertex_ratio;
  d.phi = std::accumulate(a.zeros.begin(), a.zeros.end(), 0);
  return d;
}

NodalData nodal_domain_count(const MetricGraph& g, const Eigenfunction& ef, const NodalOptions& opts) {
  const Analysis a = analyse(g, ef, opts);
  require_generic(a);
  NodalData d;
  d.k = ef.k;
  d.min_vertex_ratio = a.min_vertex_ratio;
  d.nu = domain_count(g, a.zeros);
  return d;
}

std::vector<NodalData> nodal_states(const MetricGraph& g, int n_states, const NodalOptions& opts) {
  require_nodal_graph(g);
  if (n_states < 1) throw InputError("number of states must be positive", "states");
  const int zero = zero_mode_multiplicity(g);
  SpectrumOptions so;
  so.threads = opts.threads;
  const Spectrum sp = find_first_states(g, std::max(1, n_states - zero + 1), so);

  std::vector<NodalData> out(n_states);
  std::vector<int> multiplicity(n_states, zero);
  for (int n = 1; n <= std::min(zero, n_states); ++n) out[n - 1].k = 0.0;
  int n = zero;
  for (const auto& r : sp.records)
    for (int j = 0; j < r.multiplicity && n < n_states; ++j, ++n) {
      out[n].k = r.k;
      multiplicity[n] = r.multiplicity;
    }
  parallel_for(n_states, resolve_threads(opts.threads), [&](int i) {
    NodalData& d = out[i];
    d.n = i + 1;
    d.simple = multiplicity[i] == 1;
    if (!d.simple) return;
    if (d.k == 0.0) {
      // Constant ground state of a graph without Dirichlet or positive couplings.
      d.phi = 0;
      d.nu = 1;
      d.min_vertex_ratio = 1.0;
    } else {
      const auto efs = eigenfunctions_at(g, d.k);
      if (efs.size() != 1) {
        d.simple = false;
        return;
      }
      const Analysis a = analyse(g, efs.front(), opts);
      d.min_vertex_ratio = a.min_vertex_ratio;
      d.vertex_nonzero = a.vertex_nonzero;
      if (!d.vertex_nonzero) return;
      d.phi = std::accumulate(a.zeros.begin(), a.zeros.end(), 0);
      d.nu = domain_count(g, a.zeros);
    }
    d.surplus = d.phi - (d.n - 1);
    d.deficiency = d.n - d.nu;
  });
  return out;
}

SurplusDistribution surplus_distribution(const std::vector<NodalData>& states, int beta) {
  if (beta < 0) throw InputError("beta must be non-negative", "beta");
  SurplusDistribution out;
  out.beta = beta;
  out.counts.assign(beta + 1, 0);
  double sum = 0.0, sum2 = 0.0;
  for (const auto& d : states) {
    if (!d.generic()) {
      ++out.skipped;
      continue;
    }
    if (d.surplus < 0 || d.surplus > beta)
      throw NumericalError("surplus " + std::to_string(d.surplus) + " of state " + std::to_string(d.n) +
                           " is outside [0, " + std::to_string(beta) + "]");
    ++out.counts[d.surplus];
    ++out.generic;
    sum += d.surplus;
    sum2 += static_cast<double>(d.surplus) * d.surplus;
  }
  if (out.generic == 0) throw InputError("no generic states", "states");
  out.probability.resize(beta + 1);
  for (int s = 0; s <= beta; ++s) out.probability[s] = static_cast<double>(out.counts[s]) / out.generic;
  out.mean = sum / out.generic;
  const double var = out.generic > 1 ? std::max(0.0, (sum2 - out.generic * out.mean * out.mean) / (out.generic - 1)) : 0.0;
  out.mean_stderr = std::sqrt(var / out.generic);
  out.deviation_from_half_beta = out.mean - 0.5 * beta;
  out.skipped_fraction = static_cast<double>(out.skipped) / static_cast<double>(states.size());
  return out;
}

SurplusDistribution surplus_distribution(const MetricGraph& g, int n_states, const NodalOptions& opts) {
  return surplus_distribution(nodal_states(g, n_states, opts), nodal_beta(g));
}

}  // namespace qgraph
