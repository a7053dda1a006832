#include "qgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace qgraph {

MetricGraph::MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges)
    : vertices_(std::move(vertices)), edges_(std::move(edges)) {
  build();
}

void MetricGraph::build() {
  endpoints_.assign(vertices_.size(), {});
  bonds_.clear();
  leads_.clear();
  auto valid = [&](int v) { return v >= 0 && v < vertex_count(); };
  for (int e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges_[e];
    if (ed.is_lead())
      leads_.push_back(e);
    else
      bonds_.push_back(e);
    if (valid(ed.origin)) endpoints_[ed.origin].push_back({e, true});
    if (ed.terminus && valid(*ed.terminus)) endpoints_[*ed.terminus].push_back({e, false});
  }
}

int MetricGraph::bond_count() const { return static_cast<int>(bonds_.size()); }
int MetricGraph::lead_count() const { return static_cast<int>(leads_.size()); }

double MetricGraph::total_length() const {
  double s = 0.0;
  for (int e : bonds_) s += edges_[e].length;
  return s;
}

double MetricGraph::min_bond_length() const {
  double m = kInfiniteLength;
  for (int e : bonds_) m = std::min(m, edges_[e].length);
  return m;
}

double MetricGraph::max_bond_length() const {
  double m = 0.0;
  for (int e : bonds_) m = std::max(m, edges_[e].length);
  return m;
}

bool MetricGraph::has_k_dependent_conditions() const {
  return std::any_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) { return v.condition.k_dependent(); });
}

bool MetricGraph::has_custom_conditions() const {
  return std::any_of(vertices_.begin(), vertices_.end(),
                     [](const Vertex& v) { return v.condition.kind == ConditionKind::CustomUnitary; });
}

bool MetricGraph::has_negative_coupling() const {
  return std::any_of(vertices_.begin(), vertices_.end(), [](const Vertex& v) {
    return v.condition.kind == ConditionKind::Delta && v.condition.alpha < 0;
  });
}

int MetricGraph::slot_of(int v, Endpoint ep) const {
  const auto& eps = endpoints_.at(v);
  for (std::size_t i = 0; i < eps.size(); ++i)
    if (eps[i] == ep) return static_cast<int>(i);
  throw InputError("endpoint not incident to vertex " + std::to_string(v));
}

MetricGraph MetricGraph::with_condition(int v, VertexCondition c) const {
  auto vs = vertices_;
  vs.at(v).condition = std::move(c);
  return MetricGraph(std::move(vs), edges_);
}

MetricGraph MetricGraph::with_edge_flipped(int e) const {
  auto es = edges_;
  Edge& ed = es.at(e);
  if (ed.is_lead()) throw InputError("cannot flip a lead");
  std::swap(ed.origin, *ed.terminus);
  return MetricGraph(vertices_, std::move(es));
}

ValidationReport validate_graph(const MetricGraph& g) {
  ValidationReport rep;
  auto add = [&](std::string kind, std::string msg) { rep.push_back({std::move(kind), std::move(msg)}); };
  const int nv = g.vertex_count();
  if (nv == 0) add("empty", "graph has no vertices");
  for (int i = 0; i < nv; ++i) {
    const Vertex& v = g.vertices()[i];
    if (v.id != i) add("vertex id", "vertices[" + std::to_string(i) + "].id must equal " + std::to_string(i));
    const auto& c = v.condition;
    if (c.kind == ConditionKind::Delta && !std::isfinite(c.alpha))
      add("coupling", "vertices[" + std::to_string(i) + "].condition: delta coupling must be finite");
    if (g.degree(i) == 0) add("isolated vertex", "vertex " + std::to_string(i) + " has no endpoints");
    if (c.kind == ConditionKind::CustomUnitary) {
      const int d = g.degree(i);
      if (c.unitary.rows() != d || c.unitary.cols() != d) {
        add("unitary size", "vertices[" + std::to_string(i) + "].condition: unitary must be " + std::to_string(d) +
                                "x" + std::to_string(d));
      } else {
        const double err =
            (c.unitary * c.unitary.adjoint() - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff();
        if (!(err <= 1e-12))
          add("not unitary", "vertices[" + std::to_string(i) + "].condition: matrix is not unitary");
      }
    }
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edges()[e];
    const std::string where = "edges[" + std::to_string(e) + "]";
    if (ed.id != e) add("edge id", where + ".id must equal " + std::to_string(e));
    if (ed.origin < 0 || ed.origin >= nv) add("dangling endpoint", where + ".from references a missing vertex");
    if (ed.terminus && (*ed.terminus < 0 || *ed.terminus >= nv))
      add("dangling endpoint", where + ".to references a missing vertex");
    if (ed.is_lead()) {
      if (!std::isinf(ed.length) || ed.length < 0) add("lead length", where + ".length: a lead must have length inf");
    } else if (!(ed.length > 0) || !std::isfinite(ed.length)) {
      add("nonpositive length", where + ".length must be a positive finite number");
    }
  }
  if (nv > 0) {
    auto comps = connected_components(g);
    if (comps.size() > 1) add("disconnected", "graph has " + std::to_string(comps.size()) + " connected components");
  }
  return rep;
}

void require_valid(const MetricGraph& g) {
  auto rep = validate_graph(g);
  if (rep.empty()) return;
  std::ostringstream os;
  for (std::size_t i = 0; i < rep.size(); ++i) os << (i ? "; " : "") << rep[i].message;
  throw InputError(os.str(), rep.front().kind);
}

int betti_number(const MetricGraph& g) {
  if (!g.is_closed()) throw InputError("betti number requires a closed graph");
  return g.bond_count() - g.vertex_count() + static_cast<int>(connected_components(g).size());
}

std::vector<std::vector<int>> connected_components(const MetricGraph& g) {
  const int nv = g.vertex_count();
  std::vector<int> parent(nv);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Edge& e : g.edges()) {
    if (!e.terminus) continue;
    if (e.origin < 0 || e.origin >= nv || *e.terminus < 0 || *e.terminus >= nv) continue;
    parent[find(e.origin)] = find(*e.terminus);
  }
  std::vector<std::vector<int>> comps;
  std::vector<int> slot(nv, -1);
  for (int v = 0; v < nv; ++v) {
    int r = find(v);
    if (slot[r] < 0) {
      slot[r] = static_cast<int>(comps.size());
      comps.emplace_back();
    }
    comps[slot[r]].push_back(v);
  }
  return comps;
}

MetricGraph induced_subgraph(const MetricGraph& g, const std::vector<int>& vertex_ids, std::vector<int>* edge_map) {
  std::vector<int> renum(g.vertex_count(), -1);
  std::vector<Vertex> vs;
  for (int v : vertex_ids) {
    renum[v] = static_cast<int>(vs.size());
    vs.push_back({renum[v], g.vertex(v).condition});
  }
  std::vector<Edge> es;
  if (edge_map) edge_map->clear();
  for (const Edge& e : g.edges()) {
    if (renum[e.origin] < 0) continue;
    if (e.terminus && renum[*e.terminus] < 0) continue;
    Edge ne = e;
    ne.id = static_cast<int>(es.size());
    ne.origin = renum[e.origin];
    if (e.terminus) ne.terminus = renum[*e.terminus];
    es.push_back(ne);
    if (edge_map) edge_map->push_back(e.id);
  }
  return MetricGraph(std::move(vs), std::move(es));
}

DirectedEdgeIndex::DirectedEdgeIndex(const MetricGraph& g) {
  b_ = g.bond_count();
  n_ = 2 * b_ + g.lead_count();
  edge_of_.resize(n_);
  origin_.resize(n_);
  terminus_.resize(n_);
  out_slot_.resize(n_);
  in_slot_.resize(n_);
  length_.resize(n_);
  for (int j = 0; j < b_; ++j) {
    const Edge& e = g.edge(g.bonds()[j]);
    const int o = e.origin, t = *e.terminus;
    const int so = g.slot_of(o, {e.id, true});
    const int st = g.slot_of(t, {e.id, false});
    for (int s = 0; s < 2; ++s) {
      const int i = s == 0 ? plus(j) : minus(j);
      edge_of_[i] = e.id;
      length_[i] = e.length;
      origin_[i] = s == 0 ? o : t;
      terminus_[i] = s == 0 ? t : o;
      out_slot_[i] = s == 0 ? so : st;
      in_slot_[i] = s == 0 ? st : so;
    }
  }
  for (int l = 0; l < g.lead_count(); ++l) {
    const Edge& e = g.edge(g.leads()[l]);
    const int i = lead_channel(l);
    const int so = g.slot_of(e.origin, {e.id, true});
    edge_of_[i] = e.id;
    length_[i] = 0.0;
    origin_[i] = terminus_[i] = e.origin;
    out_slot_[i] = in_slot_[i] = so;
  }
}

int DirectedEdgeIndex::reverse(int i) const {
  if (is_lead(i)) return i;
  return i < b_ ? i + b_ : i - b_;
}

std::string DirectedEdgeIndex::label(int i) const {
  if (is_lead(i)) return "lead" + std::to_string(edge_of_[i]);
  return "e" + std::to_string(edge_of_[i]) + (is_plus(i) ? "+" : "-");
}

}  // namespace qgraph
