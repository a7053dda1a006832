#include "qgraph/surgery.hpp"

#include "qgraph/dtn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace qgraph {

namespace {

void require_closed(const MetricGraph& g) {
  require_valid(g);
  if (!g.is_closed()) throw InputError("surgery needs a closed graph", "edges");
}

void require_vertex(const MetricGraph& g, int v) {
  if (v < 0 || v >= g.vertex_count()) throw InputError("vertex " + std::to_string(v) + " does not exist", "vertices");
}

MetricGraph component(const MetricGraph& g, const std::vector<int>& vs) {
  std::vector<int> new_id(g.vertex_count(), -1);
  std::vector<Vertex> vertices;
  for (int v : vs) {
    new_id[v] = static_cast<int>(vertices.size());
    vertices.push_back({new_id[v], g.vertex(v).condition});
  }
  std::vector<Edge> edges;
  for (const Edge& e : g.edges()) {
    if (new_id[e.origin] < 0) continue;
    Edge c = e;
    c.id = static_cast<int>(edges.size());
    c.origin = new_id[e.origin];
    if (e.terminus) c.terminus = new_id[*e.terminus];
    edges.push_back(c);
  }
  return MetricGraph(std::move(vertices), std::move(edges));
}

void append(std::vector<double>& out, const Spectrum& sp) {
  for (const auto& r : sp.records)
    for (int j = 0; j < r.multiplicity; ++j) out.push_back(r.k * r.k);
}

}  // namespace

SurgeryRecord impose_dirichlet(const MetricGraph& g, const std::vector<int>& vs) {
  require_closed(g);
  SurgeryRecord r;
  r.operation = "dirichlet";
  r.before = g;
  MetricGraph h = g;
  std::ostringstream p;
  p << "vertices=";
  for (std::size_t i = 0; i < vs.size(); ++i) {
    require_vertex(g, vs[i]);
    p << (i ? "," : "") << vs[i];
    if (h.vertex(vs[i]).condition.kind == ConditionKind::Dirichlet) continue;
    h = h.with_condition(vs[i], VertexCondition::dirichlet());
    ++r.constraints;
  }
  r.parameters = p.str();
  r.after = std::move(h);
  return r;
}

SurgeryRecord split_vertex(const MetricGraph& g, int v, const std::vector<std::vector<int>>& groups,
                           const std::vector<double>& couplings) {
  require_closed(g);
  require_vertex(g, v);
  const VertexCondition& cond = g.vertex(v).condition;
  if (!cond.is_delta_type()) throw InputError("only delta-type vertices can be split", "vertex");
  const auto& eps = g.endpoints(v);
  if (groups.empty()) throw InputError("partition needs at least one group", "groups");
  std::vector<int> seen(eps.size(), 0);
  for (const auto& grp : groups) {
    if (grp.empty()) throw InputError("partition groups must be non-empty", "groups");
    for (int i : grp) {
      if (i < 0 || i >= static_cast<int>(eps.size()))
        throw InputError("endpoint position " + std::to_string(i) + " out of range at vertex " + std::to_string(v), "groups");
      ++seen[i];
    }
  }
  if (std::any_of(seen.begin(), seen.end(), [](int c) { return c != 1; }))
    throw InputError("partition must use every endpoint of the vertex exactly once", "groups");
  if (couplings.empty()) {
    if (cond.kind != ConditionKind::NeumannKirchhoff && cond.alpha != 0.0)
      throw InputError("splitting a delta vertex needs couplings summing to the original", "couplings");
  } else {
    if (couplings.size() != groups.size()) throw InputError("one coupling per group is required", "couplings");
    const double sum = std::accumulate(couplings.begin(), couplings.end(), 0.0);
    if (std::abs(sum - cond.coupling()) > 1e-12 * (1.0 + std::abs(cond.coupling())))
      throw InputError("couplings must sum to the original coupling", "couplings");
  }

  std::vector<Vertex> vertices = g.vertices();
  std::vector<Edge> edges = g.edges();
  auto condition_of = [&](std::size_t j) {
    return couplings.empty() ? VertexCondition::nk() : VertexCondition::delta(couplings[j]);
  };
  vertices[v].condition = condition_of(0);
  for (std::size_t j = 1; j < groups.size(); ++j) {
    const int id = static_cast<int>(vertices.size());
    vertices.push_back({id, condition_of(j)});
    for (int i : groups[j]) {
      const Endpoint ep = eps[i];
      if (ep.at_origin)
        edges[ep.edge].origin = id;
      else
        edges[ep.edge].terminus = id;
    }
  }
  SurgeryRecord r;
  r.operation = "split";
  r.before = g;
  r.after = MetricGraph(std::move(vertices), std::move(edges));
  r.constraints = static_cast<int>(groups.size()) - 1;
  std::ostringstream p;
  p << "vertex=" << v << ";groups=";
  for (std::size_t j = 0; j < groups.size(); ++j) {
    p << (j ? "|" : "");
    for (std::size_t i = 0; i < groups[j].size(); ++i) p << (i ? "," : "") << groups[j][i];
  }
  r.parameters = p.str();
  return r;
}

SurgeryRecord increase_coupling(const MetricGraph& g, const std::map<int, double>& couplings) {
  require_closed(g);
  SurgeryRecord r;
  r.operation = "coupling";
  r.before = g;
  MetricGraph h = g;
  std::ostringstream p;
  p.precision(17);
  bool first = true;
  for (auto [v, a] : couplings) {
    require_vertex(g, v);
    const VertexCondition& c = g.vertex(v).condition;
    if (!c.is_delta_type()) throw InputError("vertex " + std::to_string(v) + " is not delta-type", "couplings");
    if (!std::isfinite(a) || a < c.coupling())
      throw InputError("coupling at vertex " + std::to_string(v) + " can only increase", "couplings");
    p << (first ? "" : ",") << v << ":" << a;
    first = false;
    if (a == c.coupling()) continue;
    h = h.with_condition(v, VertexCondition::delta(a));
    ++r.constraints;
  }
  r.parameters = p.str();
  r.after = std::move(h);
  return r;
}

std::vector<double> energies_up_to(const MetricGraph& g, double k_max, SpectrumRoute route, int threads) {
  if (!(k_max > 0)) throw InputError("k_max must be positive", "kmax");
  if (!g.is_closed()) throw InputError("spectra need a closed graph", "edges");
  if (g.has_negative_coupling()) throw InputError("negative couplings give negative energies, which are out of scope", "vertices");
  SpectrumOptions opts;
  opts.threads = threads;
  std::vector<double> out;
  for (const auto& vs : connected_components(g)) {
    const MetricGraph c = component(g, vs);
    if (c.bond_count() == 0) continue;
    out.insert(out.end(), zero_mode_multiplicity(c), 0.0);
    const Spectrum sp = find_spectrum(c, k_max, opts);
    if (route == SpectrumRoute::Scattering) {
      append(out, sp);
      continue;
    }
    const DtnSpectrum dtn = find_spectrum_dtn(c, k_max, opts);
    append(out, dtn.spectrum);
    for (const auto& r : sp.records)
      if (in_masked_window(dtn, r.k))
        for (int j = 0; j < r.multiplicity; ++j) out.push_back(r.k * r.k);
  }
  std::sort(out.begin(), out.end());
  return out;
}

InterlacingDirection direction_of(const SurgeryRecord& r) {
  return r.operation == "split" ? InterlacingDirection::Lower : InterlacingDirection::Raise;
}

InterlacingReport check_interlacing(const std::vector<double>& before, const std::vector<double>& after, int d,
                                    InterlacingDirection direction, const std::string& operation) {
  if (d < 0) throw InputError("shift d must be non-negative", "d");
  if (static_cast<int>(before.size()) < d + 1 || static_cast<int>(after.size()) < d + 1)
    throw InputError("incomplete spectra: need at least d + 1 = " + std::to_string(d + 1) + " levels on both sides",
                     "spectra");
  InterlacingReport rep;
  rep.operation = operation;
  rep.d = d;
  rep.direction = direction;
  // Both lists hold every level up to a common cutoff; an index past the end
  // stands for a level above it. Index <= 0 stands for -inf.
  constexpr double kAbove = std::numeric_limits<double>::infinity();
  auto at = [](const std::vector<double>& v, int n) {
    if (n <= 0) return -std::numeric_limits<double>::infinity();
    return n <= static_cast<int>(v.size()) ? v[n - 1] : kAbove;
  };
  auto decided = [](double a, double b) { return !(a == kAbove && b == kAbove); };
  auto holds = [](double a, double b) {
    if (a == kAbove) return false;  // b is below the cutoff
    if (b == kAbove || a == -std::numeric_limits<double>::infinity()) return true;
    return a <= b + 1e-8 * (1.0 + std::abs(b));
  };
  const int n_max = static_cast<int>(std::max(before.size(), after.size()));
  for (int n = 1; n <= n_max; ++n) {
    double lo, val = at(after, n), hi;
    if (direction == InterlacingDirection::Raise) {
      lo = at(before, n);
      hi = at(before, n + d);
    } else {
      lo = at(before, n - d);
      hi = at(before, n);
    }
    const bool both = decided(lo, val) && decided(val, hi);
    if (!decided(lo, val) && !decided(val, hi)) continue;
    const bool ok = (!decided(lo, val) || holds(lo, val)) && (!decided(val, hi) || holds(val, hi));
    if (!ok) rep.violations.push_back({n, lo, val, hi});
    if (both) ++rep.checked_n;
  }
  return rep;
}

InterlacingReport check_surgery(const SurgeryRecord& r, double k_max, SpectrumRoute route, int threads) {
  auto before = energies_up_to(r.before, k_max, route, threads);
  auto after = energies_up_to(r.after, k_max, route, threads);
  // A level shared by both graphs can land on either side of k_max; cut both
  // lists in the middle of the widest gap ending in the top 10% instead. The
  // gap may start lower, so a degenerate cluster at k_max is never split.
  std::vector<double> all = before;
  all.insert(all.end(), after.begin(), after.end());
  all.push_back(k_max * k_max);
  std::sort(all.begin(), all.end());
  double cut = k_max * k_max, widest = 0.0;
  for (std::size_t i = 1; i < all.size(); ++i)
    if (all[i] >= 0.9 * k_max * k_max && all[i] - all[i - 1] > widest) {
      widest = all[i] - all[i - 1];
      cut = 0.5 * (all[i] + all[i - 1]);
    }
  auto trim = [cut](std::vector<double>& v) { v.erase(std::upper_bound(v.begin(), v.end(), cut), v.end()); };
  trim(before);
  trim(after);
  return check_interlacing(before, after, r.constraints, direction_of(r), r.operation);
}

}  // namespace qgraph
