#include "qgraph/dtn.hpp"

#include "qgraph/parallel.hpp"

#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qgraph {

EdgeDtN edge_dtn(double length, double k, int edge_id) {
  const double s = std::sin(k * length);
  if (!(std::abs(s) > kDtnPoleSine))
    throw DtnPoleError("edge " + std::to_string(edge_id) + " is at a Dirichlet pole (sin(k l) = 0)", edge_id);
  return {-k * std::cos(k * length) / s, k / s};
}

MetricGraph split_loops(const MetricGraph& g) {
  std::vector<Vertex> vs = g.vertices();
  std::vector<Edge> es = g.edges();
  int next_edge = 0;
  for (const auto& e : es) next_edge = std::max(next_edge, e.id + 1);
  const std::size_t original = es.size();
  for (std::size_t i = 0; i < original; ++i) {
    if (!es[i].is_loop()) continue;
    const int dummy = static_cast<int>(vs.size());
    vs.push_back({dummy, VertexCondition::nk()});
    const double half = 0.5 * es[i].length;
    const int v = es[i].origin;
    es[i].terminus = dummy;
    es[i].length = half;
    es.push_back(Edge{next_edge++, dummy, v, half});
  }
  return MetricGraph(vs, es);
}

namespace {

// Graph the DtN matrix is assembled on, with edge ids traced back to the input.
struct Working {
  MetricGraph g;
  std::vector<int> source_edge;  // by working edge id
  int original_vertices = 0;
  bool direct = false;
};

Working make_working(const MetricGraph& g, LoopMode mode) {
  require_valid(g);
  if (!g.is_closed()) throw InputError("DtN maps are defined for closed graphs", "edges");
  for (const auto& v : g.vertices())
    if (v.condition.kind == ConditionKind::CustomUnitary)
      throw InputError("custom unitary vertex conditions have no DtN form", "vertices[" + std::to_string(v.id) + "]");
  Working w;
  w.original_vertices = g.vertex_count();
  w.direct = mode == LoopMode::Direct;
  w.g = w.direct ? g : split_loops(g);
  w.source_edge.resize(w.g.edge_count());
  for (const auto& e : w.g.edges()) w.source_edge[e.id] = e.id;
  if (!w.direct) {
    // Second halves of split loops were appended in loop order.
    int j = g.edge_count();
    for (const auto& e : g.edges())
      if (e.is_loop()) w.source_edge[j++] = e.id;
  }
  return w;
}

DtnMatrix assemble(const Working& w, double k) {
  const int n = w.g.vertex_count();
  DtnMatrix m;
  m.k = k;
  m.values = Eigen::MatrixXd::Zero(n, n);
  for (const auto& v : w.g.vertices()) {
    m.vertices.push_back(v.id);
    m.conditions.push_back(v.condition);
    m.dummy.push_back(v.id >= w.original_vertices);
  }
  for (const auto& e : w.g.edges()) {
    const EdgeDtN d = edge_dtn(e.length, k, w.source_edge[e.id]);
    const int a = e.origin, b = *e.terminus;
    if (a == b) {
      m.values(a, a) += 2.0 * d.A + 2.0 * d.B;
      continue;
    }
    m.values(a, a) += d.A;
    m.values(b, b) += d.A;
    m.values(a, b) += d.B;
    m.values(b, a) += d.B;
  }
  return m;
}

double coupling_of(const VertexCondition& c) { return c.kind == ConditionKind::Delta ? c.coupling() : 0.0; }

// Lambda - Theta restricted to the non-Dirichlet rows, scaled by sin(k l)/k
// per edge touching one of them.
double secular_value(const Working& w, double k, Eigen::MatrixXd* reduced = nullptr) {
  const DtnMatrix m = assemble(w, k);
  std::vector<int> keep;
  for (std::size_t i = 0; i < m.conditions.size(); ++i)
    if (m.conditions[i].kind != ConditionKind::Dirichlet) keep.push_back(static_cast<int>(i));
  const int r = static_cast<int>(keep.size());
  Eigen::MatrixXd M(r, r);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < r; ++j) M(i, j) = m.values(keep[i], keep[j]);
    M(i, i) -= coupling_of(m.conditions[keep[i]]);
  }
  double scale = 1.0;
  for (const auto& e : w.g.edges()) {
    const bool touches = w.g.vertex(e.origin).condition.kind != ConditionKind::Dirichlet ||
                         w.g.vertex(*e.terminus).condition.kind != ConditionKind::Dirichlet;
    if (touches) scale *= std::sin(k * e.length) / k;
  }
  if (reduced) *reduced = M;
  return r == 0 ? scale : M.partialPivLu().determinant() * scale;
}

// Singular values of the symmetrically equilibrated matrix, normalised by the largest.
Eigen::VectorXd relative_singular_values(const Eigen::MatrixXd& M) {
  const int n = static_cast<int>(M.rows());
  if (n == 0) return {};
  Eigen::VectorXd r(n);
  for (int i = 0; i < n; ++i) {
    const double mx = M.row(i).cwiseAbs().maxCoeff();
    r[i] = mx > 0 ? 1.0 / std::sqrt(mx) : 1.0;
  }
  const Eigen::MatrixXd E = r.asDiagonal() * M * r.asDiagonal();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(E);
  Eigen::VectorXd s = svd.singularValues();
  return s[0] > 0 ? Eigen::VectorXd(s / s[0]) : s;
}

struct RootInfo {
  double ratio = 1.0;
  int nullity = 0;
};

RootInfo root_info(const Working& w, double k, double threshold) {
  Eigen::MatrixXd M;
  secular_value(w, k, &M);
  RootInfo info;
  if (M.rows() == 0) return info;
  const Eigen::VectorXd s = relative_singular_values(M);
  info.ratio = s[s.size() - 1];
  for (int i = 0; i < s.size(); ++i) info.nullity += s[i] < threshold;
  return info;
}

double bracket_root(const Working& w, double a, double b, double fa, double fb, double tol) {
  std::uintmax_t iters = 200;
  auto f = [&](double k) { return secular_value(w, k); };
  auto done = [tol](double x, double y) { return std::abs(y - x) <= tol * (1.0 + std::abs(x)); };
  const auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb, done, iters);
  return 0.5 * (r.first + r.second);
}

template <class F>
double golden_minimum(F f, double a, double b, double tol) {
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 300 && b - a > tol * (1.0 + std::abs(a)); ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return fc < fd ? c : d;
}

struct Found {
  double k;
  int multiplicity;
  double ratio;
  int nullity;
};

constexpr double kTangentNullity = 1e-8;

}  // namespace

DtnMatrix all_vertex_dtn(const MetricGraph& g, double k, LoopMode mode) {
  return assemble(make_working(g, mode), k);
}

DtnMatrix reduce_dtn(const DtnMatrix& lambda, const std::vector<int>& boundary) {
  const int n = static_cast<int>(lambda.vertices.size());
  std::vector<int> brow, irow;
  for (int v : boundary) {
    auto it = std::find(lambda.vertices.begin(), lambda.vertices.end(), v);
    if (it == lambda.vertices.end()) throw InputError("boundary vertex " + std::to_string(v) + " not in the matrix", "boundary");
    const int row = static_cast<int>(it - lambda.vertices.begin());
    if (std::find(brow.begin(), brow.end(), row) != brow.end())
      throw InputError("boundary vertex " + std::to_string(v) + " listed twice", "boundary");
    brow.push_back(row);
  }
  for (int i = 0; i < n; ++i)
    if (std::find(brow.begin(), brow.end(), i) == brow.end() && lambda.conditions[i].kind != ConditionKind::Dirichlet)
      irow.push_back(i);

  const int nb = static_cast<int>(brow.size()), ni = static_cast<int>(irow.size());
  Eigen::MatrixXd BB(nb, nb), BI(nb, ni), II(ni, ni);
  for (int i = 0; i < nb; ++i) {
    for (int j = 0; j < nb; ++j) BB(i, j) = lambda.values(brow[i], brow[j]);
    for (int j = 0; j < ni; ++j) BI(i, j) = lambda.values(brow[i], irow[j]);
  }
  for (int i = 0; i < ni; ++i) {
    for (int j = 0; j < ni; ++j) II(i, j) = lambda.values(irow[i], irow[j]);
    II(i, i) -= coupling_of(lambda.conditions[irow[i]]);
  }

  DtnMatrix out;
  out.k = lambda.k;
  for (int r : brow) {
    out.vertices.push_back(lambda.vertices[r]);
    out.conditions.push_back(lambda.conditions[r]);
    out.dummy.push_back(lambda.dummy[r]);
  }
  if (ni == 0) {
    out.values = BB;
    return out;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(II);
  const auto& s = svd.singularValues();
  // Relative to the whole matrix: a 1x1 interior has condition one.
  const double scale = std::max(s[0], lambda.values.cwiseAbs().maxCoeff());
  if (!(s[ni - 1] * kSingularCondition > scale))
    throw NumericalError("singular interior block: k^2 is an eigenvalue of the graph with Dirichlet boundary");
  Eigen::MatrixXd X = II.partialPivLu().solve(BI.transpose());
  Eigen::MatrixXd S = BB - BI * X;
  out.values = 0.5 * (S + S.transpose());
  return out;
}

double dtn_secular(const MetricGraph& g, double k, LoopMode mode) { return secular_value(make_working(g, mode), k); }

bool in_masked_window(const DtnSpectrum& s, double k) {
  for (const auto& [a, b] : s.masked)
    if (k >= a && k <= b) return true;
  return false;
}

DtnSpectrum find_spectrum_dtn(const MetricGraph& g, double k_max, const SpectrumOptions& opts, LoopMode mode) {
  const Working w = make_working(g, mode);
  if (!(k_max > 0)) throw InputError("kmax must be positive", "kmax");
  DtnSpectrum out;
  Spectrum& sp = out.spectrum;
  const double L = g.total_length();
  sp.grid_step = opts.grid_step > 0 ? opts.grid_step : std::numbers::pi / (8.0 * L);
  sp.tol = opts.tol;
  sp.k_min = opts.k_floor > 0 ? opts.k_floor : (g.has_k_dependent_conditions() ? 1e-3 * sp.grid_step : sp.grid_step);
  sp.k_max = k_max;
  sp.zero_modes = zero_mode_multiplicity(g);
  if (g.has_negative_coupling())
    sp.warnings.push_back("negative delta coupling: negative spectrum is out of scope");
  if (sp.k_min >= k_max) return out;

  // Windows around the Dirichlet eigenvalues of every working edge.
  std::vector<std::pair<double, double>> win;
  for (const auto& e : w.g.edges()) {
    const double p = std::numbers::pi / e.length;
    for (long n = std::max(1L, static_cast<long>(std::floor((sp.k_min - kDtnMaskRadius) / p)));; ++n) {
      const double c = n * p;
      if (c - kDtnMaskRadius > k_max) break;
      if (c + kDtnMaskRadius < sp.k_min) continue;
      win.push_back({c - kDtnMaskRadius, c + kDtnMaskRadius});
    }
  }
  std::sort(win.begin(), win.end());
  for (const auto& iv : win) {
    if (!out.masked.empty() && iv.first <= out.masked.back().second)
      out.masked.back().second = std::max(out.masked.back().second, iv.second);
    else
      out.masked.push_back(iv);
  }
  auto masked = [&](double k) { return in_masked_window(out, k); };

  std::vector<double> pts;
  for (double k = sp.k_min; k < k_max; k += sp.grid_step) {
    if (!masked(k)) pts.push_back(k);
    if (pts.size() > 50'000'000) throw InputError("grid too fine for the requested range", "grid_step");
  }
  if (!masked(k_max)) pts.push_back(k_max);
  for (const auto& [a, b] : out.masked) {
    if (a > sp.k_min && a < k_max) pts.push_back(a);
    if (b > sp.k_min && b < k_max) pts.push_back(b);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const int threads = resolve_threads(opts.threads);
  const int np = static_cast<int>(pts.size());
  std::vector<double> D(np);
  parallel_for(np, threads, [&](int i) { D[i] = secular_value(w, pts[i]); });
  std::vector<char> open_cell(np > 0 ? np - 1 : 0);
  for (int i = 0; i + 1 < np; ++i) open_cell[i] = !masked(0.5 * (pts[i] + pts[i + 1]));

  std::vector<std::vector<Found>> found(np);
  parallel_for(np, threads, [&](int i) {
    auto& f = found[i];
    auto add = [&](double k, bool tangent) {
      const RootInfo info = root_info(w, k, opts.degeneracy_threshold);
      if (tangent && !(info.ratio < kTangentNullity)) return;
      f.push_back({k, std::max(info.nullity, tangent ? 2 : 1), info.ratio, info.nullity});
    };
    if (i + 1 < np && open_cell[i] && D[i] * D[i + 1] < 0) add(bracket_root(w, pts[i], pts[i + 1], D[i], D[i + 1], opts.tol), false);
    if (i == 0 || i + 1 >= np || !open_cell[i - 1] || !open_cell[i]) {
      if (D[i] == 0.0) add(pts[i], false);
      return;
    }
    if (D[i] == 0.0) {
      add(pts[i], false);
      return;
    }
    const bool same = D[i - 1] * D[i] > 0 && D[i] * D[i + 1] > 0;
    if (!same || std::abs(D[i]) > std::abs(D[i - 1]) || std::abs(D[i]) > std::abs(D[i + 1])) return;
    // Local minimum of |D| without a sign change: either a close pair of
    // roots or a root of even order.
    const double a = pts[i - 1], b = pts[i + 1], sgn = D[i] > 0 ? 1.0 : -1.0;
    double flip = std::numeric_limits<double>::quiet_NaN(), fflip = 0.0;
    auto absd = [&](double k) {
      const double v = secular_value(w, k);
      if (v * sgn < 0 && std::isnan(flip)) {
        flip = k;
        fflip = v;
      }
      return std::abs(v);
    };
    const double km = golden_minimum(absd, a, b, 1e-15);
    if (!std::isnan(flip)) {
      add(bracket_root(w, a, flip, D[i - 1], fflip, opts.tol), false);
      add(bracket_root(w, flip, b, fflip, D[i + 1], opts.tol), false);
      return;
    }
    const double h = std::min(1e-6 * (1.0 + km), 0.5 * (b - a));
    auto ratio = [&](double k) { return root_info(w, k, opts.degeneracy_threshold).ratio; };
    const double kr = golden_minimum(ratio, std::max(a, km - h), std::min(b, km + h), opts.tol);
    add(kr, true);
  });

  std::vector<Found> roots;
  for (auto& f : found) roots.insert(roots.end(), f.begin(), f.end());
  std::sort(roots.begin(), roots.end(), [](const Found& a, const Found& b) { return a.k < b.k; });
  for (const auto& r : roots) {
    if (!sp.records.empty() && r.k - sp.records.back().k <= 1e-9 * (1.0 + r.k)) {
      sp.warnings.push_back("duplicate DtN root near k=" + std::to_string(r.k) + " merged");
      continue;
    }
    sp.records.push_back({r.k, r.multiplicity, r.ratio, r.nullity});
  }
  return out;
}

}  // namespace qgraph
