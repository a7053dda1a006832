#include "qgraph/spectrum.hpp"

#include <cmath>

namespace qgraph {

cplx Eigenfunction::value(int e, double x) const {
  const cplx ikx(0.0, k * x);
  return A[e] * std::exp(-ikx) + B[e] * std::exp(ikx);
}

cplx Eigenfunction::derivative(int e, double x) const {
  const cplx ik(0.0, k);
  const cplx ikx(0.0, k * x);
  return -ik * A[e] * std::exp(-ikx) + ik * B[e] * std::exp(ikx);
}

cplx Eigenfunction::vertex_value(const MetricGraph& g, int v) const {
  cplx s = 0.0;
  const auto& eps = g.endpoints(v);
  for (const Endpoint& ep : eps) {
    const Edge& e = g.edge(ep.edge);
    if (e.is_lead()) {
      s += value(ep.edge, 0.0);
      continue;
    }
    s += value(ep.edge, ep.at_origin ? 0.0 : e.length);
  }
  return eps.empty() ? cplx(0.0) : s / static_cast<double>(eps.size());
}

double Eigenfunction::edge_bound(int e) const { return std::abs(A[e]) + std::abs(B[e]); }

double Eigenfunction::sup_bound() const {
  double m = 0.0;
  for (int e = 0; e < A.size(); ++e) m = std::max(m, edge_bound(e));
  return m;
}

namespace {

cplx edge_inner(double k, double len, cplx a1, cplx b1, cplx a2, cplx b2) {
  cplx ip;
  if (k == 0.0)
    ip = len;
  else
    ip = (std::exp(cplx(0.0, 2.0 * k * len)) - 1.0) / cplx(0.0, 2.0 * k);
  return std::conj(a1) * a2 * len + std::conj(b1) * b2 * len + std::conj(a1) * b2 * ip + std::conj(b1) * a2 * std::conj(ip);
}

Eigenfunction from_incoming(const MetricGraph& g, const DirectedEdgeIndex& idx, const Eigen::MatrixXcd& S, double k,
                            const Eigen::VectorXcd& ain) {
  Eigenfunction f;
  f.k = k;
  f.A = Eigen::VectorXcd::Zero(g.edge_count());
  f.B = Eigen::VectorXcd::Zero(g.edge_count());
  const Eigen::VectorXcd aout = S * ain;
  for (int j = 0; j < idx.bond_count(); ++j) {
    const int e = idx.edge_of(idx.plus(j));
    f.A[e] = ain[idx.minus(j)];
    f.B[e] = aout[idx.plus(j)];
  }
  return f;
}

std::vector<Eigenfunction> combine(const std::vector<Eigenfunction>& basis, const Eigen::MatrixXcd& C) {
  std::vector<Eigenfunction> out;
  for (int c = 0; c < C.cols(); ++c) {
    Eigenfunction f = basis.front();
    f.A.setZero();
    f.B.setZero();
    for (std::size_t i = 0; i < basis.size(); ++i) {
      f.A += C(i, c) * basis[i].A;
      f.B += C(i, c) * basis[i].B;
    }
    out.push_back(std::move(f));
  }
  return out;
}

Eigen::MatrixXcd gram(const MetricGraph& g, const std::vector<Eigenfunction>& fs) {
  const int m = static_cast<int>(fs.size());
  Eigen::MatrixXcd G(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) G(i, j) = inner_product(g, fs[i], fs[j]);
  return G;
}

std::vector<Eigenfunction> orthonormalize(const MetricGraph& g, const std::vector<Eigenfunction>& fs, int keep) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(gram(g, fs));
  const int m = static_cast<int>(fs.size());
  Eigen::MatrixXcd C(m, keep);
  for (int c = 0; c < keep; ++c) {
    const int j = m - 1 - c;
    C.col(c) = es.eigenvectors().col(j) / std::sqrt(std::max(es.eigenvalues()[j], 1e-300));
  }
  return combine(fs, C);
}

bool time_reversal_symmetric(const MetricGraph& g) {
  for (const Vertex& v : g.vertices()) {
    const auto& c = v.condition;
    if (c.kind == ConditionKind::CustomUnitary && (c.unitary - c.unitary.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      return false;
  }
  return true;
}

void fix_sign(Eigenfunction& f) {
  int best = 0;
  for (int e = 0; e < f.B.size(); ++e)
    if (std::abs(f.B[e]) > std::abs(f.B[best]) + 1e-12) best = e;
  const cplx ref = f.B[best];
  if (std::abs(ref) == 0.0) return;
  if (f.real_gauge) {
    if (ref.real() < 0) {
      f.A = -f.A;
      f.B = -f.B;
    }
  } else {
    const cplx ph = std::conj(ref) / std::abs(ref);
    f.A *= ph;
    f.B *= ph;
  }
}

std::vector<Eigenfunction> finish(const MetricGraph& g, std::vector<Eigenfunction> basis) {
  const int m = static_cast<int>(basis.size());
  std::vector<Eigenfunction> out = orthonormalize(g, basis, m);
  if (time_reversal_symmetric(g)) {
    std::vector<Eigenfunction> parts;
    for (const auto& f : out) {
      Eigenfunction re = f, im = f;
      re.A = 0.5 * (f.A + f.B.conjugate());
      re.B = 0.5 * (f.B + f.A.conjugate());
      im.A = (f.A - f.B.conjugate()) / cplx(0.0, 2.0);
      im.B = (f.B - f.A.conjugate()) / cplx(0.0, 2.0);
      parts.push_back(re);
      parts.push_back(im);
    }
    out = orthonormalize(g, parts, m);
    for (auto& f : out) {
      // Exactly real: A = conj(B).
      const Eigen::VectorXcd b = 0.5 * (f.B + f.A.conjugate());
      f.B = b;
      f.A = b.conjugate();
      f.real_gauge = true;
    }
  }
  for (auto& f : out) fix_sign(f);
  return out;
}

}  // namespace

cplx inner_product(const MetricGraph& g, const Eigenfunction& a, const Eigenfunction& b) {
  cplx s = 0.0;
  for (int e : g.bonds()) s += edge_inner(a.k, g.edge(e).length, a.A[e], a.B[e], b.A[e], b.B[e]);
  return s;
}

std::vector<Eigenfunction> eigenfunctions_at(const MetricGraph& g, double k, double residual_tol) {
  require_valid(g);
  if (!g.is_closed()) throw InputError("eigenfunctions require a closed graph; use bound states for open graphs");
  QuantumMapEvaluator ev(g);
  const Eigen::MatrixXcd U = ev(k);
  const int n = static_cast<int>(U.rows());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd::Identity(n, n) - U, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int m = 0;
  for (int j = 0; j < n; ++j) m += s[j] < 2e-7;
  if (m == 0) {
    if (s[n - 1] > residual_tol)
      throw NumericalError("residual " + std::to_string(s[n - 1]) + " at k=" + std::to_string(k) + " exceeds tolerance");
    m = 1;
  }
  const Eigen::MatrixXcd S = ev.edge_scattering(k);
  std::vector<Eigenfunction> basis;
  for (int j = 0; j < m; ++j) basis.push_back(from_incoming(g, ev.index(), S, k, svd.matrixV().col(n - 1 - j)));
  return finish(g, std::move(basis));
}

std::vector<Eigenfunction> bound_states_at(const MetricGraph& g, double k, double residual_tol) {
  require_valid(g);
  QuantumMapEvaluator ev(g);
  const int nb = 2 * ev.index().bond_count();
  const int nl = ev.index().lead_count();
  if (nb == 0) return {};
  const Eigen::MatrixXcd U = ev(k);
  const OpenBlocks b = split_open_blocks(U, nb);
  Eigen::MatrixXcd M(nb + nl, nb);
  M.topRows(nb) = Eigen::MatrixXcd::Identity(nb, nb) - b.BB;
  M.bottomRows(nl) = b.LB;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  int m = 0;
  for (int j = 0; j < nb; ++j) m += s[j] < 2e-7;
  if (m == 0 && s[nb - 1] <= residual_tol) m = 1;
  if (m == 0) return {};
  const Eigen::MatrixXcd S = ev.edge_scattering(k);
  std::vector<Eigenfunction> basis;
  for (int j = 0; j < m; ++j) {
    Eigen::VectorXcd ain = Eigen::VectorXcd::Zero(nb + nl);
    ain.head(nb) = svd.matrixV().col(nb - 1 - j);
    basis.push_back(from_incoming(g, ev.index(), S, k, ain));
  }
  return finish(g, std::move(basis));
}

std::vector<PerfectScar> detect_perfect_scars(const MetricGraph& g, const std::vector<Eigenfunction>& efs,
                                              double tol) {
  std::vector<PerfectScar> out;
  for (std::size_t i = 0; i < efs.size(); ++i) {
    const double sup = efs[i].sup_bound();
    if (sup == 0.0) continue;
    PerfectScar sc;
    sc.index = static_cast<int>(i);
    for (int e = 0; e < g.edge_count(); ++e) (efs[i].edge_bound(e) <= tol * sup ? sc.vanishing : sc.support).push_back(e);
    if (!sc.vanishing.empty() && !sc.support.empty()) out.push_back(std::move(sc));
  }
  return out;
}

}  // namespace qgraph
