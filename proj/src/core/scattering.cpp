#include "qgraph/scattering.hpp"

#include <cmath>

namespace qgraph {

namespace {

cplx delta_weight(int degree, double alpha, double k) { return 2.0 / (cplx(degree, 0.0) + cplx(0.0, alpha / k)); }

}  // namespace

Eigen::MatrixXcd vertex_scattering_matrix(const VertexCondition& cond, int degree, double k) {
  if (degree < 1) throw InputError("vertex degree must be positive");
  const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(degree, degree);
  const Eigen::MatrixXcd E = Eigen::MatrixXcd::Ones(degree, degree);
  switch (cond.kind) {
    case ConditionKind::NeumannKirchhoff: return -I + (2.0 / degree) * E;
    case ConditionKind::Dirichlet: return -I;
    case ConditionKind::Delta:
      if (cond.alpha == 0.0) return -I + (2.0 / degree) * E;
      if (k == 0.0) throw InputError("delta vertex scattering matrix is singular at k = 0");
      return -I + delta_weight(degree, cond.alpha, k) * E;
    case ConditionKind::CustomUnitary:
      if (cond.unitary.rows() != degree) throw InputError("custom unitary size does not match vertex degree");
      return cond.unitary;
  }
  return I;
}

Eigen::MatrixXcd vertex_scattering_derivative(const VertexCondition& cond, int degree, double k) {
  if (!cond.k_dependent()) return Eigen::MatrixXcd::Zero(degree, degree);
  const cplx w = cplx(degree, 0.0) + cplx(0.0, cond.alpha / k);
  const cplx dc = cplx(0.0, 2.0 * cond.alpha) / (k * k * w * w);
  return dc * Eigen::MatrixXcd::Ones(degree, degree);
}

namespace {

template <class VertexMatrix>
Eigen::MatrixXcd assemble(const MetricGraph& g, const DirectedEdgeIndex& idx, VertexMatrix vm) {
  const int n = idx.size();
  std::vector<Eigen::MatrixXcd> sig(g.vertex_count());
  for (int v = 0; v < g.vertex_count(); ++v) sig[v] = vm(v);
  Eigen::MatrixXcd S = Eigen::MatrixXcd::Zero(n, n);
  for (int col = 0; col < n; ++col) {
    const int v = idx.terminus(col);
    for (int row = 0; row < n; ++row)
      if (idx.origin(row) == v) S(row, col) = sig[v](idx.out_slot(row), idx.in_slot(col));
  }
  return S;
}

}  // namespace

EdgeScatteringMatrix assemble_edge_scattering(const MetricGraph& g, double k) {
  DirectedEdgeIndex idx(g);
  EdgeScatteringMatrix out;
  out.k_dependent = g.has_k_dependent_conditions();
  out.S = assemble(g, idx, [&](int v) { return vertex_scattering_matrix(g.vertex(v).condition, g.degree(v), k); });
  return out;
}

QuantumMapEvaluator::QuantumMapEvaluator(const MetricGraph& g)
    : g_(g), idx_(g), k_dependent_(g.has_k_dependent_conditions()) {
  if (!k_dependent_) S0_ = assemble_edge_scattering(g_, 1.0).S;
  lengths_ = Eigen::VectorXd::Zero(idx_.size());
  for (int i = 0; i < idx_.size(); ++i)
    if (!idx_.is_lead(i)) lengths_[i] = idx_.length(i);
}

Eigen::MatrixXcd QuantumMapEvaluator::edge_scattering(double k) const {
  if (!k_dependent_) return S0_;
  return assemble(g_, idx_,
                  [&](int v) { return vertex_scattering_matrix(g_.vertex(v).condition, g_.degree(v), k); });
}

Eigen::MatrixXcd QuantumMapEvaluator::edge_scattering_derivative(double k) const {
  const int n = idx_.size();
  if (!k_dependent_) return Eigen::MatrixXcd::Zero(n, n);
  return assemble(g_, idx_,
                  [&](int v) { return vertex_scattering_derivative(g_.vertex(v).condition, g_.degree(v), k); });
}

Eigen::VectorXcd QuantumMapEvaluator::transport(double k, const MagneticPhases& alpha) const {
  const int n = idx_.size();
  Eigen::VectorXcd t(n);
  for (int i = 0; i < n; ++i) {
    if (idx_.is_lead(i)) {
      t[i] = 1.0;
      continue;
    }
    double phase = k * idx_.length(i);
    if (alpha.size() > 0) {
      const double a = alpha[idx_.edge_of(i)];
      phase += idx_.is_plus(i) ? a : -a;
    }
    t[i] = std::polar(1.0, phase);
  }
  return t;
}

Eigen::MatrixXcd QuantumMapEvaluator::operator()(double k, const MagneticPhases& alpha) const {
  return transport(k, alpha).asDiagonal() * edge_scattering(k);
}

Eigen::MatrixXcd QuantumMapEvaluator::derivative(double k, const MagneticPhases& alpha) const {
  const Eigen::VectorXcd t = transport(k, alpha);
  const cplx i(0.0, 1.0);
  Eigen::MatrixXcd d = (i * lengths_.cast<cplx>().cwiseProduct(t)).asDiagonal() * edge_scattering(k);
  if (k_dependent_) d += t.asDiagonal() * edge_scattering_derivative(k);
  return d;
}

Eigen::MatrixXcd quantum_map(const MetricGraph& g, double k, const MagneticPhases& alpha) {
  return QuantumMapEvaluator(g)(k, alpha);
}

OpenBlocks split_open_blocks(const Eigen::MatrixXcd& U, int nb) {
  const int nl = static_cast<int>(U.rows()) - nb;
  return {U.bottomRightCorner(nl, nl), U.bottomLeftCorner(nl, nb), U.topRightCorner(nb, nl), U.topLeftCorner(nb, nb)};
}

namespace {

OpenScattering open_at(const QuantumMapEvaluator& ev, double k) {
  const int nb = 2 * ev.index().bond_count();
  const OpenBlocks b = split_open_blocks(ev(k), nb);
  OpenScattering out;
  if (nb == 0) {
    out.S = b.LL;
    out.R = Eigen::MatrixXcd::Zero(0, b.LL.cols());
    return out;
  }
  const Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(nb, nb) - b.BB;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
  const auto& sv = svd.singularValues();
  out.condition = sv[nb - 1] > 0 ? sv[0] / sv[nb - 1] : std::numeric_limits<double>::infinity();
  out.R = A.colPivHouseholderQr().solve(b.BL);
  out.S = b.LL + b.LB * out.R;
  return out;
}

}  // namespace

OpenScattering open_scattering_matrix(const MetricGraph& g, double k) {
  if (g.is_closed()) throw InputError("open scattering requires at least one lead");
  QuantumMapEvaluator ev(g);
  OpenScattering out = open_at(ev, k);
  if (out.condition > kSingularCondition) {
    OpenScattering lo = open_at(ev, k - kSingularShift);
    OpenScattering hi = open_at(ev, k + kSingularShift);
    out.S = 0.5 * (lo.S + hi.S);
    out.R = 0.5 * (lo.R + hi.R);
    out.singular = true;
  }
  return out;
}

WignerSmith wigner_smith(const MetricGraph& g, double k, double h) {
  OpenScattering s0 = open_scattering_matrix(g, k);
  OpenScattering sp = open_scattering_matrix(g, k + h);
  OpenScattering sm = open_scattering_matrix(g, k - h);
  WignerSmith out;
  out.singular = s0.singular || sp.singular || sm.singular;
  const Eigen::MatrixXcd dS = (sp.S - sm.S) / (2.0 * h);
  out.Q = cplx(0.0, -1.0) * s0.S.adjoint() * dS;
  return out;
}

double unitarity_defect(const Eigen::MatrixXcd& U) {
  if (U.size() == 0) return 0.0;
  return (U * U.adjoint() - Eigen::MatrixXcd::Identity(U.rows(), U.cols())).cwiseAbs().maxCoeff();
}

}  // namespace qgraph
