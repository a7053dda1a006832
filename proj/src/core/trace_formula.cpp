#include "qgraph/trace_formula.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace qgraph {

namespace {

double gaussian_transform(double sigma, double x) {
  return sigma * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * sigma * sigma * x * x);
}

// (T S)^n expanded in the bond phases: one matrix per visit vector.
class WalkExpansion {
 public:
  WalkExpansion(const MetricGraph& g, double max_length) : idx_(g), max_length_(max_length) {
    S_ = assemble_edge_scattering(g, 1.0).S;
    const int n = idx_.size();
    for (int b = 0; b < idx_.bond_count(); ++b) lengths_.push_back(idx_.length(idx_.plus(b)));
    level_[std::vector<int>(idx_.bond_count(), 0)] = Eigen::MatrixXcd::Identity(n, n);
  }

  void advance() {
    std::map<std::vector<int>, Eigen::MatrixXcd> next;
    const int n = idx_.size();
    for (const auto& [visits, W] : level_) {
      const Eigen::MatrixXcd SW = S_ * W;
      for (int c = 0; c < n; ++c) {
        if (SW.row(c).cwiseAbs().maxCoeff() == 0.0) continue;
        std::vector<int> m = visits;
        const int b = idx_.bond_position(c);
        if (b >= 0) ++m[b];
        if (length(m) > max_length_ * (1.0 + 1e-12)) continue;
        auto it = next.find(m);
        if (it == next.end()) it = next.emplace(m, Eigen::MatrixXcd::Zero(n, n)).first;
        it->second.row(c) += SW.row(c);
      }
    }
    level_ = std::move(next);
  }

  std::vector<VisitTerm> terms() const {
    std::vector<VisitTerm> out;
    for (const auto& [visits, W] : level_) {
      const cplx t = W.trace();
      if (t != cplx(0.0)) out.push_back({visits, length(visits), t});
    }
    return out;
  }

 private:
  double length(const std::vector<int>& m) const {
    double L = 0.0;
    for (std::size_t b = 0; b < m.size(); ++b) L += m[b] * lengths_[b];
    return L;
  }

  DirectedEdgeIndex idx_;
  double max_length_;
  Eigen::MatrixXcd S_;
  std::vector<double> lengths_;
  std::map<std::vector<int>, Eigen::MatrixXcd> level_;
};

void require_scale_invariant(const MetricGraph& g) {
  require_valid(g);
  if (!g.is_closed()) throw InputError("trace formula needs a closed graph", "edges");
  if (g.has_k_dependent_conditions())
    throw InputError("trace formula needs k-independent vertex conditions", "vertices");
}

}  // namespace

double GaussianTestFunction::operator()(double k) const {
  auto g = [&](double x) { return std::exp(-0.5 * x * x / (sigma * sigma)); };
  return center > 0 ? g(k - center) + g(k + center) : g(k);
}

double GaussianTestFunction::transform(double x) const {
  const double base = gaussian_transform(sigma, x);
  return center > 0 ? 2.0 * std::cos(center * x) * base : base;
}

double GaussianTestFunction::envelope(double x) const { return (center > 0 ? 2.0 : 1.0) * gaussian_transform(sigma, x); }

GaussianTestFunction GaussianTestFunction::for_cutoff(double L_cut, double center, double tail) {
  if (!(L_cut > 0) || !(tail > 0)) throw InputError("cutoff and tail must be positive", "L_cut");
  const double factor = center > 0 ? 2.0 : 1.0;
  double sigma = 1.0 / L_cut;
  for (int i = 0; i < 100; ++i) {
    const double arg = factor * sigma * std::sqrt(2.0 * std::numbers::pi) / tail;
    sigma = std::sqrt(2.0 * std::log(std::max(arg, 1.0 + 1e-12))) / L_cut;
  }
  return {sigma, center};
}

std::vector<VisitTerm> closed_walk_terms(const MetricGraph& g, int n, double max_length) {
  require_valid(g);
  WalkExpansion w(g, max_length);
  for (int i = 0; i < n; ++i) w.advance();
  return w.terms();
}

TraceFormulaCheck trace_formula_check(const MetricGraph& g, const Spectrum& spectrum, const GaussianTestFunction& h,
                                      double L_cut) {
  require_scale_invariant(g);
  if (!(L_cut > 0)) throw InputError("L_cut must be positive", "L_cut");
  TraceFormulaCheck out;

  for (const auto& r : spectrum.records) out.spectral_side += r.multiplicity * (h(r.k) + h(-r.k));
  out.zero_order = secular_zero_order(g);
  out.zero_mode_term = out.zero_order * h(0.0);
  out.spectral_side += out.zero_mode_term;
  if (h(spectrum.k_max) > 1e-14)
    out.warnings.push_back("test function is not negligible at the end of the supplied spectrum (h = " +
                           std::to_string(h(spectrum.k_max)) + ")");
  if (out.zero_mode_term > 1e-7)
    out.warnings.push_back("k = 0 counted with multiplicity " + std::to_string(out.zero_order) +
                           " contributes " + std::to_string(out.zero_mode_term));

  const double L = g.total_length(), lmin = g.min_bond_length(), lmax = g.max_bond_length();
  out.weyl_term = L / std::numbers::pi * h.transform(0.0);
  out.geometric_side = out.weyl_term;
  out.max_walk_length = static_cast<int>(std::floor(L_cut / lmin * (1.0 + 1e-12)));
  WalkExpansion walks(g, L_cut);
  for (int n = 1; n <= out.max_walk_length; ++n) {
    walks.advance();
    for (const auto& t : walks.terms())
      out.geometric_side += t.length / n / (2.0 * std::numbers::pi) *
                            (t.coefficient * h.transform(-t.length) + std::conj(t.coefficient) * h.transform(t.length)).real();
  }

  // Omitted walks: |sum A_w| <= tr |S|^n, L_w / n <= l_max, L_w >= max(L_cut, n l_min).
  const Eigen::MatrixXd absS = assemble_edge_scattering(g, 1.0).S.cwiseAbs();
  Eigen::MatrixXd P = Eigen::MatrixXd::Identity(absS.rows(), absS.cols());
  for (int n = 1; n < 100000; ++n) {
    P = absS * P;
    const double term = lmax / std::numbers::pi * P.trace() * h.envelope(std::max(L_cut, n * lmin));
    out.truncation_bound += term;
    if (n > out.max_walk_length && term < 1e-30 * (1.0 + out.truncation_bound)) break;
  }
  return out;
}

}  // namespace qgraph
