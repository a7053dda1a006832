#include "qgraph/nodal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qgraph {

namespace {

double min_abs_eigenphase(const Eigen::MatrixXcd& U) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U, false);
  double m = std::numeric_limits<double>::infinity();
  for (int j = 0; j < U.rows(); ++j) m = std::min(m, std::abs(std::arg(es.eigenvalues()[j])));
  return m;
}

}  // namespace

double magnetic_eigenvalue(const QuantumMapEvaluator& ev, double k0, const MagneticPhases& alpha, double max_shift) {
  const double k = refine_simple_root(ev, k0, k0 - max_shift, k0 + max_shift, alpha);
  if (!(std::abs(k - k0) < max_shift * (1.0 - 1e-9)))
    throw NumericalError("magnetic continuation from k=" + std::to_string(k0) + " left the window of half the level spacing");
  const double phase = min_abs_eigenphase(ev(k, alpha));
  if (phase > 1e-8)
    throw NumericalError("magnetic continuation from k=" + std::to_string(k0) + " did not converge (eigenphase " +
                         std::to_string(phase) + ")");
  return k;
}

MagneticBranch magnetic_hessian_morse_index(const MetricGraph& g, int n, double fd_step, HessianParametrization p,
                                            const NodalOptions& opts) {
  if (!(fd_step > 0) || fd_step > 0.1) throw InputError("fd_step must be in (0, 0.1]", "fd_step");
  if (n < 1) throw InputError("state index must be positive", "n");
  const auto states = nodal_states(g, n + 1, opts);
  const NodalData& d = states[n - 1];
  if (d.k == 0.0) throw InputError("state " + std::to_string(n) + " has k = 0; the branch k(alpha) is not smooth there", "n");
  if (!d.simple) throw NonGenericError("eigenvalue of state " + std::to_string(n) + " is degenerate");
  if (!d.vertex_nonzero) throw NonGenericError("eigenfunction of state " + std::to_string(n) + " vanishes at a vertex");

  MagneticBranch out;
  out.n = n;
  out.k = d.k;
  out.parametrization = p;
  const int beta = nodal_beta(g);
  if (p == HessianParametrization::Reduced) {
    out.edges = cycle_edges(g);
  } else {
    out.edges = g.bonds();
    out.expected_kernel = g.bond_count() - beta;
  }
  const double below = n >= 2 ? d.k - states[n - 2].k : d.k;
  const double above = states[n].k - d.k;
  const double max_shift = 0.5 * std::min(below, above);

  const int m = static_cast<int>(out.edges.size());
  const QuantumMapEvaluator ev(g);
  auto k_at = [&](const std::vector<std::pair<int, double>>& shifts) {
    MagneticPhases alpha = MagneticPhases::Zero(g.edge_count());
    for (auto [i, s] : shifts) alpha[out.edges[i]] += s;
    const double k = magnetic_eigenvalue(ev, d.k, alpha, max_shift);
    out.max_shift = std::max(out.max_shift, std::abs(k - d.k));
    return k;
  };

  const double h = fd_step, k0 = d.k;
  out.gradient = Eigen::VectorXd::Zero(m);
  out.hessian = Eigen::MatrixXd::Zero(m, m);
  std::vector<double> kp(m), km(m);
  for (int i = 0; i < m; ++i) {
    kp[i] = k_at({{i, h}});
    km[i] = k_at({{i, -h}});
    out.gradient[i] = (kp[i] - km[i]) / (2.0 * h);
    out.hessian(i, i) = (kp[i] - 2.0 * k0 + km[i]) / (h * h);
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      // Two independent O(h^2) stencils; their difference measures the asymmetry.
      const double pp = k_at({{i, h}, {j, h}}), mm = k_at({{i, -h}, {j, -h}});
      const double pm = k_at({{i, h}, {j, -h}}), mp = k_at({{i, -h}, {j, h}});
      const double cross = (pp - pm - mp + mm) / (4.0 * h * h);
      const double diag = ((pp - 2.0 * k0 + mm) / (h * h) - out.hessian(i, i) - out.hessian(j, j)) / 2.0;
      out.symmetry_defect = std::max(out.symmetry_defect, std::abs(cross - diag));
      out.hessian(i, j) = out.hessian(j, i) = cross;
    }
  out.gradient_norm = out.gradient.norm();
  out.fd_noise = 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + k0) / (h * h);

  if (m > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(out.hessian, Eigen::EigenvaluesOnly);
    out.eigenvalues = es.eigenvalues();
  } else {
    out.eigenvalues = Eigen::VectorXd(0);
  }
  const double largest = m > 0 ? out.eigenvalues.cwiseAbs().maxCoeff() : 0.0;
  // Roundoff in k (a few ulps) amplified by the second difference.
  const double noise = 1e3 * std::numeric_limits<double>::epsilon() * (1.0 + k0) / (h * h);
  const double thresh = std::max(1e-3 * largest, noise);
  for (int i = 0; i < m; ++i) {
    if (out.eigenvalues[i] < -thresh)
      ++out.morse_index;
    else if (out.eigenvalues[i] <= thresh)
      ++out.kernel_dim;
  }
  out.kernel_ok = out.kernel_dim == out.expected_kernel;
  if (!out.kernel_ok)
    out.warnings.push_back("Hessian kernel has dimension " + std::to_string(out.kernel_dim) + ", expected " +
                           std::to_string(out.expected_kernel));
  if (out.symmetry_defect > 1e-6 + out.fd_noise)
    out.warnings.push_back("Hessian stencils disagree by " + std::to_string(out.symmetry_defect));
  if (out.gradient_norm > 1e-6)
    out.warnings.push_back("gradient at alpha = 0 is " + std::to_string(out.gradient_norm));
  return out;
}

}  // namespace qgraph
