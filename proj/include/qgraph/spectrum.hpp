#pragma once

#include "qgraph/scattering.hpp"

#include <string>
#include <vector>

namespace qgraph {

struct SpectralRecord {
  double k = 0.0;
  int multiplicity = 1;
  double residual = 0.0;    // smallest singular value of I - U(k)
  int sv_multiplicity = 0;  // singular values below the degeneracy threshold
};

struct Spectrum {
  std::vector<SpectralRecord> records;
  double k_min = 0.0, k_max = 0.0, grid_step = 0.0, tol = 0.0;
  int zero_modes = 0;         // multiplicity of E = 0 (not part of records)
  bool audit_exact = true;    // winding count exact (eigenphases monotone)
  std::vector<std::string> warnings;

  int count() const;  // with multiplicity, positive k only
  std::vector<double> expanded_k() const;
  // E = k^2 with multiplicity, zero modes first.
  std::vector<double> expanded_energies() const;
};

struct SpectrumOptions {
  double grid_step = 0.0;  // 0: pi / (8 L)
  double tol = 1e-13;      // relative bracket width for degenerate roots
  double k_floor = 0.0;    // 0: grid_step, or a small fraction of it for coupled graphs
  int threads = 1;
  double degeneracy_threshold = 1e-7;
};

cplx secular_function(const MetricGraph& g, double k, const MagneticPhases& alpha = {});

// Number of eigenphases of U that wrapped through 0 on (0, k]; an integer
// valued staircase whose jumps are the roots of the secular function.
class WindingCounter {
 public:
  explicit WindingCounter(const QuantumMapEvaluator& ev, const MagneticPhases& alpha = {});
  long count(double k) const;
  // Eigenphase of U(k) closest to 0 and its k-derivative.
  std::pair<double, double> nearest_phase(double k) const;
  // Continuous branch of arg det U(k).
  double continuous_arg_det(double k) const;
  const MagneticPhases& alpha() const { return alpha_; }

 private:
  const QuantumMapEvaluator& ev_;
  MagneticPhases alpha_;
  double arg_det_s1_ = 0.0;
  double total_length_ = 0.0;
};

Spectrum find_spectrum(const MetricGraph& g, double k_max, const SpectrumOptions& opts = {});
// Extends k_max until at least `states` positive eigenvalues are found.
Spectrum find_first_states(const MetricGraph& g, int states, const SpectrumOptions& opts = {});

// Dimension of the kernel of the Laplacian (E = 0).
int zero_mode_multiplicity(const MetricGraph& g);
// Order of the zero of the secular function at k = 0: dim ker(I - S).
int secular_zero_order(const MetricGraph& g);

// Root refinement of a simple root by Newton on the eigenphase, kept inside [lo, hi].
double refine_simple_root(const QuantumMapEvaluator& ev, double k, double lo, double hi,
                          const MagneticPhases& alpha = {});

struct Eigenfunction {
  double k = 0.0;
  // psi_e(x) = A_e exp(-ikx) + B_e exp(ikx), x measured from o(e); indexed by edge id.
  Eigen::VectorXcd A, B;
  bool real_gauge = false;

  cplx value(int edge, double x) const;
  cplx derivative(int edge, double x) const;
  // Value at a vertex, averaged over its endpoints.
  cplx vertex_value(const MetricGraph& g, int v) const;
  // Upper bound |A_e| + |B_e| of sup|psi_e|.
  double edge_bound(int edge) const;
  double sup_bound() const;
};

cplx inner_product(const MetricGraph& g, const Eigenfunction& a, const Eigenfunction& b);

std::vector<Eigenfunction> eigenfunctions_at(const MetricGraph& g, double k, double residual_tol = 1e-6);
// Bound states of an open graph: vanishing on every lead.
std::vector<Eigenfunction> bound_states_at(const MetricGraph& g, double k, double residual_tol = 1e-6);

struct PerfectScar {
  int index = 0;              // position in the eigenfunction list
  std::vector<int> support;   // edge ids where the function lives
  std::vector<int> vanishing; // edge ids where it is zero
};

std::vector<PerfectScar> detect_perfect_scars(const MetricGraph& g, const std::vector<Eigenfunction>& efs,
                                              double tol = 1e-9);

}  // namespace qgraph
