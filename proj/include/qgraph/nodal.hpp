#pragma once

#include "qgraph/spectrum.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace qgraph {

// State is degenerate or vanishes at a vertex.
struct NonGenericError : InputError {
  using InputError::InputError;
};

struct NodalOptions {
  double vertex_zero = 1e-6;  // |psi(v)| must exceed this times sup|psi|
  int threads = 1;
};

struct NodalData {
  int n = 0;      // spectral index, 1 = ground state, multiplicities expanded
  double k = 0.0;
  int phi = -1;   // nodal count
  int nu = -1;    // nodal domain count
  int surplus = -1;
  int deficiency = -1;
  bool simple = true;
  bool vertex_nonzero = true;
  double min_vertex_ratio = 0.0;  // min over non-Dirichlet vertices of |psi(v)| / sup|psi|
  bool generic() const { return simple && vertex_nonzero; }
};

// Dirichlet vertices are cut into one endpoint per incident edge end: they
// are not in the nodal set and do not join nodal domains. beta below is the
// cycle rank of that cut graph, which must be connected.
int nodal_beta(const MetricGraph& g);
// Edge ids outside a spanning tree of the cut graph, one per independent cycle.
std::vector<int> cycle_edges(const MetricGraph& g);

// Requires a closed graph with delta-type (coupling >= 0) or Dirichlet
// conditions and a real eigenfunction. Throws NonGenericError when psi is
// below the vertex threshold at a non-Dirichlet vertex.
NodalData nodal_count(const MetricGraph& g, const Eigenfunction& ef, const NodalOptions& opts = {});
NodalData nodal_domain_count(const MetricGraph& g, const Eigenfunction& ef, const NodalOptions& opts = {});

// States n = 1 .. n_states. Non-generic states keep phi = nu = -1.
std::vector<NodalData> nodal_states(const MetricGraph& g, int n_states, const NodalOptions& opts = {});

struct SurplusDistribution {
  int beta = 0;
  std::vector<long> counts;          // index s = 0 .. beta
  std::vector<double> probability;
  double mean = 0.0;
  double mean_stderr = 0.0;          // binomial, from the sample variance
  double deviation_from_half_beta = 0.0;
  long generic = 0, skipped = 0;
  double skipped_fraction = 0.0;
};

SurplusDistribution surplus_distribution(const std::vector<NodalData>& states, int beta);
SurplusDistribution surplus_distribution(const MetricGraph& g, int n_states, const NodalOptions& opts = {});

enum class HessianParametrization { Reduced, Full };

struct MagneticBranch {
  int n = 0;
  double k = 0.0;
  HessianParametrization parametrization = HessianParametrization::Reduced;
  std::vector<int> edges;           // edge id carrying each alpha parameter
  Eigen::VectorXd gradient;
  double gradient_norm = 0.0;
  Eigen::MatrixXd hessian;
  double symmetry_defect = 0.0;     // max gap between the cross and diagonal stencils
  double fd_noise = 0.0;            // roundoff floor of a second difference, 8 eps (1 + k) / h^2
  Eigen::VectorXd eigenvalues;      // ascending
  int morse_index = 0;
  int kernel_dim = 0;
  int expected_kernel = 0;          // |E| - beta for the full Hessian, 0 reduced
  bool kernel_ok = true;
  double max_shift = 0.0;           // largest |k(alpha) - k| over the stencil
  std::vector<std::string> warnings;
};

inline constexpr double kDefaultFdStep = 1e-4;

// Root of det(1 - T(k, alpha) S) continued from the simple root k0; the
// continuation fails when it moves by more than max_shift.
double magnetic_eigenvalue(const QuantumMapEvaluator& ev, double k0, const MagneticPhases& alpha, double max_shift);

// Central-difference Hessian of k_n(alpha) at alpha = 0. Eigenvalues within
// 1e-3 max|eigenvalue| (or the difference noise floor) of zero count as kernel.
MagneticBranch magnetic_hessian_morse_index(const MetricGraph& g, int n, double fd_step = kDefaultFdStep,
                                            HessianParametrization p = HessianParametrization::Reduced,
                                            const NodalOptions& opts = {});

}  // namespace qgraph
