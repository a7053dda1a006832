#pragma once

#include "qgraph/scattering.hpp"

#include <string>
#include <vector>

namespace qgraph {

struct ClassicalMap {
  Eigen::MatrixXd M;              // M(a, b) = |S(a, b)|^2
  Eigen::VectorXcd eigenvalues;   // sorted by |1 - lambda|
  double gap = 0.0;               // min |1 - lambda| over all but the first eigenvalue
  double stochastic_defect = 0.0; // max deviation of row and column sums from 1
  double invariant_defect = 0.0;  // |M u - u|_inf for the uniform vector u
};

// Rejects k-dependent vertex conditions.
ClassicalMap classical_map(const MetricGraph& g);

struct PeriodicOrbit {
  std::vector<int> channels;  // lexicographically minimal rotation
  int topological_length = 0;
  double metric_length = 0.0;
  cplx amplitude;             // product of S(next, prev) around the cycle
  int repetition = 1;
  bool primitive = true;
  int partner = -1;           // index of the time-reversed orbit, -1 if pruned
};

inline constexpr long kOrbitBudget = 10'000'000;

// Primitive periodic orbits with n_p <= n_max, ordered by (n_p, channels).
// Orbits through a vanishing S entry are dropped. S is evaluated at k, which
// matters only for k-dependent conditions.
std::vector<PeriodicOrbit> enumerate_primitive_orbits(const MetricGraph& g, int n_max, double k = 1.0,
                                                      int threads = 1, long budget = kOrbitBudget);

// Lexicographically minimal rotation.
std::vector<int> canonical_rotation(const std::vector<int>& word);
// True when the word is strictly smaller than all its proper rotations.
bool is_lyndon(const std::vector<int>& word);

struct TraceIdentity {
  cplx matrix;  // tr U(k)^n
  cplx orbits;  // sum over p with n_p | n of n_p A_p^r exp(i k r L_p)
};

cplx orbit_trace(const std::vector<PeriodicOrbit>& orbits, double k, int n);
TraceIdentity trace_identity_check(const MetricGraph& g, double k, int n);

struct TrajectoryExpansion {
  cplx value;                    // partial sum up to n_max scatterings
  std::vector<cplx> partial;     // partial[n - 1] is the sum up to n
  double spectral_radius = 0.0;  // of U_BB(k)
  double remainder_norm = 0.0;   // ||U_BB||_2^(n_max - 1)
  bool converges = true;
  std::vector<std::string> warnings;
};

// Sum of A_theta exp(i k L_theta) over trajectories from lead_in through the
// bonds to lead_out with at most n_max scattering events. Lead arguments are
// edge ids.
TrajectoryExpansion scattering_trajectory_expansion(const MetricGraph& g, int lead_in, int lead_out, double k,
                                                    int n_max);

}  // namespace qgraph
