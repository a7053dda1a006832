#pragma once

#include "qgraph/spectrum.hpp"

#include <map>
#include <string>
#include <vector>

namespace qgraph {

struct SurgeryRecord {
  std::string operation;  // "dirichlet", "split", "coupling"
  std::string parameters;
  int constraints = 0;    // d, or p - 1 for a p-way split
  MetricGraph before, after;
};

// Conditions at vs become Dirichlet; d counts the vertices that changed.
SurgeryRecord impose_dirichlet(const MetricGraph& g, const std::vector<int>& vs);

// Replaces v by p vertices. groups[j] lists positions in g.endpoints(v);
// group 0 keeps the id v, the others get new ids appended in order. v must be
// NK unless couplings (one per group, summing to the coupling of v) are given.
SurgeryRecord split_vertex(const MetricGraph& g, int v, const std::vector<std::vector<int>>& groups,
                           const std::vector<double>& couplings = {});

// New couplings alpha~_v >= alpha_v at delta-type vertices; d counts strict increases.
SurgeryRecord increase_coupling(const MetricGraph& g, const std::map<int, double>& couplings);

enum class SpectrumRoute { Scattering, Dtn };

// Energies k^2 <= k_max^2 with multiplicity (zero modes included), merged
// over connected components. The DtN route fills its masked windows with the
// scattering roots found there.
std::vector<double> energies_up_to(const MetricGraph& g, double k_max, SpectrumRoute route = SpectrumRoute::Scattering,
                                   int threads = 1);

enum class InterlacingDirection {
  Raise,  // lambda_n(H) <= lambda_n(H') <= lambda_{n+d}(H)
  Lower   // lambda_{n-d}(H) <= lambda_n(H') <= lambda_n(H), lambda_k = -inf for k <= 0
};

InterlacingDirection direction_of(const SurgeryRecord& r);

struct InterlacingViolation {
  int n = 0;
  double lower = 0.0, value = 0.0, upper = 0.0;
};

struct InterlacingReport {
  std::string operation;
  int d = 0;
  InterlacingDirection direction = InterlacingDirection::Raise;
  int checked_n = 0;
  std::vector<InterlacingViolation> violations;
  bool ok() const { return violations.empty(); }
};

// Sorted energies of H (before) and H' (after) up to a common cutoff.
// Slack 1e-8 (1 + lambda) on every inequality.
InterlacingReport check_interlacing(const std::vector<double>& before, const std::vector<double>& after, int d,
                                    InterlacingDirection direction, const std::string& operation = {});

// Both spectra up to k_max, then the inequality matching the operation.
InterlacingReport check_surgery(const SurgeryRecord& r, double k_max, SpectrumRoute route = SpectrumRoute::Scattering,
                                int threads = 1);

}  // namespace qgraph
