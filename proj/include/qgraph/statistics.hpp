#pragma once

#include "qgraph/orbits.hpp"
#include "qgraph/spectrum.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace qgraph {

struct FormFactorEstimate {
  int n = 0;
  double tau = 0.0;  // n / 2B
  double value = 0.0;
  double stderr_ = 0.0;
  long samples = 0;
  std::uint64_t seed = 0;
};

// Torus average of |tr (T(alpha) S)^n|^2 / 2B over uniform bond phases.
// Sample i draws its phases from stream i of the counter generator, so the
// estimate does not depend on the thread count.
FormFactorEstimate form_factor_mc(const MetricGraph& g, int n, long samples, std::uint64_t seed, int threads = 1);

inline constexpr int kExactFormFactorMaxN = 10;

// Orbits of length n grouped by bond visit counts:
// K_n = (n^2 / 2B) sum over groups |sum A_p / r_p|^2.
double form_factor_exact_small(const MetricGraph& g, int n);

struct DiagonalFormFactor {
  double leading = 0.0;           // 2 tau tr M^n
  double self_retracing = 0.0;    // - tau sum_{p = p^} n |A_p|^2 / r_p^2
  double repetitions = 0.0;       // 2 tau sum_p n (1 - r_p) |A_p|^2 / r_p^2
  double value = 0.0;             // sum of the three
  bool corrections_included = true;
};

DiagonalFormFactor form_factor_diagonal(const MetricGraph& g, int n);

enum class TannerVerdict { UniversalExpected, Intermediate, NonUniversalExpected };
std::string to_string(TannerVerdict v);

struct TannerReport {
  double gap = 0.0;          // min over j >= 2 of |1 - lambda_j|
  double gap_times_b = 0.0;  // gap * |B|
  double gap_times_sqrt_b = 0.0;
  double c = 1.0;
  bool has_minus_one = false;
  TannerVerdict verdict = TannerVerdict::Intermediate;
  std::string convention;
};

// gap < c/|B|: non-universal; gap > c/sqrt|B|: universal; otherwise intermediate.
TannerReport tanner_gap_report(const MetricGraph& g, double c = 1.0);

struct SpacingSample {
  std::vector<double> spacings;  // unfolded
  double mean = 0.0, min = 0.0, max = 0.0;
  std::vector<double> bin_edges;
  std::vector<long> histogram;
};

inline constexpr int kMinSpacingLevels = 100;

// Spacings of sorted levels unfolded by a constant mean density.
SpacingSample spacing_distribution(const std::vector<double>& levels, double density, int bins = 50,
                                   double s_max = 4.0);
// Levels with multiplicity, density L / pi.
SpacingSample spacing_distribution(const Spectrum& spectrum, double total_length, int bins = 50, double s_max = 4.0);

// N(K) pi / (L K) at the n-th positive level (with multiplicity).
double weyl_ratio(const Spectrum& spectrum, double total_length, int n);

}  // namespace qgraph
