#pragma once

#include "qgraph/orbits.hpp"
#include "qgraph/spectrum.hpp"

#include <vector>

namespace qgraph {

// h(k) = g(k - c) + g(k + c) for c > 0 (g(k) alone for c = 0), with
// g(k) = exp(-k^2 / (2 sigma^2)). Transform convention: hat h(x) = int h(k) exp(-ikx) dk.
struct GaussianTestFunction {
  double sigma = 1.0;
  double center = 0.0;

  double operator()(double k) const;
  double transform(double x) const;
  // Even, non-increasing majorant of |hat h| on x >= 0.
  double envelope(double x) const;

  // Widest sigma whose transform envelope is below `tail` beyond L_cut.
  static GaussianTestFunction for_cutoff(double L_cut, double center = 0.0, double tail = 1e-12);
};

// Closed walks of n steps grouped by how often each bond is traversed.
struct VisitTerm {
  std::vector<int> visits;  // per bond position
  double length = 0.0;
  cplx coefficient;         // sum of A_w over rooted closed walks with these visits
};

// Terms of tr (T S)^n = sum coefficient * exp(i k length), for lengths <= max_length.
std::vector<VisitTerm> closed_walk_terms(const MetricGraph& g, int n, double max_length);

struct TraceFormulaCheck {
  double spectral_side = 0.0;
  double geometric_side = 0.0;
  double truncation_bound = 0.0;
  double weyl_term = 0.0;
  double zero_mode_term = 0.0;  // zero_order * h(0)
  int zero_order = 0;
  int max_walk_length = 0;
  std::vector<std::string> warnings;

  double residual() const { return std::abs(spectral_side - geometric_side); }
};

// sum_n h(+-k_n) + ord_0 h(0) against (L / pi) hat h(0) plus the closed-walk
// sum over metric lengths <= L_cut. Requires k-independent vertex conditions.
TraceFormulaCheck trace_formula_check(const MetricGraph& g, const Spectrum& spectrum, const GaussianTestFunction& h,
                                      double L_cut);

}  // namespace qgraph
