#include "qgraph/statistics.hpp"

#include "qgraph/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>

namespace qgraph {

namespace {

void require_form_factor_graph(const MetricGraph& g) {
  require_valid(g);
  if (!g.is_closed()) throw InputError("form factor needs a closed graph", "edges");
  if (g.has_k_dependent_conditions())
    throw InputError("form factor needs k-independent vertex conditions", "vertices");
  if (g.bond_count() == 0) throw InputError("graph has no bonds", "edges");
}

void require_n(int n) {
  if (n < 0) throw InputError("n must be non-negative", "n");
}

// Pairwise summation keeps the rounding error independent of the sample order.
double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

Eigen::MatrixXcd matrix_power(const Eigen::MatrixXcd& A, int n) {
  Eigen::MatrixXcd result = Eigen::MatrixXcd::Identity(A.rows(), A.cols());
  Eigen::MatrixXcd base = A;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

}  // namespace

FormFactorEstimate form_factor_mc(const MetricGraph& g, int n, long samples, std::uint64_t seed, int threads) {
  require_form_factor_graph(g);
  require_n(n);
  if (samples < 2) throw InputError("at least two samples are needed", "samples");
  const DirectedEdgeIndex idx(g);
  const Eigen::MatrixXcd S = assemble_edge_scattering(g, 1.0).S;
  const int B = idx.bond_count(), N = idx.size();

  std::vector<double> values(static_cast<std::size_t>(samples));
  constexpr long kChunk = 256;
  const long chunks = (samples + kChunk - 1) / kChunk;
  parallel_for(static_cast<int>(chunks), resolve_threads(threads), [&](int c) {
    Eigen::MatrixXcd U(N, N);
    std::vector<cplx> phase(B);
    const long end = std::min(samples, (c + 1) * kChunk);
    for (long i = c * kChunk; i < end; ++i) {
      CounterRng rng(seed, static_cast<std::uint64_t>(i));
      for (int b = 0; b < B; ++b) phase[b] = std::polar(1.0, 2.0 * std::numbers::pi * rng.uniform());
      for (int r = 0; r < N; ++r) U.row(r) = phase[idx.bond_position(r)] * S.row(r);
      values[i] = std::norm(matrix_power(U, n).trace()) / (2.0 * B);
    }
  });

  FormFactorEstimate out;
  out.n = n;
  out.tau = n / (2.0 * B);
  out.samples = samples;
  out.seed = seed;
  out.value = pairwise_sum(values.data(), values.size()) / samples;
  for (auto& v : values) v = (v - out.value) * (v - out.value);
  out.stderr_ = std::sqrt(pairwise_sum(values.data(), values.size()) / (samples - 1) / samples);
  return out;
}

double form_factor_exact_small(const MetricGraph& g, int n) {
  require_form_factor_graph(g);
  require_n(n);
  if (n > kExactFormFactorMaxN)
    throw InputError("exact form factor is limited to n <= " + std::to_string(kExactFormFactorMaxN), "n");
  const DirectedEdgeIndex idx(g);
  const int B = idx.bond_count();
  if (n == 0) return 2.0 * B;

  std::map<std::vector<int>, cplx> groups;
  for (const auto& q : enumerate_primitive_orbits(g, n)) {
    if (n % q.topological_length != 0) continue;
    const int r = n / q.topological_length;
    std::vector<int> visits(B, 0);
    for (int c : q.channels) visits[idx.bond_position(c)] += r;
    groups[visits] += std::pow(q.amplitude, r) / static_cast<double>(r);
  }
  double sum = 0.0;
  for (const auto& [visits, a] : groups) sum += std::norm(a);
  return static_cast<double>(n) * n / (2.0 * B) * sum;
}

DiagonalFormFactor form_factor_diagonal(const MetricGraph& g, int n) {
  require_form_factor_graph(g);
  require_n(n);
  const int B = g.bond_count();
  const double tau = n / (2.0 * B);
  const Eigen::MatrixXd M = assemble_edge_scattering(g, 1.0).S.cwiseAbs2();
  DiagonalFormFactor out;
  out.leading = 2.0 * tau * matrix_power(M.cast<cplx>(), n).trace().real();
  if (n == 0) {
    // tr M^0 = 2B; the orbit sums are empty.
    out.value = out.leading;
    return out;
  }
  if (n > kExactFormFactorMaxN) {
    out.corrections_included = false;
    out.value = out.leading;
    return out;
  }
  const auto orbits = enumerate_primitive_orbits(g, n);
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const auto& q = orbits[i];
    if (n % q.topological_length != 0) continue;
    const int r = n / q.topological_length;
    const double a2 = std::pow(std::norm(q.amplitude), r) / (static_cast<double>(r) * r);
    if (q.partner == static_cast<int>(i)) out.self_retracing -= tau * n * a2;
    out.repetitions += 2.0 * tau * n * (1 - r) * a2;
  }
  out.value = out.leading + out.self_retracing + out.repetitions;
  return out;
}

std::string to_string(TannerVerdict v) {
  switch (v) {
    case TannerVerdict::UniversalExpected: return "universal-expected";
    case TannerVerdict::Intermediate: return "intermediate";
    case TannerVerdict::NonUniversalExpected: return "non-universal-expected";
  }
  return "intermediate";
}

TannerReport tanner_gap_report(const MetricGraph& g, double c) {
  if (!(c > 0)) throw InputError("c must be positive", "c");
  const ClassicalMap cm = classical_map(g);
  const double B = g.bond_count();
  if (B == 0) throw InputError("graph has no bonds", "edges");
  TannerReport out;
  out.c = c;
  out.gap = cm.gap;
  out.gap_times_b = cm.gap * B;
  out.gap_times_sqrt_b = cm.gap * std::sqrt(B);
  for (int j = 1; j < cm.eigenvalues.size(); ++j)
    if (std::abs(cm.eigenvalues[j] + 1.0) < 1e-9) out.has_minus_one = true;
  if (out.gap < c / B)
    out.verdict = TannerVerdict::NonUniversalExpected;
  else if (out.gap > c / std::sqrt(B))
    out.verdict = TannerVerdict::UniversalExpected;
  else
    out.verdict = TannerVerdict::Intermediate;
  char buf[160];
  std::snprintf(buf, sizeof buf, "gap = min_{j>=2} |1 - lambda_j|; non-universal if gap < c/|B|, universal if gap > c/sqrt|B|; c = %g", c);
  out.convention = buf;
  return out;
}

SpacingSample spacing_distribution(const std::vector<double>& levels, double density, int bins, double s_max) {
  if (static_cast<int>(levels.size()) < kMinSpacingLevels)
    throw InputError("insufficient data: " + std::to_string(levels.size()) + " levels, need at least " +
                         std::to_string(kMinSpacingLevels),
                     "levels");
  if (!(density > 0)) throw InputError("density must be positive", "density");
  if (bins < 1) throw InputError("bins must be positive", "bins");
  if (!(s_max > 0)) throw InputError("s_max must be positive", "s_max");
  std::vector<double> k = levels;
  std::sort(k.begin(), k.end());
  SpacingSample out;
  out.spacings.reserve(k.size() - 1);
  for (std::size_t i = 1; i < k.size(); ++i) out.spacings.push_back((k[i] - k[i - 1]) * density);
  out.mean = pairwise_sum(out.spacings.data(), out.spacings.size()) / out.spacings.size();
  out.min = *std::min_element(out.spacings.begin(), out.spacings.end());
  out.max = *std::max_element(out.spacings.begin(), out.spacings.end());
  out.bin_edges.resize(bins + 1);
  for (int i = 0; i <= bins; ++i) out.bin_edges[i] = s_max * i / bins;
  out.histogram.assign(bins, 0);
  for (double s : out.spacings) {
    if (s < 0 || s >= s_max) continue;
    ++out.histogram[std::min(bins - 1, static_cast<int>(s / s_max * bins))];
  }
  return out;
}

SpacingSample spacing_distribution(const Spectrum& spectrum, double total_length, int bins, double s_max) {
  if (!(total_length > 0)) throw InputError("total length must be positive", "total_length");
  return spacing_distribution(spectrum.expanded_k(), total_length / std::numbers::pi, bins, s_max);
}

double weyl_ratio(const Spectrum& spectrum, double total_length, int n) {
  const auto k = spectrum.expanded_k();
  if (n < 1 || n > static_cast<int>(k.size()))
    throw InputError("spectrum has " + std::to_string(k.size()) + " levels, asked for level " + std::to_string(n), "n");
  const double K = k[n - 1];
  const auto count = std::upper_bound(k.begin(), k.end(), K * (1.0 + 1e-12)) - k.begin();
  return count * std::numbers::pi / (total_length * K);
}

}  // namespace qgraph
