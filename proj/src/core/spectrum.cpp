#include "qgraph/spectrum.hpp"

#include "qgraph/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qgraph {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_centered(double a) {
  a = std::remainder(a, kTwoPi);
  return a == -std::numbers::pi ? std::numbers::pi : a;
}

struct PhaseData {
  long count = 0;
  std::vector<double> phase;  // in (-pi, pi]
  std::vector<double> speed;  // d phase / dk
};

}  // namespace

int Spectrum::count() const {
  int n = 0;
  for (const auto& r : records) n += r.multiplicity;
  return n;
}

std::vector<double> Spectrum::expanded_k() const {
  std::vector<double> out;
  for (const auto& r : records)
    for (int m = 0; m < r.multiplicity; ++m) out.push_back(r.k);
  return out;
}

std::vector<double> Spectrum::expanded_energies() const {
  std::vector<double> out(zero_modes, 0.0);
  for (const auto& r : records)
    for (int m = 0; m < r.multiplicity; ++m) out.push_back(r.k * r.k);
  return out;
}

cplx secular_function(const MetricGraph& g, double k, const MagneticPhases& alpha) {
  const Eigen::MatrixXcd U = quantum_map(g, k, alpha);
  const Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(U.rows(), U.cols()) - U;
  return M.partialPivLu().determinant();
}

WindingCounter::WindingCounter(const QuantumMapEvaluator& ev, const MagneticPhases& alpha)
    : ev_(ev), alpha_(alpha), total_length_(ev.graph().total_length()) {
  arg_det_s1_ = std::arg(ev_.edge_scattering(1.0).partialPivLu().determinant());
}

double WindingCounter::continuous_arg_det(double k) const {
  // det T = exp(2ikL); magnetic phases cancel pairwise. A delta vertex has a
  // single non-trivial eigenvalue (d - i a/k)/(d + i a/k) of argument -2 atan(a/(kd)).
  double a = 2.0 * total_length_ * k + arg_det_s1_;
  const MetricGraph& g = ev_.graph();
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto& c = g.vertex(v).condition;
    if (!c.k_dependent()) continue;
    const double d = g.degree(v);
    a += -2.0 * std::atan(c.alpha / (k * d)) + 2.0 * std::atan(c.alpha / d);
  }
  return a;
}

namespace {

PhaseData phase_data(const QuantumMapEvaluator& ev, const MagneticPhases& alpha, double k, double arg_det,
                     bool with_speed) {
  const Eigen::MatrixXcd U = ev(k, alpha);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U, with_speed);
  PhaseData pd;
  const int n = static_cast<int>(U.rows());
  double sum = 0.0;
  pd.phase.resize(n);
  for (int j = 0; j < n; ++j) {
    const double p = std::arg(es.eigenvalues()[j]);
    pd.phase[j] = p == -std::numbers::pi ? std::numbers::pi : p;
    sum += p < 0 ? p + kTwoPi : p;
  }
  pd.count = std::lround((arg_det - sum) / kTwoPi);
  if (with_speed) {
    const Eigen::MatrixXcd G = cplx(0.0, -1.0) * U.adjoint() * ev.derivative(k, alpha);
    const Eigen::MatrixXcd& V = es.eigenvectors();
    pd.speed.resize(n);
    for (int j = 0; j < n; ++j) {
      const auto v = V.col(j);
      pd.speed[j] = (v.adjoint() * G * v)(0, 0).real() / v.squaredNorm();
    }
  }
  return pd;
}

}  // namespace

long WindingCounter::count(double k) const {
  return phase_data(ev_, alpha_, k, continuous_arg_det(k), false).count;
}

std::pair<double, double> WindingCounter::nearest_phase(double k) const {
  PhaseData pd = phase_data(ev_, alpha_, k, continuous_arg_det(k), true);
  int best = 0;
  for (int j = 1; j < static_cast<int>(pd.phase.size()); ++j)
    if (std::abs(pd.phase[j]) < std::abs(pd.phase[best])) best = j;
  return {pd.phase[best], pd.speed[best]};
}

double refine_simple_root(const QuantumMapEvaluator& ev, double k, double lo, double hi, const MagneticPhases& alpha) {
  for (int it = 0; it < 80; ++it) {
    const Eigen::MatrixXcd U = ev(k, alpha);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U);
    const Eigen::MatrixXcd G = cplx(0.0, -1.0) * U.adjoint() * ev.derivative(k, alpha);
    int best = -1;
    double best_abs = 0.0, step = 0.0;
    for (int j = 0; j < U.rows(); ++j) {
      const double p = wrap_centered(std::arg(es.eigenvalues()[j]));
      if (best < 0 || std::abs(p) < best_abs) {
        const auto v = es.eigenvectors().col(j);
        const double s = (v.adjoint() * G * v)(0, 0).real() / v.squaredNorm();
        best = j;
        best_abs = std::abs(p);
        step = s > 0 ? -p / s : 0.0;
      }
    }
    double kn = k + step;
    if (!(kn > lo && kn < hi)) kn = std::clamp(kn, lo, hi);
    if (std::abs(kn - k) <= 2e-16 * (1.0 + k)) return kn;
    k = kn;
  }
  return k;
}

namespace {

struct Root {
  double k;
  int multiplicity;
};

// Roots in (a, b] given the staircase values at both ends.
void solve_cell(const QuantumMapEvaluator& ev, const WindingCounter& wc, double a, double b, long fa, long fb,
                double tol, std::vector<Root>& out, bool& nonmonotone) {
  struct Item {
    double a, b;
    long fa, fb;
  };
  std::vector<Item> stack{{a, b, fa, fb}};
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const long c = it.fb - it.fa;
    if (c < 0) nonmonotone = true;
    if (c <= 0) continue;
    const double width = it.b - it.a;
    if (c == 1) {
      // Newton on the first eigenphase to reach zero, bracketed by the staircase.
      double lo = it.a, hi = it.b, k = 0.5 * (lo + hi);
      for (int iter = 0; iter < 100; ++iter) {
        PhaseData pd = phase_data(ev, wc.alpha(), k, wc.continuous_arg_det(k), true);
        const bool root_right = pd.count == it.fa;
        if (root_right)
          lo = k;
        else
          hi = k;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < pd.phase.size(); ++j) {
          if (!(pd.speed[j] > 0)) continue;
          const double p = pd.phase[j];
          const double t = root_right ? (p <= 0 ? -p / pd.speed[j] : (kTwoPi - p) / pd.speed[j])
                                      : (p >= 0 ? p / pd.speed[j] : (kTwoPi + p) / pd.speed[j]);
          best = std::min(best, t);
        }
        double kn = root_right ? k + best : k - best;
        if (!(kn > lo && kn < hi)) kn = 0.5 * (lo + hi);
        if (std::abs(kn - k) <= 4e-16 * (1.0 + k) || hi - lo <= 4e-16 * (1.0 + k)) {
          k = kn;
          break;
        }
        k = kn;
      }
      out.push_back({k, 1});
      continue;
    }
    if (width <= tol * (1.0 + it.b)) {
      out.push_back({0.5 * (it.a + it.b), static_cast<int>(c)});
      continue;
    }
    const double m = 0.5 * (it.a + it.b);
    const long fm = wc.count(m);
    stack.push_back({m, it.b, fm, it.fb});
    stack.push_back({it.a, m, it.fa, fm});
  }
}

}  // namespace

Spectrum find_spectrum(const MetricGraph& g, double k_max, const SpectrumOptions& opts) {
  require_valid(g);
  if (!g.is_closed()) throw InputError("spectrum requires a closed graph", "edges");
  if (!(k_max > 0)) throw InputError("kmax must be positive", "kmax");
  const double L = g.total_length();
  Spectrum sp;
  sp.grid_step = opts.grid_step > 0 ? opts.grid_step : std::numbers::pi / (8.0 * L);
  sp.tol = opts.tol;
  sp.k_min = opts.k_floor > 0 ? opts.k_floor : (g.has_k_dependent_conditions() ? 1e-3 * sp.grid_step : sp.grid_step);
  sp.k_max = k_max;
  sp.zero_modes = zero_mode_multiplicity(g);
  if (g.has_negative_coupling()) {
    sp.audit_exact = false;
    sp.warnings.push_back("negative delta coupling: negative spectrum is out of scope and the winding audit is heuristic");
  }

  QuantumMapEvaluator ev(g);
  WindingCounter wc(ev);

  std::vector<double> grid;
  for (double k = sp.k_min;; k += sp.grid_step) {
    if (k >= k_max) {
      grid.push_back(k_max);
      break;
    }
    grid.push_back(k);
    if (grid.size() > 50'000'000) throw InputError("grid too fine for the requested range", "grid_step");
  }
  if (grid.front() >= k_max) return sp;

  const int threads = resolve_threads(opts.threads);
  std::vector<long> counts(grid.size());
  parallel_for(static_cast<int>(grid.size()), threads, [&](int i) { counts[i] = wc.count(grid[i]); });

  std::vector<int> cells;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i)
    if (counts[i + 1] != counts[i]) cells.push_back(static_cast<int>(i));
  std::vector<std::vector<Root>> found(cells.size());
  std::vector<char> nonmono(cells.size(), 0);
  parallel_for(static_cast<int>(cells.size()), threads, [&](int c) {
    const int i = cells[c];
    bool nm = false;
    solve_cell(ev, wc, grid[i], grid[i + 1], counts[i], counts[i + 1], opts.tol, found[c], nm);
    nonmono[c] = nm;
  });

  std::vector<Root> roots;
  for (auto& f : found) roots.insert(roots.end(), f.begin(), f.end());
  std::sort(roots.begin(), roots.end(), [](const Root& a, const Root& b) { return a.k < b.k; });
  if (std::any_of(nonmono.begin(), nonmono.end(), [](char c) { return c != 0; })) {
    sp.audit_exact = false;
    sp.warnings.push_back("winding count decreased inside a cell; roots there may be missed");
  }

  sp.records.resize(roots.size());
  std::vector<std::string> mismatch(roots.size());
  parallel_for(static_cast<int>(roots.size()), threads, [&](int i) {
    const Eigen::MatrixXcd U = ev(roots[i].k);
    const int n = static_cast<int>(U.rows());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd::Identity(n, n) - U);
    const auto& s = svd.singularValues();
    const double thr = opts.degeneracy_threshold * (1.0 + 1.0);
    int m = 0;
    for (int j = 0; j < n; ++j) m += s[j] < thr;
    sp.records[i] = {roots[i].k, roots[i].multiplicity, s[n - 1], m};
  });
  for (const auto& r : sp.records) {
    if (r.sv_multiplicity != r.multiplicity)
      sp.warnings.push_back("root near k=" + std::to_string(r.k) + ": winding multiplicity " +
                            std::to_string(r.multiplicity) + " but " + std::to_string(r.sv_multiplicity) +
                            " small singular values");
  }
  const long expected = counts.back() - counts.front();
  if (expected != sp.count())
    sp.warnings.push_back("winding count " + std::to_string(expected) + " differs from located " +
                          std::to_string(sp.count()));
  return sp;
}

Spectrum find_first_states(const MetricGraph& g, int states, const SpectrumOptions& opts) {
  require_valid(g);
  const double L = g.total_length();
  double K = std::numbers::pi * (states + 3 + g.bond_count()) / L;
  for (int attempt = 0; attempt < 20; ++attempt) {
    Spectrum sp = find_spectrum(g, K, opts);
    if (sp.count() >= states) return sp;
    K *= 1.5;
  }
  throw NumericalError("could not locate the requested number of states");
}

int zero_mode_multiplicity(const MetricGraph& g) {
  int z = 0;
  for (const auto& comp : connected_components(g)) {
    bool ok = true;
    for (int v : comp) {
      const auto& c = g.vertex(v).condition;
      if (!(c.is_delta_type() && c.coupling() == 0.0)) ok = false;
    }
    z += ok;
  }
  return z;
}

int secular_zero_order(const MetricGraph& g) {
  if (g.has_k_dependent_conditions()) throw InputError("zero order needs a scale-invariant scattering matrix");
  const Eigen::MatrixXcd S = assemble_edge_scattering(g, 1.0).S;
  const int n = static_cast<int>(S.rows());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(Eigen::MatrixXcd::Identity(n, n) - S);
  int m = 0;
  for (int j = 0; j < n; ++j) m += svd.singularValues()[j] < 1e-9;
  return m;
}

}  // namespace qgraph
