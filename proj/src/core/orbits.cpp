#include "qgraph/orbits.hpp"

#include "qgraph/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>

namespace qgraph {

ClassicalMap classical_map(const MetricGraph& g) {
  require_valid(g);
  if (g.has_k_dependent_conditions())
    throw InputError("the classical map needs k-independent vertex conditions", "vertices");
  ClassicalMap cm;
  cm.M = assemble_edge_scattering(g, 1.0).S.cwiseAbs2();
  const int n = static_cast<int>(cm.M.rows());
  if (n == 0) return cm;
  cm.stochastic_defect = std::max((cm.M.rowwise().sum().array() - 1.0).abs().maxCoeff(),
                                  (cm.M.colwise().sum().array() - 1.0).abs().maxCoeff());
  const Eigen::VectorXd u = Eigen::VectorXd::Constant(n, 1.0 / n);
  cm.invariant_defect = (cm.M * u - u).cwiseAbs().maxCoeff();
  Eigen::EigenSolver<Eigen::MatrixXd> es(cm.M, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + n);
  std::stable_sort(ev.begin(), ev.end(), [](cplx a, cplx b) { return std::abs(1.0 - a) < std::abs(1.0 - b); });
  cm.eigenvalues = Eigen::Map<Eigen::VectorXcd>(ev.data(), n);
  cm.gap = n > 1 ? std::abs(1.0 - ev[1]) : 0.0;
  return cm;
}

std::vector<int> canonical_rotation(const std::vector<int>& word) {
  std::vector<int> best = word, rot = word;
  for (std::size_t s = 1; s < word.size(); ++s) {
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
    if (rot < best) best = rot;
  }
  return best;
}

bool is_lyndon(const std::vector<int>& word) {
  const std::size_t n = word.size();
  for (std::size_t s = 1; s < n; ++s) {
    // Compare the rotation starting at s with the word itself.
    for (std::size_t i = 0; i < n; ++i) {
      const int a = word[(s + i) % n], b = word[i];
      if (a < b) return false;
      if (a > b) break;
      if (i + 1 == n) return false;  // equal rotation: not primitive
    }
  }
  return n > 0;
}

std::vector<PeriodicOrbit> enumerate_primitive_orbits(const MetricGraph& g, int n_max, double k, int threads,
                                                      long budget) {
  require_valid(g);
  if (n_max < 1) throw InputError("nmax must be at least 1", "nmax");
  const DirectedEdgeIndex idx(g);
  const Eigen::MatrixXcd S = QuantumMapEvaluator(g).edge_scattering(k);
  const int nb = 2 * idx.bond_count();

  // Successors restricted to bond channels with non-zero amplitude.
  std::vector<std::vector<int>> next(nb);
  for (int a = 0; a < nb; ++a)
    for (int b = 0; b < nb; ++b)
      if (idx.follows(a, b) && S(b, a) != cplx(0.0)) next[a].push_back(b);

  std::atomic<long> total{0};
  std::atomic<bool> exceeded{false};
  std::vector<std::vector<PeriodicOrbit>> per_start(nb);
  parallel_for(nb, resolve_threads(threads), [&](int s) {
    std::vector<int> path{s};
    std::vector<cplx> amp{cplx(1.0)};
    std::vector<std::size_t> choice{0};
    auto& out = per_start[s];
    while (!path.empty() && !exceeded.load(std::memory_order_relaxed)) {
      const int cur = path.back();
      if (choice.back() == 0) {
        // Closing step back to s.
        if (idx.follows(cur, s) && S(s, cur) != cplx(0.0) && is_lyndon(path)) {
          PeriodicOrbit p;
          p.channels = path;
          p.topological_length = static_cast<int>(path.size());
          for (int c : path) p.metric_length += idx.length(c);
          p.amplitude = amp.back() * S(s, cur);
          out.push_back(std::move(p));
          if (total.fetch_add(1, std::memory_order_relaxed) + 1 > budget) exceeded = true;
        }
      }
      if (static_cast<int>(path.size()) < n_max) {
        auto& i = choice.back();
        while (i < next[cur].size() && next[cur][i] < s) ++i;
        if (i < next[cur].size()) {
          const int b = next[cur][i++];
          path.push_back(b);
          amp.push_back(amp.back() * S(b, cur));
          choice.push_back(0);
          continue;
        }
      }
      path.pop_back();
      amp.pop_back();
      choice.pop_back();
    }
  });
  if (exceeded) throw NumericalError("orbit budget of " + std::to_string(budget) + " exceeded; lower nmax");

  std::vector<PeriodicOrbit> orbits;
  for (auto& v : per_start) orbits.insert(orbits.end(), v.begin(), v.end());
  std::sort(orbits.begin(), orbits.end(), [](const PeriodicOrbit& a, const PeriodicOrbit& b) {
    return a.topological_length != b.topological_length ? a.topological_length < b.topological_length
                                                        : a.channels < b.channels;
  });
  std::map<std::vector<int>, int> where;
  for (std::size_t i = 0; i < orbits.size(); ++i) where[orbits[i].channels] = static_cast<int>(i);
  for (auto& p : orbits) {
    std::vector<int> rev(p.channels.rbegin(), p.channels.rend());
    for (int& c : rev) c = idx.reverse(c);
    auto it = where.find(canonical_rotation(rev));
    p.partner = it == where.end() ? -1 : it->second;
  }
  return orbits;
}

cplx orbit_trace(const std::vector<PeriodicOrbit>& orbits, double k, int n) {
  cplx sum = 0.0;
  for (const auto& p : orbits) {
    if (n % p.topological_length != 0) continue;
    const int r = n / p.topological_length;
    sum += static_cast<double>(p.topological_length) * std::pow(p.amplitude, r) * std::polar(1.0, k * r * p.metric_length);
  }
  return sum;
}

TraceIdentity trace_identity_check(const MetricGraph& g, double k, int n) {
  if (!g.is_closed()) throw InputError("trace identity needs a closed graph", "edges");
  const Eigen::MatrixXcd U = quantum_map(g, k);
  Eigen::MatrixXcd P = Eigen::MatrixXcd::Identity(U.rows(), U.cols());
  for (int i = 0; i < n; ++i) P = U * P;
  return {P.trace(), orbit_trace(enumerate_primitive_orbits(g, n, k), k, n)};
}

TrajectoryExpansion scattering_trajectory_expansion(const MetricGraph& g, int lead_in, int lead_out, double k,
                                                    int n_max) {
  require_valid(g);
  if (n_max < 1) throw InputError("nmax must be at least 1", "nmax");
  const auto& leads = g.leads();
  auto lead_pos = [&](int id, const char* field) {
    auto it = std::find(leads.begin(), leads.end(), id);
    if (it == leads.end()) throw InputError("edge " + std::to_string(id) + " is not a lead", field);
    return static_cast<int>(it - leads.begin());
  };
  const int li = lead_pos(lead_in, "lead_in"), lo = lead_pos(lead_out, "lead_out");
  QuantumMapEvaluator ev(g);
  const int nb = 2 * ev.index().bond_count();
  const OpenBlocks b = split_open_blocks(ev(k), nb);

  TrajectoryExpansion out;
  if (nb > 0) {
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(b.BB, false);
    out.spectral_radius = es.eigenvalues().cwiseAbs().maxCoeff();
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(b.BB);
    out.remainder_norm = std::pow(svd.singularValues()[0], n_max - 1);
  }
  out.converges = out.spectral_radius < 1.0 - 1e-6;
  if (!out.converges)
    out.warnings.push_back("spectral radius of U_BB is " + std::to_string(out.spectral_radius) +
                           ": the trajectory sum need not converge (bound state in the continuum nearby)");

  cplx sum = b.LL(lo, li);
  out.partial.push_back(sum);
  if (nb > 0) {
    Eigen::VectorXcd v = b.BL.col(li);  // amplitudes after entering the bonds
    for (int n = 2; n <= n_max; ++n) {
      sum += (b.LB.row(lo) * v)(0, 0);
      out.partial.push_back(sum);
      v = b.BB * v;
    }
  } else {
    for (int n = 2; n <= n_max; ++n) out.partial.push_back(sum);
  }
  out.value = sum;
  return out;
}

}  // namespace qgraph
