#include "qgraph/commands.hpp"

#include "qgraph/dtn.hpp"
#include "qgraph/graph_io.hpp"
#include "qgraph/nodal.hpp"
#include "qgraph/statistics.hpp"
#include "qgraph/surgery.hpp"
#include "qgraph/trace_formula.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <sstream>

namespace qgraph {

namespace {

using nlohmann::json;

constexpr double kResidualTolerance = 1e-6;

// Typed access to the options object; every error names the option.
class Options {
 public:
  explicit Options(const std::string& text) {
    if (text.empty()) {
      doc_ = json::object();
      return;
    }
    try {
      doc_ = json::parse(text);
    } catch (const json::parse_error& e) {
      throw InputError(std::string("options: ") + e.what(), "options");
    }
    if (!doc_.is_object()) throw InputError("options must be a JSON object", "options");
  }

  bool has(const char* key) const { return doc_.contains(key) && !doc_[key].is_null(); }
  const json& raw(const char* key) const { return doc_.at(key); }

  double real(const char* key) const {
    if (!has(key)) throw InputError(std::string("missing option ") + key, key);
    if (!doc_[key].is_number()) throw InputError(std::string(key) + " must be a number", key);
    const double v = doc_[key].get<double>();
    if (!std::isfinite(v)) throw InputError(std::string(key) + " must be finite", key);
    return v;
  }
  double real(const char* key, double def) const { return has(key) ? real(key) : def; }
  double positive(const char* key) const {
    const double v = real(key);
    if (!(v > 0)) throw InputError(std::string(key) + " must be positive", key);
    return v;
  }
  double positive(const char* key, double def) const { return has(key) ? positive(key) : def; }

  long integer(const char* key) const {
    if (!has(key)) throw InputError(std::string("missing option ") + key, key);
    if (!doc_[key].is_number_integer()) throw InputError(std::string(key) + " must be an integer", key);
    return doc_[key].get<long>();
  }
  long integer(const char* key, long def) const { return has(key) ? integer(key) : def; }
  long count(const char* key, long def) const {
    const long v = integer(key, def);
    if (v < 1) throw InputError(std::string(key) + " must be positive", key);
    return v;
  }

  std::uint64_t seed(const char* key, std::uint64_t def) const {
    if (!has(key)) return def;
    if (doc_[key].is_number_unsigned()) return doc_[key].get<std::uint64_t>();
    if (doc_[key].is_number_integer() && doc_[key].get<long long>() >= 0) return doc_[key].get<std::uint64_t>();
    throw InputError(std::string(key) + " must be a non-negative 64-bit integer", key);
  }

  bool flag(const char* key, bool def) const {
    if (!has(key)) return def;
    if (!doc_[key].is_boolean()) throw InputError(std::string(key) + " must be true or false", key);
    return doc_[key].get<bool>();
  }

  std::string text(const char* key, const std::string& def) const {
    if (!has(key)) return def;
    if (!doc_[key].is_string()) throw InputError(std::string(key) + " must be a string", key);
    return doc_[key].get<std::string>();
  }

  std::vector<int> ints(const char* key) const {
    if (!has(key)) return {};
    const json& a = doc_[key];
    if (!a.is_array()) throw InputError(std::string(key) + " must be an array of integers", key);
    std::vector<int> out;
    for (const auto& x : a) {
      if (!x.is_number_integer()) throw InputError(std::string(key) + " must be an array of integers", key);
      out.push_back(x.get<int>());
    }
    return out;
  }

  std::string format(const std::string& def) const {
    const std::string f = text("format", def);
    if (f != "csv" && f != "json") throw InputError("format must be csv or json", "format");
    return f;
  }

  int threads() const { return static_cast<int>(integer("threads", 0)); }

 private:
  json doc_;
};

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

json matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

std::string dump(const json& j) { return j.dump() + "\n"; }

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  Csv& real(double x) { return cell(format_real(x)); }
  Csv& integer(long long x) { return cell(std::to_string(x)); }
  Csv& cell(const std::string& s) {
    out_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  void end() {
    out_ << '\n';
    first_ = true;
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
  bool first_ = true;
};

SpectrumOptions spectrum_options(const Options& o) {
  SpectrumOptions s;
  s.threads = o.threads();
  if (o.has("grid_step")) s.grid_step = o.positive("grid_step");
  if (o.has("tol")) s.tol = o.positive("tol");
  return s;
}

void check_residuals(const Spectrum& sp) {
  for (const auto& r : sp.records)
    if (r.residual > kResidualTolerance)
      throw NumericalError("residual " + format_real(r.residual) + " at k=" + format_real(r.k) + " exceeds " +
                           format_real(kResidualTolerance));
}

Spectrum spectrum_from(const MetricGraph& g, const Options& o) {
  const SpectrumOptions so = spectrum_options(o);
  Spectrum sp;
  if (o.has("states"))
    sp = find_first_states(g, static_cast<int>(o.count("states", 1)), so);
  else
    sp = find_spectrum(g, o.positive("kmax"), so);
  check_residuals(sp);
  return sp;
}

CommandOutput spectrum_cmd(const MetricGraph& g, const Options& o) {
  const Spectrum sp = spectrum_from(g, o);
  CommandOutput out{{}, o.format("csv"), sp.warnings};
  if (out.format == "json") {
    json j;
    j["k_max"] = sp.k_max;
    j["zero_modes"] = sp.zero_modes;
    j["audit_exact"] = sp.audit_exact;
    j["states"] = json::array();
    for (const auto& r : sp.records)
      j["states"].push_back({{"k", r.k}, {"multiplicity", r.multiplicity}, {"residual", r.residual}});
    j["warnings"] = sp.warnings;
    out.text = dump(j);
    return out;
  }
  Csv csv{"index", "k", "multiplicity", "residual"};
  int index = 1;
  if (sp.zero_modes > 0) {
    csv.integer(index).real(0.0).integer(sp.zero_modes).real(0.0).end();
    index += sp.zero_modes;
  }
  for (const auto& r : sp.records) {
    csv.integer(index).real(r.k).integer(r.multiplicity).real(r.residual).end();
    index += r.multiplicity;
  }
  out.text = csv.str();
  return out;
}

CommandOutput eigfun_cmd(const MetricGraph& g, const Options& o) {
  const double k = o.positive("k");
  const long samples = o.count("samples", 101);
  if (samples < 2) throw InputError("samples must be at least 2", "samples");
  const auto efs = eigenfunctions_at(g, k, o.positive("residual_tol", 1e-6));
  CommandOutput out{{}, o.format("csv"), {}};
  if (out.format == "json") {
    json j = json::array();
    for (const auto& f : efs) {
      json jf{{"k", f.k}, {"real_gauge", f.real_gauge}, {"A", json::array()}, {"B", json::array()}};
      for (int e = 0; e < f.A.size(); ++e) {
        jf["A"].push_back(complex_json(f.A[e]));
        jf["B"].push_back(complex_json(f.B[e]));
      }
      j.push_back(jf);
    }
    out.text = dump(j);
    return out;
  }
  Csv csv{"function", "edge", "x", "re", "im"};
  for (std::size_t i = 0; i < efs.size(); ++i)
    for (int e : g.bonds()) {
      const double len = g.edge(e).length;
      for (long s = 0; s < samples; ++s) {
        const double x = len * static_cast<double>(s) / static_cast<double>(samples - 1);
        const cplx v = efs[i].value(e, x);
        csv.integer(static_cast<long long>(i)).integer(e).real(x).real(v.real()).real(v.imag()).end();
      }
    }
  out.text = csv.str();
  return out;
}

CommandOutput scatter_cmd(const MetricGraph& g, const Options& o) {
  const double k = o.positive("k");
  const auto sc = open_scattering_matrix(g, k);
  const auto ws = wigner_smith(g, k, o.positive("h", 1e-6));
  json j;
  j["k"] = k;
  j["leads"] = g.leads();
  j["S"] = matrix_json(sc.S);
  j["R"] = matrix_json(sc.R);
  j["Q"] = matrix_json(ws.Q);
  j["singular"] = sc.singular;
  j["condition"] = sc.condition;
  j["unitarity_defect"] = unitarity_defect(sc.S);
  return {dump(j), "json", {}};
}

CommandOutput secular_cmd(const MetricGraph& g, const Options& o) {
  const double k = o.positive("k");
  MagneticPhases alpha;
  if (o.has("alpha")) {
    const json& a = o.raw("alpha");
    if (!a.is_array() || static_cast<int>(a.size()) != g.edge_count())
      throw InputError("alpha must list one phase per edge", "alpha");
    alpha = MagneticPhases(g.edge_count());
    for (int e = 0; e < g.edge_count(); ++e) {
      if (!a[e].is_number()) throw InputError("alpha must list numbers", "alpha");
      alpha[e] = a[e].get<double>();
    }
  }
  const cplx z = secular_function(g, k, alpha);
  CommandOutput out{{}, o.format("csv"), {}};
  if (out.format == "json") {
    out.text = dump(json{{"k", k}, {"value", complex_json(z)}});
  } else {
    Csv csv{"k", "re", "im"};
    csv.real(k).real(z.real()).real(z.imag()).end();
    out.text = csv.str();
  }
  return out;
}

LoopMode loop_mode(const Options& o) {
  const std::string m = o.text("loops", "split");
  if (m == "split") return LoopMode::Split;
  if (m == "direct") return LoopMode::Direct;
  throw InputError("loops must be split or direct", "loops");
}

CommandOutput dtn_cmd(const MetricGraph& g, const Options& o) {
  const LoopMode mode = loop_mode(o);
  json j;
  CommandOutput out{{}, "json", {}};
  if (o.has("k")) {
    const double k = o.positive("k");
    const DtnMatrix lam = all_vertex_dtn(g, k, mode);
    j["k"] = k;
    j["vertices"] = lam.vertices;
    j["dummy"] = lam.dummy;
    j["matrix"] = matrix_json(lam.values);
    if (o.has("boundary")) {
      const DtnMatrix red = reduce_dtn(lam, o.ints("boundary"));
      j["reduced"] = {{"boundary", red.vertices}, {"matrix", matrix_json(red.values)}};
    }
    j["secular"] = dtn_secular(g, k, mode);
  }
  if (o.has("kmax")) {
    const DtnSpectrum ds = find_spectrum_dtn(g, o.positive("kmax"), spectrum_options(o), mode);
    json states = json::array();
    for (const auto& r : ds.spectrum.records) states.push_back({{"k", r.k}, {"multiplicity", r.multiplicity}});
    json masked = json::array();
    for (auto [a, b] : ds.masked) masked.push_back({a, b});
    j["spectrum"] = states;
    j["masked"] = masked;
    j["warnings"] = ds.spectrum.warnings;
    out.warnings = ds.spectrum.warnings;
  }
  if (!o.has("k") && !o.has("kmax")) throw InputError("dtn needs k or kmax", "k");
  out.text = dump(j);
  return out;
}

CommandOutput orbits_cmd(const MetricGraph& g, const Options& o) {
  const int nmax = static_cast<int>(o.count("nmax", 1));
  const double k = o.positive("k", 1.0);
  const auto orbits = enumerate_primitive_orbits(g, nmax, k, o.threads(), o.integer("budget", kOrbitBudget));
  const DirectedEdgeIndex idx(g);
  Csv csv{"index", "n_p", "metric_length", "amp_re", "amp_im", "partner", "channels"};
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const auto& p = orbits[i];
    std::string chans;
    for (std::size_t c = 0; c < p.channels.size(); ++c) chans += (c ? " " : "") + idx.label(p.channels[c]);
    csv.integer(static_cast<long long>(i))
        .integer(p.topological_length)
        .real(p.metric_length)
        .real(p.amplitude.real())
        .real(p.amplitude.imag())
        .integer(p.partner)
        .cell(chans)
        .end();
  }
  return {csv.str(), "csv", {}};
}

CommandOutput trace_check_cmd(const MetricGraph& g, const Options& o) {
  const double L_cut = o.positive("L_cut", 20.0 * g.max_bond_length());
  const double center = o.real("center", 0.0);
  if (center < 0) throw InputError("center must be non-negative", "center");
  GaussianTestFunction h = GaussianTestFunction::for_cutoff(L_cut, center, o.positive("tail", 1e-12));
  if (o.has("sigma")) h.sigma = o.positive("sigma");
  const double kmax = o.positive("kmax", center + h.sigma * std::sqrt(2.0 * std::log(1e18)));
  const Spectrum sp = find_spectrum(g, kmax, spectrum_options(o));
  check_residuals(sp);
  const auto r = trace_formula_check(g, sp, h, L_cut);
  json j{{"sigma", h.sigma},
         {"center", h.center},
         {"L_cut", L_cut},
         {"k_max", kmax},
         {"spectral_side", r.spectral_side},
         {"geometric_side", r.geometric_side},
         {"residual", r.residual()},
         {"truncation_bound", r.truncation_bound},
         {"weyl_term", r.weyl_term},
         {"zero_mode_term", r.zero_mode_term},
         {"zero_order", r.zero_order},
         {"max_walk_length", r.max_walk_length},
         {"within_bound", r.residual() <= r.truncation_bound + 1e-7},
         {"warnings", r.warnings}};
  return {dump(j), "json", r.warnings};
}

CommandOutput classical_cmd(const MetricGraph& g, const Options& o) {
  const ClassicalMap cm = classical_map(g);
  const TannerReport t = tanner_gap_report(g, o.positive("c", 1.0));
  json ev = json::array();
  for (int i = 0; i < cm.eigenvalues.size(); ++i) ev.push_back(complex_json(cm.eigenvalues[i]));
  json j{{"M", matrix_json(cm.M)},
         {"eigenvalues", ev},
         {"gap", cm.gap},
         {"stochastic_defect", cm.stochastic_defect},
         {"invariant_defect", cm.invariant_defect},
         {"tanner",
          {{"gap", t.gap},
           {"gap_times_B", t.gap_times_b},
           {"gap_times_sqrt_B", t.gap_times_sqrt_b},
           {"c", t.c},
           {"has_minus_one", t.has_minus_one},
           {"verdict", to_string(t.verdict)},
           {"convention", t.convention}}}};
  return {dump(j), "json", {}};
}

CommandOutput formfactor_cmd(const MetricGraph& g, const Options& o) {
  int lo, hi;
  if (o.has("nmax")) {
    lo = 1;
    hi = static_cast<int>(o.count("nmax", 1));
  } else {
    lo = hi = static_cast<int>(o.integer("n"));
    if (lo < 0) throw InputError("n must be non-negative", "n");
  }
  const long samples = o.count("samples", 10000);
  const std::uint64_t seed = o.seed("seed", 1);
  const bool exact = o.flag("exact", true);
  Csv csv{"n", "tau", "K_mc", "stderr", "K_exact", "K_diag_leading", "K_diag", "samples", "seed"};
  for (int n = lo; n <= hi; ++n) {
    const auto mc = form_factor_mc(g, n, samples, seed, o.threads());
    const auto diag = form_factor_diagonal(g, n);
    csv.integer(n).real(mc.tau).real(mc.value).real(mc.stderr_);
    if (exact && n <= kExactFormFactorMaxN)
      csv.real(form_factor_exact_small(g, n));
    else
      csv.cell("");
    csv.real(diag.leading);
    if (diag.corrections_included)
      csv.real(diag.value);
    else
      csv.cell("");
    csv.integer(samples).cell(std::to_string(seed)).end();
  }
  return {csv.str(), "csv", {}};
}

CommandOutput spacings_cmd(const MetricGraph& g, const Options& o) {
  const Spectrum sp = o.has("kmax") || o.has("states") ? spectrum_from(g, o) : find_first_states(g, 1000, spectrum_options(o));
  check_residuals(sp);
  const auto s = spacing_distribution(sp, g.total_length(), static_cast<int>(o.count("bins", 50)), o.positive("smax", 4.0));
  CommandOutput out{{}, o.format("csv"), sp.warnings};
  if (out.format == "json") {
    out.text = dump(json{{"mean", s.mean},
                         {"min", s.min},
                         {"max", s.max},
                         {"spacings", s.spacings},
                         {"bin_edges", s.bin_edges},
                         {"histogram", s.histogram},
                         {"weyl_ratio", weyl_ratio(sp, g.total_length(), sp.count())}});
    return out;
  }
  Csv csv{"s_lo", "s_hi", "count", "density"};
  const double total = static_cast<double>(s.spacings.size());
  for (std::size_t b = 0; b < s.histogram.size(); ++b) {
    const double w = s.bin_edges[b + 1] - s.bin_edges[b];
    csv.real(s.bin_edges[b]).real(s.bin_edges[b + 1]).integer(s.histogram[b]).real(s.histogram[b] / (total * w)).end();
  }
  out.text = csv.str();
  return out;
}

NodalOptions nodal_options(const Options& o) {
  NodalOptions n;
  n.threads = o.threads();
  if (o.has("vertex_zero")) n.vertex_zero = o.positive("vertex_zero");
  return n;
}

HessianParametrization parametrization(const Options& o) {
  const std::string p = o.text("parametrization", "reduced");
  if (p == "reduced") return HessianParametrization::Reduced;
  if (p == "full") return HessianParametrization::Full;
  throw InputError("parametrization must be reduced or full", "parametrization");
}

CommandOutput nodal_cmd(const MetricGraph& g, const Options& o) {
  const NodalOptions no = nodal_options(o);
  const auto states = nodal_states(g, static_cast<int>(o.count("states", 100)), no);
  const bool magnetic = o.flag("magnetic", false);
  const double fd = o.positive("fd_step", kDefaultFdStep);
  Csv csv{"n", "k_n", "phi", "nu", "surplus", "deficiency", "morse_index", "generic_flag"};
  for (const auto& d : states) {
    csv.integer(d.n).real(d.k);
    if (d.generic()) {
      csv.integer(d.phi).integer(d.nu).integer(d.surplus).integer(d.deficiency);
      if (magnetic && d.k > 0)
        csv.integer(magnetic_hessian_morse_index(g, d.n, fd, parametrization(o), no).morse_index);
      else
        csv.cell("");
    } else {
      csv.cell("").cell("").cell("").cell("").cell("");
    }
    csv.integer(d.generic() ? 1 : 0).end();
  }
  return {csv.str(), "csv", {}};
}

CommandOutput magnetic_cmd(const MetricGraph& g, const Options& o) {
  const auto b = magnetic_hessian_morse_index(g, static_cast<int>(o.count("n", 1)), o.positive("fd_step", kDefaultFdStep),
                                              parametrization(o), nodal_options(o));
  std::vector<double> grad(b.gradient.data(), b.gradient.data() + b.gradient.size());
  std::vector<double> ev(b.eigenvalues.data(), b.eigenvalues.data() + b.eigenvalues.size());
  json j{{"n", b.n},
         {"k", b.k},
         {"parametrization", b.parametrization == HessianParametrization::Full ? "full" : "reduced"},
         {"edges", b.edges},
         {"gradient", grad},
         {"gradient_norm", b.gradient_norm},
         {"hessian", matrix_json(b.hessian)},
         {"eigenvalues", ev},
         {"morse_index", b.morse_index},
         {"kernel_dim", b.kernel_dim},
         {"expected_kernel", b.expected_kernel},
         {"kernel_ok", b.kernel_ok},
         {"symmetry_defect", b.symmetry_defect},
         {"fd_noise", b.fd_noise},
         {"max_shift", b.max_shift},
         {"warnings", b.warnings}};
  return {dump(j), "json", b.warnings};
}

CommandOutput surgery_cmd(const MetricGraph& g, const Options& o) {
  const std::string op = o.text("op", "");
  SurgeryRecord r;
  if (op == "dirichlet") {
    r = impose_dirichlet(g, o.ints("vertices"));
  } else if (op == "split") {
    std::vector<std::vector<int>> groups;
    if (!o.has("groups") || !o.raw("groups").is_array()) throw InputError("split needs groups", "groups");
    for (const auto& grp : o.raw("groups")) {
      if (!grp.is_array()) throw InputError("groups must be arrays of endpoint positions", "groups");
      std::vector<int> v;
      for (const auto& x : grp) {
        if (!x.is_number_integer()) throw InputError("groups must be arrays of endpoint positions", "groups");
        v.push_back(x.get<int>());
      }
      groups.push_back(v);
    }
    std::vector<double> couplings;
    if (o.has("couplings")) {
      for (const auto& x : o.raw("couplings")) {
        if (!x.is_number()) throw InputError("couplings must be numbers", "couplings");
        couplings.push_back(x.get<double>());
      }
    }
    r = split_vertex(g, static_cast<int>(o.integer("vertex")), groups, couplings);
  } else if (op == "coupling") {
    std::map<int, double> c;
    if (!o.has("couplings") || !o.raw("couplings").is_object())
      throw InputError("coupling needs couplings as {\"vertex\": alpha}", "couplings");
    for (const auto& [key, val] : o.raw("couplings").items()) {
      if (!val.is_number()) throw InputError("couplings must be numbers", "couplings");
      try {
        std::size_t used = 0;
        const int v = std::stoi(key, &used);
        if (used != key.size()) throw std::invalid_argument(key);
        c[v] = val.get<double>();
      } catch (const std::logic_error&) {
        throw InputError("coupling keys must be vertex ids", "couplings");
      }
    }
    r = increase_coupling(g, c);
  } else {
    throw InputError("op must be dirichlet, split or coupling", "op");
  }
  json j{{"operation", r.operation}, {"parameters", r.parameters}, {"d", r.constraints},
         {"after", json::parse(graph_to_json(r.after))}};
  if (o.flag("check", true)) {
    const std::string route = o.text("route", "scattering");
    if (route != "scattering" && route != "dtn") throw InputError("route must be scattering or dtn", "route");
    const double kmax = o.positive("kmax", std::numbers::pi * (30 + g.vertex_count() + 2) / g.total_length());
    const auto rep = check_surgery(r, kmax, route == "dtn" ? SpectrumRoute::Dtn : SpectrumRoute::Scattering, o.threads());
    json viol = json::array();
    for (const auto& v : rep.violations)
      viol.push_back({{"n", v.n}, {"lower", v.lower}, {"value", v.value}, {"upper", v.upper}});
    j["check"] = {{"direction", rep.direction == InterlacingDirection::Raise ? "raise" : "lower"},
                  {"checked_n", rep.checked_n},
                  {"violations", viol},
                  {"ok", rep.ok()}};
  }
  return {dump(j), "json", {}};
}

using Handler = std::function<CommandOutput(const MetricGraph&, const Options&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"spectrum", spectrum_cmd},   {"eigfun", eigfun_cmd},       {"scatter", scatter_cmd},
      {"secular", secular_cmd},     {"dtn", dtn_cmd},             {"orbits", orbits_cmd},
      {"trace-check", trace_check_cmd}, {"classical", classical_cmd}, {"formfactor", formfactor_cmd},
      {"spacings", spacings_cmd},   {"nodal", nodal_cmd},         {"magnetic", magnetic_cmd},
      {"surgery", surgery_cmd}};
  return h;
}

}  // namespace

std::string format_real(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, v] : handlers()) n.push_back(k);
    return n;
  }();
  return names;
}

CommandOutput run_command(const MetricGraph& g, const std::string& command, const std::string& options_json) {
  const auto it = handlers().find(command);
  if (it == handlers().end()) throw InputError("unknown command '" + command + "'", "command");
  const Options o(options_json);
  return it->second(g, o);
}

}  // namespace qgraph
