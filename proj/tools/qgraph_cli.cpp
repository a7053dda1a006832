// Command-line front end. Talks to the library only through qgraph.h.

#include <qgraph/qgraph.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using nlohmann::json;

enum class Kind { Real, Int, Seed, Text, IntList, RealList, Groups, Couplings };

struct OptionSpec {
  const char* name;  // flag name and JSON key
  Kind kind;
  const char* help;
};

struct FlagSpec {
  const char* name;
  const char* key;
  bool value;  // stored when the flag is present
  const char* help;
};

struct Subcommand {
  const char* name;
  const char* help;
  std::vector<OptionSpec> options;
  std::vector<FlagSpec> flags = {};
  bool has_format = false;
};

const std::vector<Subcommand>& subcommands() {
  static const std::vector<Subcommand> s{
      {"spectrum", "eigenvalues k_n with multiplicity and residual (CSV)",
       {{"kmax", Kind::Real, "upper end of the k window"},
        {"states", Kind::Int, "first N states instead of a k window"},
        {"tol", Kind::Real, "relative bracket width"},
        {"grid_step", Kind::Real, "winding-count grid step"}},
       {},
       true},
      {"eigfun", "eigenfunctions at an eigenvalue sampled along every bond",
       {{"k", Kind::Real, "eigenvalue"}, {"samples", Kind::Int, "points per bond"}},
       {},
       true},
      {"scatter", "S, R and the Wigner-Smith matrix of an open graph (JSON)", {{"k", Kind::Real, "wave number"}}},
      {"secular", "value of det(I - U(k))",
       {{"k", Kind::Real, "wave number"}, {"alpha", Kind::RealList, "magnetic phase per edge, comma separated"}},
       {},
       true},
      {"dtn", "Dirichlet-to-Neumann matrices and the DtN spectrum (JSON)",
       {{"k", Kind::Real, "wave number for the DtN matrix"},
        {"boundary", Kind::IntList, "boundary vertex ids, comma separated"},
        {"kmax", Kind::Real, "upper end of the DtN spectrum"},
        {"loops", Kind::Text, "split or direct"},
        {"tol", Kind::Real, "relative bracket width"},
        {"grid_step", Kind::Real, "winding-count grid step"}}},
      {"orbits", "primitive periodic orbits up to nmax scatterings (CSV)",
       {{"nmax", Kind::Int, "largest topological length"}, {"k", Kind::Real, "wave number for amplitudes"}}},
      {"trace-check", "Gaussian trace-formula report (JSON)",
       {{"L_cut", Kind::Real, "largest metric length on the geometric side"},
        {"center", Kind::Real, "centre of the test function"},
        {"sigma", Kind::Real, "width of the test function"},
        {"kmax", Kind::Real, "spectral cutoff"},
        {"tail", Kind::Real, "transform tail beyond L_cut"}}},
      {"classical", "classical map, spectral gap and gap verdict (JSON)", {{"c", Kind::Real, "gap constant"}}},
      {"formfactor", "form factor by phase-disorder Monte Carlo (CSV)",
       {{"n", Kind::Int, "single n"},
        {"nmax", Kind::Int, "sweep 1..nmax"},
        {"samples", Kind::Int, "Monte Carlo samples"},
        {"seed", Kind::Seed, "64-bit seed"}},
       {{"no-exact", "exact", false, "skip the exact combinatorial value"}}},
      {"spacings", "unfolded nearest-neighbour spacing histogram",
       {{"kmax", Kind::Real, "upper end of the k window"},
        {"states", Kind::Int, "first N states (default 1000)"},
        {"bins", Kind::Int, "histogram bins"},
        {"smax", Kind::Real, "histogram range"}},
       {},
       true},
      {"nodal", "nodal counts, surplus and optional Morse index (CSV)",
       {{"states", Kind::Int, "number of states"},
        {"fd_step", Kind::Real, "finite-difference step"},
        {"vertex_zero", Kind::Real, "relative vertex-zero threshold"}},
       {{"magnetic", "magnetic", true, "add the Morse index column"},
        {"full", "parametrization", true, "perturb every edge instead of a cycle basis"}}},
      {"magnetic", "magnetic Hessian and Morse index of state n (JSON)",
       {{"n", Kind::Int, "state index"},
        {"fd_step", Kind::Real, "finite-difference step"},
        {"vertex_zero", Kind::Real, "relative vertex-zero threshold"}},
       {{"full", "parametrization", true, "perturb every edge instead of a cycle basis"}}},
      {"surgery", "apply a surgery and check interlacing (JSON)",
       {{"op", Kind::Text, "dirichlet, split or coupling"},
        {"vertices", Kind::IntList, "dirichlet: vertex ids"},
        {"vertex", Kind::Int, "split: vertex id"},
        {"groups", Kind::Groups, "split: endpoint positions, e.g. 0,1|2"},
        {"couplings", Kind::Couplings, "coupling: v:alpha,...; split: one alpha per group"},
        {"kmax", Kind::Real, "spectral cutoff"},
        {"route", Kind::Text, "scattering or dtn"}},
       {{"no-check", "check", false, "skip the interlacing check"}}},
  };
  return s;
}

struct UsageError {
  std::string message, field;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double to_real(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError{"'" + s + "' is not a number", field};
}

long long to_int(const std::string& s, const std::string& field) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw UsageError{"'" + s + "' is not an integer", field};
}

json convert(const std::string& field, Kind kind, const std::string& v, const std::string& op) {
  switch (kind) {
    case Kind::Real:
      return to_real(v, field);
    case Kind::Int:
      return to_int(v, field);
    case Kind::Seed:
      try {
        std::size_t used = 0;
        if (!v.empty() && v[0] != '-') {
          const unsigned long long x = std::stoull(v, &used);
          if (used == v.size()) return x;
        }
      } catch (const std::exception&) {
      }
      throw UsageError{"'" + v + "' is not a 64-bit seed", field};
    case Kind::Text:
      return v;
    case Kind::IntList: {
      json a = json::array();
      for (const auto& x : split(v, ',')) a.push_back(to_int(x, field));
      return a;
    }
    case Kind::RealList: {
      json a = json::array();
      for (const auto& x : split(v, ',')) a.push_back(to_real(x, field));
      return a;
    }
    case Kind::Groups: {
      json a = json::array();
      for (const auto& grp : split(v, '|')) {
        json g = json::array();
        for (const auto& x : split(grp, ',')) g.push_back(to_int(x, field));
        a.push_back(g);
      }
      return a;
    }
    case Kind::Couplings: {
      if (op == "split") return convert(field, Kind::RealList, v, op);
      json o = json::object();
      for (const auto& pair : split(v, ',')) {
        const auto kv = split(pair, ':');
        if (kv.size() != 2) throw UsageError{"couplings must look like vertex:alpha,...", field};
        o[std::to_string(to_int(kv[0], field))] = to_real(kv[1], field);
      }
      return o;
    }
  }
  return nullptr;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

int report(int code, const std::string& message, const std::string& field) {
  const char* kind = code == 1 ? "input" : "numerical";
  std::cerr << "qgraph: error code=" << code << " kind=" << kind << " field=" << (field.empty() ? "-" : field)
            << " message=" << json(one_line(message)).dump() << std::endl;
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, scattering and statistics of quantum graphs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qg_version()));

  std::string graph_path, output_path, format;
  int threads = 0;

  struct Bound {
    const Subcommand* spec;
    CLI::App* app;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
  };
  std::vector<Bound> bound;
  bound.reserve(subcommands().size());
  for (const auto& sc : subcommands()) {
    bound.push_back({&sc, app.add_subcommand(sc.name, sc.help), {}, {}});
    Bound& b = bound.back();
    b.app->add_option("graph", graph_path, "graph file (JSON)")->required();
    b.app->add_option("-o,--output", output_path, "write data here instead of stdout");
    b.app->add_option("--threads", threads, "worker threads (default: QGRAPH_THREADS, then all cores)")
        ->check(CLI::PositiveNumber);
    if (sc.has_format) b.app->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    for (const auto& o : sc.options) b.app->add_option(std::string("--") + o.name, b.values[o.name], o.help);
    for (const auto& f : sc.flags) b.app->add_flag(std::string("--") + f.name, b.flags[f.name], f.help);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    std::cout << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << qg_version() << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    return report(1, e.what(), "argv");
  }

  const Bound* chosen = nullptr;
  for (const auto& b : bound)
    if (b.app->parsed()) chosen = &b;

  json options = json::object();
  try {
    std::string op;
    if (auto it = chosen->values.find("op"); it != chosen->values.end()) op = it->second;
    for (const auto& o : chosen->spec->options) {
      if (chosen->app->count(std::string("--") + o.name) == 0) continue;
      options[o.name] = convert(o.name, o.kind, chosen->values.at(o.name), op);
    }
    for (const auto& f : chosen->spec->flags) {
      if (!chosen->flags.at(f.name)) continue;
      if (std::string(f.key) == "parametrization")
        options[f.key] = "full";
      else
        options[f.key] = f.value;
    }
  } catch (const UsageError& e) {
    return report(1, e.message, e.field);
  }
  if (threads > 0) options["threads"] = threads;
  if (!format.empty()) options["format"] = format;

  qg_graph* g = nullptr;
  if (qg_graph_load_file(graph_path.c_str(), &g) != QG_OK) return report(1, qg_last_error(), qg_last_error_field());

  qg_result* r = nullptr;
  const qg_status st = qg_run(g, chosen->spec->name, options.dump().c_str(), &r);
  qg_graph_free(g);
  if (st != QG_OK) return report(st, qg_last_error(), qg_last_error_field());

  for (int i = 0; i < qg_result_warning_count(r); ++i)
    std::cerr << "qgraph: warning " << json(one_line(qg_result_warning(r, i))).dump() << '\n';

  int code = 0;
  if (output_path.empty()) {
    std::cout.write(qg_result_text(r), static_cast<std::streamsize>(qg_result_size(r)));
    std::cout.flush();
  } else {
    std::ofstream out(output_path, std::ios::binary);
    out.write(qg_result_text(r), static_cast<std::streamsize>(qg_result_size(r)));
    if (!out) code = report(1, "cannot write " + output_path, "output");
  }
  qg_result_free(r);
  return code;
}
