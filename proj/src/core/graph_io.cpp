#include "qgraph/graph_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace qgraph {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw InputError(field + ": " + what, field);
}

int read_int(const json& obj, const char* key, const std::string& where) {
  const std::string field = where + "." + key;
  if (!obj.contains(key)) fail(field, "missing");
  const json& v = obj.at(key);
  if (!v.is_number_integer()) fail(field, "must be an integer");
  return v.get<int>();
}

cplx read_complex(const json& p, const std::string& field) {
  if (p.is_number()) return {p.get<double>(), 0.0};
  if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
    fail(field, "expected [re, im]");
  return {p[0].get<double>(), p[1].get<double>()};
}

VertexCondition read_condition(const json& c, const std::string& field) {
  if (c.is_string()) {
    const auto s = c.get<std::string>();
    if (s == "NK" || s == "nk" || s == "neumann") return VertexCondition::nk();
    if (s == "dirichlet" || s == "D") return VertexCondition::dirichlet();
    fail(field, "unknown condition '" + s + "'");
  }
  if (!c.is_object() || c.size() != 1) fail(field, "expected \"NK\", \"dirichlet\", {\"delta\": x} or {\"unitary\": [...]}");
  if (c.contains("delta")) {
    if (!c["delta"].is_number()) fail(field + ".delta", "must be a number");
    return VertexCondition::delta(c["delta"].get<double>());
  }
  if (c.contains("unitary")) {
    const json& u = c["unitary"];
    if (!u.is_array() || u.empty()) fail(field + ".unitary", "must be a non-empty array");
    std::vector<cplx> flat;
    int rows = 0;
    // Either a flat row-major list of [re,im] pairs or a list of rows.
    const bool nested = u[0].is_array() && !u[0].empty() && u[0][0].is_array();
    if (nested) {
      rows = static_cast<int>(u.size());
      for (std::size_t i = 0; i < u.size(); ++i) {
        if (!u[i].is_array() || static_cast<int>(u[i].size()) != rows)
          fail(field + ".unitary[" + std::to_string(i) + "]", "row length must equal the number of rows");
        for (std::size_t j = 0; j < u[i].size(); ++j)
          flat.push_back(read_complex(u[i][j], field + ".unitary[" + std::to_string(i) + "][" + std::to_string(j) + "]"));
      }
    } else {
      for (std::size_t i = 0; i < u.size(); ++i)
        flat.push_back(read_complex(u[i], field + ".unitary[" + std::to_string(i) + "]"));
      rows = static_cast<int>(std::lround(std::sqrt(static_cast<double>(flat.size()))));
      if (rows * rows != static_cast<int>(flat.size())) fail(field + ".unitary", "entry count is not a square");
    }
    Eigen::MatrixXcd m(rows, rows);
    for (int i = 0; i < rows; ++i)
      for (int j = 0; j < rows; ++j) m(i, j) = flat[i * rows + j];
    return VertexCondition::custom(std::move(m));
  }
  fail(field, "unknown condition object");
}

}  // namespace

MetricGraph parse_graph_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("json: ") + e.what(), "json");
  }
  if (!doc.is_object()) fail("root", "must be an object");
  if (!doc.contains("vertices") || !doc["vertices"].is_array()) fail("vertices", "missing or not an array");
  if (!doc.contains("edges") || !doc["edges"].is_array()) fail("edges", "missing or not an array");

  std::vector<Vertex> vs;
  for (std::size_t i = 0; i < doc["vertices"].size(); ++i) {
    const json& jv = doc["vertices"][i];
    const std::string where = "vertices[" + std::to_string(i) + "]";
    if (!jv.is_object()) fail(where, "must be an object");
    Vertex v;
    v.id = read_int(jv, "id", where);
    v.condition = jv.contains("condition") ? read_condition(jv["condition"], where + ".condition") : VertexCondition::nk();
    vs.push_back(std::move(v));
  }
  std::sort(vs.begin(), vs.end(), [](const Vertex& a, const Vertex& b) { return a.id < b.id; });

  std::vector<Edge> es;
  for (std::size_t i = 0; i < doc["edges"].size(); ++i) {
    const json& je = doc["edges"][i];
    const std::string where = "edges[" + std::to_string(i) + "]";
    if (!je.is_object()) fail(where, "must be an object");
    Edge e;
    e.id = read_int(je, "id", where);
    e.origin = read_int(je, "from", where);
    if (!je.contains("length")) fail(where + ".length", "missing");
    const json& jl = je["length"];
    if (jl.is_string()) {
      if (jl.get<std::string>() != "inf") fail(where + ".length", "must be a positive number or \"inf\"");
      e.length = kInfiniteLength;
      if (je.contains("to") && !je["to"].is_null()) fail(where + ".to", "a lead must omit \"to\"");
    } else if (jl.is_number()) {
      e.length = jl.get<double>();
      if (!(e.length > 0) || !std::isfinite(e.length)) fail(where + ".length", "must be a positive finite number");
      e.terminus = read_int(je, "to", where);
    } else {
      fail(where + ".length", "must be a positive number or \"inf\"");
    }
    es.push_back(e);
  }
  std::sort(es.begin(), es.end(), [](const Edge& a, const Edge& b) { return a.id < b.id; });

  MetricGraph g(std::move(vs), std::move(es));
  require_valid(g);
  return g;
}

MetricGraph load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open graph file '" + path + "'", "path");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_graph_json(ss.str());
}

std::string graph_to_json(const MetricGraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (const Vertex& v : g.vertices()) {
    json jv;
    jv["id"] = v.id;
    switch (v.condition.kind) {
      case ConditionKind::NeumannKirchhoff: jv["condition"] = "NK"; break;
      case ConditionKind::Dirichlet: jv["condition"] = "dirichlet"; break;
      case ConditionKind::Delta: jv["condition"] = {{"delta", v.condition.alpha}}; break;
      case ConditionKind::CustomUnitary: {
        json rows = json::array();
        const auto& u = v.condition.unitary;
        for (int i = 0; i < u.rows(); ++i) {
          json row = json::array();
          for (int j = 0; j < u.cols(); ++j) row.push_back({u(i, j).real(), u(i, j).imag()});
          rows.push_back(row);
        }
        jv["condition"] = {{"unitary", rows}};
        break;
      }
    }
    doc["vertices"].push_back(jv);
  }
  doc["edges"] = json::array();
  for (const Edge& e : g.edges()) {
    json je;
    je["id"] = e.id;
    je["from"] = e.origin;
    if (e.is_lead()) {
      je["length"] = "inf";
    } else {
      je["to"] = *e.terminus;
      je["length"] = e.length;
    }
    doc["edges"].push_back(je);
  }
  return doc.dump(2) + "\n";
}

}  // namespace qgraph
