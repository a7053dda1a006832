#include "qgraph/qgraph.h"

#include "qgraph/commands.hpp"
#include "qgraph/graph_io.hpp"

#include <exception>
#include <new>
#include <string>

struct qg_graph {
  qgraph::MetricGraph graph;
};

struct qg_result {
  qgraph::CommandOutput output;
};

namespace {

thread_local std::string last_error;
thread_local std::string last_field;

qg_status fail(qg_status s, const std::string& msg, const std::string& field = {}) {
  last_error = msg;
  last_field = field;
  return s;
}

// Maps exceptions from the core onto status codes.
template <class F>
qg_status guarded(F&& f) {
  try {
    f();
    last_error.clear();
    last_field.clear();
    return QG_OK;
  } catch (const qgraph::InputError& e) {
    return fail(QG_INPUT_ERROR, e.what(), e.field);
  } catch (const qgraph::NumericalError& e) {
    return fail(QG_NUMERICAL_ERROR, e.what());
  } catch (const std::bad_alloc&) {
    return fail(QG_NUMERICAL_ERROR, "out of memory");
  } catch (const std::exception& e) {
    return fail(QG_NUMERICAL_ERROR, e.what());
  } catch (...) {
    return fail(QG_NUMERICAL_ERROR, "unknown failure");
  }
}

qg_status load(qg_graph** out, const auto& make) {
  if (!out) return fail(QG_INPUT_ERROR, "null output pointer", "out");
  *out = nullptr;
  return guarded([&] { *out = new qg_graph{make()}; });
}

}  // namespace

extern "C" {

qg_status qg_graph_load_file(const char* path, qg_graph** out) {
  if (!path) return fail(QG_INPUT_ERROR, "null path", "path");
  return load(out, [&] { return qgraph::load_graph_file(path); });
}

qg_status qg_graph_parse_json(const char* text, qg_graph** out) {
  if (!text) return fail(QG_INPUT_ERROR, "null text", "text");
  return load(out, [&] { return qgraph::parse_graph_json(text); });
}

void qg_graph_free(qg_graph* g) { delete g; }

int qg_graph_vertex_count(const qg_graph* g) { return g ? g->graph.vertex_count() : -1; }
int qg_graph_edge_count(const qg_graph* g) { return g ? g->graph.edge_count() : -1; }
int qg_graph_bond_count(const qg_graph* g) { return g ? g->graph.bond_count() : -1; }
int qg_graph_lead_count(const qg_graph* g) { return g ? g->graph.lead_count() : -1; }
double qg_graph_total_length(const qg_graph* g) { return g ? g->graph.total_length() : -1.0; }

qg_status qg_run(const qg_graph* g, const char* command, const char* options_json, qg_result** out) {
  if (!out) return fail(QG_INPUT_ERROR, "null output pointer", "out");
  *out = nullptr;
  if (!g) return fail(QG_INPUT_ERROR, "null graph", "graph");
  if (!command) return fail(QG_INPUT_ERROR, "null command", "command");
  return guarded([&] {
    auto r = qgraph::run_command(g->graph, command, options_json ? options_json : "");
    *out = new qg_result{std::move(r)};
  });
}

const char* qg_command_names(void) {
  static const std::string names = [] {
    std::string s;
    for (const auto& n : qgraph::command_names()) s += (s.empty() ? "" : "\n") + n;
    return s;
  }();
  return names.c_str();
}

const char* qg_result_text(const qg_result* r) { return r ? r->output.text.c_str() : ""; }
size_t qg_result_size(const qg_result* r) { return r ? r->output.text.size() : 0; }
const char* qg_result_format(const qg_result* r) { return r ? r->output.format.c_str() : ""; }
int qg_result_warning_count(const qg_result* r) { return r ? static_cast<int>(r->output.warnings.size()) : 0; }

const char* qg_result_warning(const qg_result* r, int i) {
  if (!r || i < 0 || i >= static_cast<int>(r->output.warnings.size())) return "";
  return r->output.warnings[i].c_str();
}

void qg_result_free(qg_result* r) { delete r; }

const char* qg_last_error(void) { return last_error.c_str(); }
const char* qg_last_error_field(void) { return last_field.c_str(); }

const char* qg_version(void) { return "0.1.0"; }

}  // extern "C"
