#ifndef QGRAPH_QGRAPH_H
#define QGRAPH_QGRAPH_H

#include <stddef.h>

#if defined(QG_BUILDING_LIBRARY)
#define QG_API __attribute__((visibility("default")))
#else
#define QG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qg_graph qg_graph;
typedef struct qg_result qg_result;

typedef enum qg_status {
  QG_OK = 0,
  QG_INPUT_ERROR = 1,     /* bad graph, option or argument */
  QG_NUMERICAL_ERROR = 2  /* residual above tolerance, solver failure */
} qg_status;

/* Graph files and JSON text in the documented graph format. */
QG_API qg_status qg_graph_load_file(const char* path, qg_graph** out);
QG_API qg_status qg_graph_parse_json(const char* text, qg_graph** out);
QG_API void qg_graph_free(qg_graph* g);

QG_API int qg_graph_vertex_count(const qg_graph* g);
QG_API int qg_graph_edge_count(const qg_graph* g);
QG_API int qg_graph_bond_count(const qg_graph* g);
QG_API int qg_graph_lead_count(const qg_graph* g);
QG_API double qg_graph_total_length(const qg_graph* g);

/* Runs a named computation ("spectrum", "scatter", ...) with options given as
   a JSON object, e.g. {"kmax": 20, "threads": 4}. NULL options means {}. */
QG_API qg_status qg_run(const qg_graph* g, const char* command, const char* options_json, qg_result** out);

/* Command names separated by '\n'. Owned by the library. */
QG_API const char* qg_command_names(void);

/* Complete CSV or JSON output and its format ("csv" or "json"). Valid until
   qg_result_free. */
QG_API const char* qg_result_text(const qg_result* r);
QG_API size_t qg_result_size(const qg_result* r);
QG_API const char* qg_result_format(const qg_result* r);
QG_API int qg_result_warning_count(const qg_result* r);
QG_API const char* qg_result_warning(const qg_result* r, int i);
QG_API void qg_result_free(qg_result* r);

/* Message and offending field of the last failure on the calling thread.
   The field is empty when the error is not tied to one. */
QG_API const char* qg_last_error(void);
QG_API const char* qg_last_error_field(void);

QG_API const char* qg_version(void);

#ifdef __cplusplus
}
#endif

#endif
