#pragma once

#include "qgraph/graph.hpp"

#include <string>
#include <vector>

namespace qgraph {

struct CommandOutput {
  std::string text;    // complete CSV or JSON document
  std::string format;  // "csv" or "json"
  std::vector<std::string> warnings;
};

// Runs one named computation on g. options_json is a JSON object whose keys
// are the option names of the command ("kmax", "k", "n", "seed", ...).
// Throws InputError for bad options and NumericalError when a result fails
// its residual check.
CommandOutput run_command(const MetricGraph& g, const std::string& command, const std::string& options_json);

const std::vector<std::string>& command_names();

// Reals in CSV output: 17 significant digits.
std::string format_real(double x);

}  // namespace qgraph
