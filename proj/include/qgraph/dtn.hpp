#pragma once

#include "qgraph/spectrum.hpp"

#include <utility>
#include <vector>

namespace qgraph {

struct EdgeDtN {
  double A = 0.0;  // -k cot(k l)
  double B = 0.0;  // k / sin(k l)
};

struct DtnPoleError : NumericalError {
  DtnPoleError(const std::string& msg, int edge_id) : NumericalError(msg), edge(edge_id) {}
  int edge;
};

inline constexpr double kDtnPoleSine = 1e-12;

EdgeDtN edge_dtn(double length, double k, int edge_id = -1);

enum class LoopMode { Split, Direct };

// Loops replaced by two half-length bonds meeting at a new NK vertex; the
// new vertices are appended after the original ones.
MetricGraph split_loops(const MetricGraph& g);

struct DtnMatrix {
  Eigen::MatrixXd values;
  std::vector<int> vertices;                // vertex ids of the working graph, one per row
  std::vector<VertexCondition> conditions;  // per row
  std::vector<bool> dummy;                  // row added by loop splitting
  double k = 0.0;
};

DtnMatrix all_vertex_dtn(const MetricGraph& g, double k, LoopMode mode = LoopMode::Split);

// Schur complement onto the rows whose vertex ids are listed. Dirichlet
// interior rows are dropped, delta interior rows enter as Lambda_II - Theta_II.
DtnMatrix reduce_dtn(const DtnMatrix& lambda, const std::vector<int>& boundary);

// det(Lambda - Theta) over the non-Dirichlet vertices, multiplied by
// sin(k l_e)/k for every edge touching such a vertex. Entire in k.
double dtn_secular(const MetricGraph& g, double k, LoopMode mode = LoopMode::Split);

struct DtnSpectrum {
  Spectrum spectrum;
  std::vector<std::pair<double, double>> masked;  // excluded windows around edge poles
};

inline constexpr double kDtnMaskRadius = 1e-6;

DtnSpectrum find_spectrum_dtn(const MetricGraph& g, double k_max, const SpectrumOptions& opts = {},
                              LoopMode mode = LoopMode::Split);

bool in_masked_window(const DtnSpectrum& s, double k);

}  // namespace qgraph
