#pragma once

#include "qgraph/graph.hpp"

namespace qgraph {

Eigen::MatrixXcd vertex_scattering_matrix(const VertexCondition& cond, int degree, double k);
// d sigma / dk; zero for scale-invariant conditions.
Eigen::MatrixXcd vertex_scattering_derivative(const VertexCondition& cond, int degree, double k);

struct EdgeScatteringMatrix {
  Eigen::MatrixXcd S;
  bool k_dependent = false;
};

EdgeScatteringMatrix assemble_edge_scattering(const MetricGraph& g, double k);

// Magnetic phases are given per edge id; lead entries are ignored. An empty
// vector means no field.
using MagneticPhases = Eigen::VectorXd;

class QuantumMapEvaluator {
 public:
  explicit QuantumMapEvaluator(const MetricGraph& g);

  const MetricGraph& graph() const { return g_; }
  const DirectedEdgeIndex& index() const { return idx_; }
  int size() const { return idx_.size(); }
  bool k_dependent() const { return k_dependent_; }

  Eigen::MatrixXcd edge_scattering(double k) const;
  Eigen::MatrixXcd edge_scattering_derivative(double k) const;
  Eigen::VectorXcd transport(double k, const MagneticPhases& alpha = {}) const;
  Eigen::MatrixXcd operator()(double k, const MagneticPhases& alpha = {}) const;
  Eigen::MatrixXcd derivative(double k, const MagneticPhases& alpha = {}) const;
  // Diagonal of bond lengths on channels (zero on leads).
  const Eigen::VectorXd& lengths() const { return lengths_; }

 private:
  MetricGraph g_;
  DirectedEdgeIndex idx_;
  bool k_dependent_;
  Eigen::MatrixXcd S0_;
  Eigen::VectorXd lengths_;
};

Eigen::MatrixXcd quantum_map(const MetricGraph& g, double k, const MagneticPhases& alpha = {});

struct OpenBlocks {
  Eigen::MatrixXcd LL, LB, BL, BB;
};

OpenBlocks split_open_blocks(const Eigen::MatrixXcd& U, int bond_channels);

struct OpenScattering {
  Eigen::MatrixXcd S;  // leads x leads
  Eigen::MatrixXcd R;  // 2B x leads
  bool singular = false;
  double condition = 1.0;
};

inline constexpr double kSingularCondition = 1e12;
inline constexpr double kSingularShift = 1e-9;

OpenScattering open_scattering_matrix(const MetricGraph& g, double k);

struct WignerSmith {
  Eigen::MatrixXcd Q;
  bool singular = false;
};

WignerSmith wigner_smith(const MetricGraph& g, double k, double h = 1e-6);

double unitarity_defect(const Eigen::MatrixXcd& U);

}  // namespace qgraph
