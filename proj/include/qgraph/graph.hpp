#pragma once

#include <Eigen/Dense>

#include <complex>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace qgraph {

using cplx = std::complex<double>;

// Input problems (malformed graphs, bad options) versus numerical failures.
struct InputError : std::runtime_error {
  explicit InputError(const std::string& msg, std::string field_name = {})
      : std::runtime_error(msg), field(std::move(field_name)) {}
  std::string field;
};

struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ConditionKind { NeumannKirchhoff, Dirichlet, Delta, CustomUnitary };

struct VertexCondition {
  ConditionKind kind = ConditionKind::NeumannKirchhoff;
  double alpha = 0.0;
  Eigen::MatrixXcd unitary;

  static VertexCondition nk() { return {}; }
  static VertexCondition dirichlet() { return {ConditionKind::Dirichlet, 0.0, {}}; }
  static VertexCondition delta(double a) { return {ConditionKind::Delta, a, {}}; }
  static VertexCondition custom(Eigen::MatrixXcd u) { return {ConditionKind::CustomUnitary, 0.0, std::move(u)}; }

  // NK and Delta(0) are the same condition.
  bool is_delta_type() const { return kind == ConditionKind::NeumannKirchhoff || kind == ConditionKind::Delta; }
  double coupling() const { return kind == ConditionKind::Delta ? alpha : 0.0; }
  bool k_dependent() const { return kind == ConditionKind::Delta && alpha != 0.0; }
};

struct Vertex {
  int id = 0;
  VertexCondition condition;
};

inline constexpr double kInfiniteLength = std::numeric_limits<double>::infinity();

struct Edge {
  int id = 0;
  int origin = 0;
  std::optional<int> terminus;
  double length = 1.0;

  bool is_lead() const { return !terminus.has_value(); }
  bool is_loop() const { return terminus && *terminus == origin; }
};

// One endpoint slot of a vertex: which edge, and whether it is the edge's origin end.
struct Endpoint {
  int edge = 0;
  bool at_origin = true;
  bool operator==(const Endpoint&) const = default;
};

struct Violation {
  std::string kind;
  std::string message;
};

using ValidationReport = std::vector<Violation>;

class MetricGraph {
 public:
  MetricGraph() = default;
  MetricGraph(std::vector<Vertex> vertices, std::vector<Edge> edges);

  const std::vector<Vertex>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Vertex& vertex(int id) const { return vertices_.at(id); }
  const Edge& edge(int id) const { return edges_.at(id); }
  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }

  int bond_count() const;
  int lead_count() const;
  bool is_closed() const { return lead_count() == 0; }
  double total_length() const;
  double min_bond_length() const;
  double max_bond_length() const;
  bool has_k_dependent_conditions() const;
  bool has_custom_conditions() const;
  bool has_negative_coupling() const;

  // Endpoints at v, ordered by edge id with the origin end first for loops.
  // Custom unitary vertex matrices are indexed in this order.
  const std::vector<Endpoint>& endpoints(int v) const { return endpoints_.at(v); }
  int degree(int v) const { return static_cast<int>(endpoints_.at(v).size()); }
  int slot_of(int v, Endpoint ep) const;

  // Bond ids in increasing edge-id order, and lead ids likewise.
  const std::vector<int>& bonds() const { return bonds_; }
  const std::vector<int>& leads() const { return leads_; }

  MetricGraph with_condition(int v, VertexCondition c) const;
  MetricGraph with_edge_flipped(int e) const;

 private:
  void build();
  std::vector<Vertex> vertices_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Endpoint>> endpoints_;
  std::vector<int> bonds_;
  std::vector<int> leads_;
};

ValidationReport validate_graph(const MetricGraph& g);
// Throws InputError listing the violations when the report is non-empty.
void require_valid(const MetricGraph& g);

int betti_number(const MetricGraph& g);
// Connected components as sorted vertex-id lists.
std::vector<std::vector<int>> connected_components(const MetricGraph& g);
// Subgraph induced by a vertex set, renumbered densely; maps new ids back to old.
MetricGraph induced_subgraph(const MetricGraph& g, const std::vector<int>& vertex_ids,
                             std::vector<int>* edge_map = nullptr);

// Directed channels [e1+..eB+, e1-..eB-, lead1..leadL]; bonds in edge-id order.
class DirectedEdgeIndex {
 public:
  explicit DirectedEdgeIndex(const MetricGraph& g);

  int size() const { return n_; }
  int bond_count() const { return b_; }
  int lead_count() const { return n_ - 2 * b_; }

  int plus(int bond_pos) const { return bond_pos; }
  int minus(int bond_pos) const { return b_ + bond_pos; }
  int lead_channel(int lead_pos) const { return 2 * b_ + lead_pos; }
  bool is_lead(int i) const { return i >= 2 * b_; }
  bool is_plus(int i) const { return i < b_; }
  int reverse(int i) const;

  int edge_of(int i) const { return edge_of_[i]; }
  int bond_position(int i) const { return i < 2 * b_ ? i % b_ : -1; }
  double length(int i) const { return length_[i]; }
  // Vertex this channel leaves from, and the vertex it arrives at. A lead
  // channel both leaves from and arrives at its attachment vertex.
  int origin(int i) const { return origin_[i]; }
  int terminus(int i) const { return terminus_[i]; }
  // Slot at the departure / arrival vertex.
  int out_slot(int i) const { return out_slot_[i]; }
  int in_slot(int i) const { return in_slot_[i]; }
  // b follows a when a arrives where b leaves.
  bool follows(int a, int b) const { return terminus_[a] == origin_[b]; }

  std::string label(int i) const;

 private:
  int n_ = 0, b_ = 0;
  std::vector<int> edge_of_, origin_, terminus_, out_slot_, in_slot_;
  std::vector<double> length_;
};

}  // namespace qgraph
