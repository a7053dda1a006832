#include <doctest.h>

#include "graphs.hpp"
#include "qgraph/graph_io.hpp"

using namespace qgraph;
using namespace testgraphs;

TEST_SUITE("graph") {
  TEST_CASE("tadpole is valid with one cycle") {
    auto g = tadpole(1.0, 2.0);
    CHECK(validate_graph(g).empty());
    CHECK(betti_number(g) == 1);
    CHECK(g.total_length() == doctest::Approx(3.0));
    CHECK(g.degree(1) == 3);
    CHECK(g.degree(0) == 1);
  }

  TEST_CASE("zero length edge is reported") {
    MetricGraph g(nk_vertices(2), {bond(0, 0, 1, 0.0)});
    auto rep = validate_graph(g);
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].kind == "nonpositive length");
  }

  TEST_CASE("two disjoint triangles are disconnected") {
    std::vector<Edge> es;
    for (int t = 0; t < 2; ++t)
      for (int i = 0; i < 3; ++i)
        es.push_back(bond(static_cast<int>(es.size()), 3 * t + i, 3 * t + (i + 1) % 3, 1.0));
    MetricGraph g(nk_vertices(6), es);
    auto rep = validate_graph(g);
    REQUIRE(rep.size() == 1);
    CHECK(rep[0].kind == "disconnected");
  }

  TEST_CASE("lead with a terminus or finite length is rejected") {
    MetricGraph g(nk_vertices(1), {Edge{0, 0, std::nullopt, 2.0}});
    CHECK_FALSE(validate_graph(g).empty());
  }

  TEST_CASE("custom unitary must be unitary and sized by degree") {
    Eigen::MatrixXcd u(2, 2);
    u << 1, 1, 1, 1;
    auto g = interval(1.0, VertexCondition::custom(u), VertexCondition::nk());
    auto rep = validate_graph(g);
    CHECK(rep.size() == 1);
  }

  TEST_CASE("directed edge index of the tadpole") {
    auto g = tadpole(1.0, 1.0);
    DirectedEdgeIndex idx(g);
    CHECK(idx.size() == 4);
    CHECK(idx.label(0) == "e0+");
    CHECK(idx.label(1) == "e1+");
    CHECK(idx.label(2) == "e0-");
    CHECK(idx.label(3) == "e1-");
    for (int i = 0; i < idx.size(); ++i) CHECK(idx.reverse(idx.reverse(i)) == i);
    // e0+ runs to the degree-one vertex and is followed only by e0-.
    CHECK(idx.follows(0, 2));
    CHECK_FALSE(idx.follows(0, 1));
  }

  TEST_CASE("single bond has two channels and reversal swaps them") {
    DirectedEdgeIndex idx(interval(1.0, VertexCondition::nk(), VertexCondition::nk()));
    CHECK(idx.size() == 2);
    CHECK(idx.reverse(0) == 1);
    CHECK(idx.reverse(1) == 0);
  }

  TEST_CASE("open loop has three channels") {
    DirectedEdgeIndex idx(open_loop(1.0));
    CHECK(idx.size() == 3);
    CHECK(idx.lead_count() == 1);
    CHECK(idx.is_lead(2));
  }

  TEST_CASE("betti numbers") {
    CHECK(betti_number(equal_star(3, 1.0)) == 0);
    CHECK(betti_number(figure_eight(1.0, 2.0)) == 2);
    CHECK_THROWS_AS(betti_number(open_loop(1.0)), InputError);
    for (std::uint64_t s = 0; s < 20; ++s) {
      auto g = random_graph(s, 5);
      const int b = betti_number(g);
      CHECK(b >= 0);
      CHECK((b == 0) == (g.bond_count() == g.vertex_count() - 1));
    }
  }

  TEST_CASE("total length is invariant under reorientation") {
    auto g = random_graph(7, 5);
    CHECK(g.with_edge_flipped(0).total_length() == doctest::Approx(g.total_length()));
  }
}

TEST_SUITE("io") {
  TEST_CASE("round trip through json") {
    auto g = tadpole(1.0, 2.5, VertexCondition::delta(3.0));
    auto h = parse_graph_json(graph_to_json(g));
    CHECK(h.edge_count() == 2);
    CHECK(h.vertex(1).condition.kind == ConditionKind::Delta);
    CHECK(h.vertex(1).condition.alpha == 3.0);
    CHECK(h.edge(1).length == 2.5);
  }

  TEST_CASE("leads and unitary conditions parse") {
    auto g = parse_graph_json(R"({"vertices":[{"id":0,"condition":{"unitary":[[[0,0],[1,0]],[[1,0],[0,0]]]}}],
      "edges":[{"id":0,"from":0,"length":"inf"},{"id":1,"from":0,"length":"inf"}]})");
    CHECK(g.lead_count() == 2);
    CHECK(g.vertex(0).condition.kind == ConditionKind::CustomUnitary);
  }

  TEST_CASE("errors name the offending field") {
    try {
      parse_graph_json(R"({"vertices":[{"id":0},{"id":1}],"edges":[{"id":0,"from":0,"to":1,"length":-1}]})");
      FAIL("expected an error");
    } catch (const InputError& e) {
      CHECK(std::string(e.what()).find("edges[0].length") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_graph_json("{"), InputError);
    CHECK_THROWS_AS(parse_graph_json(R"({"vertices":[{"id":0,"condition":"robin"}],"edges":[]})"), InputError);
  }
}
