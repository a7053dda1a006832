#include <doctest.h>

#include "graphs.hpp"
#include "qgraph/scattering.hpp"

#include <random>

using namespace qgraph;
using namespace testgraphs;

namespace {

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

cplx open_loop_closed_form(double k, double l) {
  const cplx z = std::polar(1.0, k * l);
  return z * (3.0 - 1.0 / z) / (3.0 - z);
}

}  // namespace

TEST_SUITE("scattering") {
  TEST_CASE("vertex matrices") {
    auto nk3 = vertex_scattering_matrix(VertexCondition::nk(), 3, 1.0);
    CHECK(nk3(0, 0).real() == doctest::Approx(-1.0 / 3));
    CHECK(nk3(0, 1).real() == doctest::Approx(2.0 / 3));
    CHECK(vertex_scattering_matrix(VertexCondition::nk(), 1, 1.0)(0, 0).real() == doctest::Approx(1.0));
    CHECK(vertex_scattering_matrix(VertexCondition::dirichlet(), 1, 1.0)(0, 0).real() == doctest::Approx(-1.0));
    auto nk2 = vertex_scattering_matrix(VertexCondition::nk(), 2, 1.0);
    CHECK(std::abs(nk2(0, 0)) < 1e-15);
    CHECK(nk2(0, 1).real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(vertex_scattering_matrix(VertexCondition::delta(1.0), 3, 0.0), InputError);
  }

  TEST_CASE("delta vertex matrix is unitary and tends to the limits") {
    for (double a : {-2.0, 0.5, 3.0, 100.0}) {
      for (double k : {0.1, 1.0, 7.5}) {
        auto s = vertex_scattering_matrix(VertexCondition::delta(a), 3, k);
        CHECK(unitarity_defect(s) < 1e-14);
        CHECK(max_abs(s - s.transpose()) < 1e-15);
      }
    }
    auto big_k = vertex_scattering_matrix(VertexCondition::delta(1.0), 3, 1e12);
    CHECK(max_abs(big_k - vertex_scattering_matrix(VertexCondition::nk(), 3, 1.0)) < 1e-10);
    auto big_a = vertex_scattering_matrix(VertexCondition::delta(1e12), 3, 1.0);
    CHECK(max_abs(big_a + Eigen::MatrixXcd::Identity(3, 3)) < 1e-10);
  }

  TEST_CASE("tadpole edge scattering matrix") {
    Eigen::MatrixXd expect(4, 4);
    expect << 0, 2.0 / 3, -1.0 / 3, 2.0 / 3, 0, 2.0 / 3, 2.0 / 3, -1.0 / 3, 1, 0, 0, 0, 0, -1.0 / 3, 2.0 / 3, 2.0 / 3;
    auto S = assemble_edge_scattering(tadpole(1.0, 2.0), 1.0);
    CHECK_FALSE(S.k_dependent);
    CHECK(max_abs(S.S - expect.cast<cplx>()) < 1e-15);
  }

  TEST_CASE("star edge scattering matrix has the block form") {
    auto S = assemble_edge_scattering(equal_star(3, 1.0), 1.0).S;
    Eigen::MatrixXcd sigma = vertex_scattering_matrix(VertexCondition::nk(), 3, 1.0);
    CHECK(max_abs(S.topLeftCorner(3, 3)) == 0.0);
    CHECK(max_abs(S.topRightCorner(3, 3) - sigma) < 1e-15);
    CHECK(max_abs(S.bottomLeftCorner(3, 3) - Eigen::MatrixXcd::Identity(3, 3)) < 1e-15);
    CHECK(max_abs(S.bottomRightCorner(3, 3)) == 0.0);
  }

  TEST_CASE("dirichlet bond") {
    auto S = assemble_edge_scattering(interval(1.0, VertexCondition::dirichlet(), VertexCondition::dirichlet()), 1.0).S;
    Eigen::MatrixXcd expect(2, 2);
    expect << 0, -1, -1, 0;
    CHECK(max_abs(S - expect) == 0.0);
  }

  TEST_CASE("quantum map") {
    auto g = tadpole(1.0, 1.0);
    const double k = 2 * std::numbers::pi;
    CHECK(max_abs(quantum_map(g, k) - assemble_edge_scattering(g, k).S) < 1e-14);
    auto U = quantum_map(g, 1.0);
    Eigen::MatrixXcd expect = std::polar(1.0, 1.0) * assemble_edge_scattering(g, 1.0).S;
    CHECK(max_abs(U - expect) < 1e-15);
    CHECK(unitarity_defect(U) < 1e-12);
    Eigen::VectorXd a(2);
    a << 0.3, -1.1;
    Eigen::VectorXd b = a + Eigen::VectorXd::Constant(2, 2 * std::numbers::pi);
    CHECK(max_abs(quantum_map(g, 1.3, a) - quantum_map(g, 1.3, b)) < 1e-13);
  }

  TEST_CASE("unitarity and sparsity on assorted graphs") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> kd(1e-3, 50.0);
    std::vector<MetricGraph> gs{tadpole(1.0, 1.7), equal_star(4, 1.0), figure_eight(1.0, 0.3),
                                tadpole(1.0, 1.3, VertexCondition::delta(2.0)), open_loop(1.2),
                                star_dirichlet_tips({1, 1.3, 0.7, 2.1})};
    for (std::uint64_t s = 0; s < 6; ++s) gs.push_back(random_graph(s, 5));
    for (const auto& g : gs) {
      QuantumMapEvaluator ev(g);
      const auto& idx = ev.index();
      for (int t = 0; t < 100; ++t) {
        const double k = kd(rng);
        auto U = ev(k);
        CHECK(unitarity_defect(U) <= 1e-12);
        auto S = ev.edge_scattering(k);
        for (int a = 0; a < idx.size(); ++a)
          for (int b = 0; b < idx.size(); ++b)
            if (!idx.follows(b, a)) CHECK(S(a, b) == cplx(0.0));
      }
    }
  }

  TEST_CASE("derivative of the quantum map matches finite differences") {
    auto g = tadpole(1.0, 1.3, VertexCondition::delta(2.0));
    QuantumMapEvaluator ev(g);
    const double k = 2.7, h = 1e-6;
    Eigen::MatrixXcd fd = (ev(k + h) - ev(k - h)) / (2 * h);
    CHECK(max_abs(fd - ev.derivative(k)) < 1e-8);
  }

  TEST_CASE("open loop matches the closed form") {
    const double l = 1.3;
    auto g = open_loop(l);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> kd(0.0, 50.0);
    for (int t = 0; t < 1000; ++t) {
      const double k = kd(rng);
      auto r = open_scattering_matrix(g, k);
      CHECK(std::abs(r.S(0, 0) - open_loop_closed_form(k, l)) <= 1e-12);
      if (!r.singular) CHECK(unitarity_defect(r.S) <= 1e-10);
    }
    const double k0 = 2 * std::numbers::pi / l;
    auto r = open_scattering_matrix(g, k0);
    CHECK(r.singular);
    CHECK(std::abs(r.S(0, 0) - 1.0) <= 1e-6);
  }

  TEST_CASE("open star without bonds returns the vertex matrix") {
    MetricGraph g(nk_vertices(1), {lead(0, 0), lead(1, 0), lead(2, 0)});
    auto r = open_scattering_matrix(g, 2.0);
    CHECK(max_abs(r.S - vertex_scattering_matrix(VertexCondition::nk(), 3, 2.0)) < 1e-15);
    CHECK(r.R.rows() == 0);
  }

  TEST_CASE("internal response reproduces the bond amplitudes") {
    auto g = open_loop(0.9);
    QuantumMapEvaluator ev(g);
    const double k = 3.1;
    auto r = open_scattering_matrix(g, k);
    auto b = split_open_blocks(ev(k), 2);
    CHECK(max_abs(r.R - b.BB * r.R - b.BL) < 1e-13);
  }

  TEST_CASE("wigner smith delay of the open loop") {
    const double l = 1.1;
    auto g = open_loop(l);
    for (double k : {0.4, 1.7, std::numbers::pi / l, 5.2}) {
      const cplx z = std::polar(1.0, k * l);
      const cplx expect = 8.0 * l * z / ((3.0 - z) * (3.0 * z - 1.0));
      auto ws = wigner_smith(g, k);
      CHECK(std::abs(ws.Q(0, 0) - expect) < 1e-8);
      CHECK(std::abs(ws.Q(0, 0).imag()) < 1e-8);
    }
    auto half = wigner_smith(g, std::numbers::pi / l);
    CHECK(half.Q(0, 0).real() == doctest::Approx(l / 2).epsilon(1e-8));
  }

  TEST_CASE("wigner smith vanishes for a dirichlet wall") {
    MetricGraph g({{0, VertexCondition::dirichlet()}}, {lead(0, 0)});
    CHECK(std::abs(wigner_smith(g, 1.0).Q(0, 0)) < 1e-12);
  }

  TEST_CASE("wigner smith is hermitian on a two-lead graph") {
    MetricGraph g(nk_vertices(2), {lead(0, 0), bond(1, 0, 1, 1.0), bond(2, 0, 1, 1.7), lead(3, 1)});
    auto Q = wigner_smith(g, 2.3).Q;
    CHECK(max_abs(Q - Q.adjoint()) < 1e-8);
  }
}
