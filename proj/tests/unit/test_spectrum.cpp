#include <doctest.h>

#include "graphs.hpp"
#include "oracles.hpp"
#include "qgraph/spectrum.hpp"

#include <random>

using namespace qgraph;
using namespace testgraphs;
using std::numbers::pi;

TEST_SUITE("spectrum") {
  TEST_CASE("tadpole secular function closed form") {
    const double l1 = 1.0, l2 = 1.7;
    auto g = tadpole(l1, l2);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> kd(0.0, 50.0);
    for (int t = 0; t < 200; ++t) {
      const double k = kd(rng);
      const cplx i(0, 1);
      const cplx expect = (1.0 / 3) * (1.0 - std::exp(i * k * l2)) *
                          (3.0 - std::exp(i * k * l2) + std::exp(2.0 * i * k * l1) - 3.0 * std::exp(i * k * (2 * l1 + l2)));
      CHECK(std::abs(secular_function(g, k) - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
    }
  }

  TEST_CASE("equal star secular function closed form") {
    for (int n : {2, 3, 5}) {
      const double l = 0.8;
      auto g = equal_star(n, l);
      for (double k : {0.3, 1.1, 4.7, 13.2}) {
        const cplx expect = cplx(0, -1) * std::pow(2.0, n) * std::exp(cplx(0, k * n * l)) *
                            std::pow(std::cos(k * l), n - 1) * std::sin(k * l);
        CHECK(std::abs(secular_function(g, k) - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
      }
    }
  }

  TEST_CASE("dirichlet bond secular function") {
    auto g = interval(1.3, VertexCondition::dirichlet(), VertexCondition::dirichlet());
    for (double k : {0.2, 2.0, 9.9})
      CHECK(std::abs(secular_function(g, k) - (1.0 - std::exp(cplx(0, 2 * k * 1.3)))) < 1e-12);
  }

  TEST_CASE("equal star spectrum with multiplicities") {
    auto sp = find_spectrum(equal_star(3, 1.0), 4 * pi + 0.1);
    const std::vector<std::pair<double, int>> expect{{pi / 2, 2},     {pi, 1},     {3 * pi / 2, 2}, {2 * pi, 1},
                                                     {5 * pi / 2, 2}, {3 * pi, 1}, {7 * pi / 2, 2}, {4 * pi, 1}};
    REQUIRE(sp.records.size() == expect.size());
    for (std::size_t i = 0; i < expect.size(); ++i) {
      CHECK(std::abs(sp.records[i].k - expect[i].first) < 1e-9);
      CHECK(sp.records[i].multiplicity == expect[i].second);
      CHECK(sp.records[i].sv_multiplicity == expect[i].second);
    }
    CHECK(sp.warnings.empty());
    CHECK(sp.zero_modes == 1);
  }

  TEST_CASE("neumann bond spectrum") {
    auto sp = find_spectrum(interval(1.0, VertexCondition::nk(), VertexCondition::nk()), 30.0);
    REQUIRE(sp.records.size() == 9);
    for (int n = 1; n <= 9; ++n) CHECK(std::abs(sp.records[n - 1].k - n * pi) < 1e-12);
  }

  TEST_CASE("tadpole spectrum is loop states plus symmetric roots") {
    const double l1 = 1.0, l2 = std::sqrt(2.0);
    auto sp = find_spectrum(tadpole(l1, l2), 40.0);
    std::vector<double> expect = oracles::tadpole_symmetric_roots(l1, l2, 40.0);
    for (int n = 1; 2 * pi * n / l2 <= 40.0; ++n) expect.push_back(2 * pi * n / l2);
    std::sort(expect.begin(), expect.end());
    auto got = sp.expanded_k();
    REQUIRE(got.size() == expect.size());
    for (std::size_t i = 0; i < got.size(); ++i) CHECK(std::abs(got[i] - expect[i]) < 1e-10);
  }

  TEST_CASE("equal-length tadpole has double roots at the loop states") {
    auto sp = find_spectrum(tadpole(1.0, 1.0), 13.0);
    int doubles = 0;
    for (const auto& r : sp.records)
      if (std::abs(r.k - 2 * pi * std::round(r.k / (2 * pi))) < 1e-9) {
        CHECK(r.multiplicity == 2);
        ++doubles;
      }
    CHECK(doubles == 2);
  }

  TEST_CASE("residuals, orientation invariance and weyl counting") {
    for (std::uint64_t s = 0; s < 6; ++s) {
      auto g = random_graph(100 + s, 5);
      const double L = g.total_length();
      const double K = 200 * pi / L;
      auto sp = find_spectrum(g, K);
      const int N = QuantumMapEvaluator(g).size();
      for (const auto& r : sp.records) CHECK(r.residual <= 1e-9 * N);
      const int beta = betti_number(g);
      CHECK(std::abs(sp.count() + sp.zero_modes - L * K / pi) <= 2 + beta);
      auto flipped = find_spectrum(g.with_edge_flipped(g.edge_count() - 1), K);
      auto a = sp.expanded_k(), b = flipped.expanded_k();
      REQUIRE(a.size() == b.size());
      for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
    }
  }

  TEST_CASE("subdividing a bond with a degree-two vertex changes nothing") {
    auto g = tadpole(1.0, 1.7);
    auto vs = nk_vertices(3);
    MetricGraph h(vs, {bond(0, 1, 2, 0.4), bond(1, 1, 1, 1.7), bond(2, 2, 0, 0.6)});
    auto a = find_spectrum(g, 30.0).expanded_k();
    auto b = find_spectrum(h, 30.0).expanded_k();
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::abs(a[i] - b[i]) < 1e-9);
  }

  TEST_CASE("magnetic phases on a tree do not move the spectrum") {
    auto g = star({1.0, 1.3, 0.7});
    QuantumMapEvaluator ev(g);
    Eigen::VectorXd alpha(3);
    alpha << 0.7, -2.1, 1.4;
    WindingCounter plain(ev), magnetic(ev, alpha);
    auto sp = find_spectrum(g, 20.0);
    for (const auto& r : sp.records) {
      CHECK(std::abs(secular_function(g, r.k, alpha)) < 1e-9);
      const double k = refine_simple_root(ev, r.k + 1e-4, r.k - 1e-2, r.k + 1e-2, alpha);
      CHECK(std::abs(k - r.k) < 1e-9);
    }
    for (double k : {1.0, 5.5, 17.0}) CHECK(plain.count(k) == magnetic.count(k));
  }

  TEST_CASE("delta graph spectrum with the zero-order and warnings") {
    auto g = tadpole(1.0, 1.3, VertexCondition::delta(-2.0));
    auto sp = find_spectrum(g, 10.0);
    CHECK_FALSE(sp.audit_exact);
    CHECK_FALSE(sp.warnings.empty());
    CHECK(sp.zero_modes == 0);
    CHECK(secular_zero_order(tadpole(1.0, 1.0)) == 2);
    CHECK(secular_zero_order(interval(1.0, VertexCondition::nk(), VertexCondition::nk())) == 1);
    CHECK(zero_mode_multiplicity(interval(1.0, VertexCondition::dirichlet(), VertexCondition::nk())) == 0);
  }

  TEST_CASE("neumann bond eigenfunction") {
    auto g = interval(1.0, VertexCondition::nk(), VertexCondition::nk());
    auto efs = eigenfunctions_at(g, pi);
    REQUIRE(efs.size() == 1);
    CHECK(efs[0].real_gauge);
    CHECK(inner_product(g, efs[0], efs[0]).real() == doctest::Approx(1.0));
    const double sign = efs[0].value(0, 0.0).real() > 0 ? 1.0 : -1.0;
    for (double x = 0; x <= 1.0; x += 0.05)
      CHECK(std::abs(sign * efs[0].value(0, x) - std::sqrt(2.0) * std::cos(pi * x)) < 1e-10);
  }

  TEST_CASE("tadpole loop states are perfect scars") {
    const double l1 = 1.0, l2 = std::sqrt(2.0);
    auto g = tadpole(l1, l2);
    for (int n = 1; n <= 4; ++n) {
      const double k = 2 * pi * n / l2;
      auto efs = eigenfunctions_at(g, k);
      REQUIRE(efs.size() == 1);
      CHECK(efs[0].edge_bound(0) <= 1e-9 * efs[0].sup_bound());
      const double s = efs[0].value(1, l2 / (4 * n)).real() > 0 ? 1.0 : -1.0;
      for (double x = 0; x <= l2; x += l2 / 97)
        CHECK(std::abs(s * efs[0].value(1, x) - std::sqrt(2 / l2) * std::sin(2 * pi * n * x / l2)) < 1e-8);
      auto scars = detect_perfect_scars(g, efs);
      REQUIRE(scars.size() == 1);
      CHECK(scars[0].support == std::vector<int>{1});
    }
  }

  TEST_CASE("no scars on a generic star") {
    auto g = star({1.0, std::sqrt(2.0), std::sqrt(5.0) - 1});
    auto sp = find_spectrum(g, 15.0);
    for (const auto& r : sp.records) CHECK(detect_perfect_scars(g, eigenfunctions_at(g, r.k)).empty());
  }

  TEST_CASE("degenerate star eigenspace") {
    auto g = equal_star(3, 1.0);
    auto efs = eigenfunctions_at(g, 3 * pi / 2);
    REQUIRE(efs.size() == 2);
    CHECK(std::abs(inner_product(g, efs[0], efs[1])) < 1e-10);
    // Some combination is supported on bonds 0 and 1 only with opposite signs.
    Eigen::Vector2cd c(efs[1].edge_bound(2) > 1e-12 ? efs[1].B[2] : 0.0, -efs[0].B[2]);
    if (std::abs(c[0]) < 1e-12) c << 0.0, 1.0;
    Eigenfunction f = efs[0];
    f.A = c[0] * efs[0].A + c[1] * efs[1].A;
    f.B = c[0] * efs[0].B + c[1] * efs[1].B;
    CHECK(f.edge_bound(2) < 1e-10 * f.sup_bound());
    CHECK(std::abs(f.value(0, 0.3) + f.value(1, 0.3)) < 1e-10 * f.sup_bound());
  }

  TEST_CASE("eigenfunctions satisfy the vertex conditions") {
    std::vector<MetricGraph> gs{tadpole(1.0, 1.3, VertexCondition::delta(2.5)), random_graph(21, 5),
                                star_dirichlet_tips({1.0, 1.2, 0.8, 1.6}), figure_eight(1.0, 1.9)};
    for (const auto& g : gs) {
      auto sp = find_spectrum(g, 25.0);
      for (const auto& r : sp.records) {
        for (const auto& f : eigenfunctions_at(g, r.k)) {
          CHECK(inner_product(g, f, f).real() == doctest::Approx(1.0).epsilon(1e-10));
          for (int e : g.bonds())
            for (double t = 0; t <= 1.0; t += 0.1) CHECK(std::abs(f.value(e, t * g.edge(e).length).imag()) <= 1e-8);
          for (int v = 0; v < g.vertex_count(); ++v) {
            const auto& c = g.vertex(v).condition;
            cplx flux = 0.0;
            std::vector<cplx> vals;
            for (const auto& ep : g.endpoints(v)) {
              const double len = g.edge(ep.edge).length;
              vals.push_back(f.value(ep.edge, ep.at_origin ? 0.0 : len));
              flux += ep.at_origin ? f.derivative(ep.edge, 0.0) : -f.derivative(ep.edge, len);
            }
            if (c.kind == ConditionKind::Dirichlet) {
              for (auto x : vals) CHECK(std::abs(x) < 1e-8);
              continue;
            }
            for (auto x : vals) CHECK(std::abs(x - vals[0]) < 1e-8);
            CHECK(std::abs(flux - c.coupling() * vals[0]) < 1e-7 * (1 + r.k));
          }
        }
      }
    }
  }

  TEST_CASE("bound state in the continuum of the open loop") {
    const double l = 1.4;
    auto g = open_loop(l);
    auto efs = bound_states_at(g, 2 * pi / l);
    REQUIRE(efs.size() == 1);
    auto scars = detect_perfect_scars(g, efs);
    REQUIRE(scars.size() == 1);
    CHECK(scars[0].support == std::vector<int>{1});
    CHECK(scars[0].vanishing == std::vector<int>{0});
    CHECK(bound_states_at(g, 2.0).empty());
  }
}
