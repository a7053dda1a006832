#include <doctest.h>

#include "graphs.hpp"
#include "qgraph/statistics.hpp"
#include "qgraph/trace_formula.hpp"

#include <limits>

using namespace qgraph;
using namespace testgraphs;
using std::numbers::pi;

namespace {

// Sum over visit vectors of |sum of rooted-walk amplitudes|^2, divided by 2B.
double exact_by_walk_dp(const MetricGraph& g, int n) {
  double s = 0.0;
  for (const auto& t : closed_walk_terms(g, n, std::numeric_limits<double>::infinity())) s += std::norm(t.coefficient);
  return s / (2.0 * g.bond_count());
}

// Diagonal sum (n / B) sum over rooted walks w of (1 - delta/2) |A_w|^2 / r_w,
// with every closed walk enumerated by brute force.
double diagonal_by_walks(const MetricGraph& g, int n) {
  DirectedEdgeIndex idx(g);
  const Eigen::MatrixXcd S = assemble_edge_scattering(g, 1.0).S;
  const int m = 2 * idx.bond_count();
  long total = 1;
  for (int i = 0; i < n; ++i) total *= m;
  std::vector<int> w(n);
  double sum = 0.0;
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int i = 0; i < n; ++i) {
      w[i] = static_cast<int>(c % m);
      c /= m;
    }
    double weight = 1.0;
    for (int i = 0; i < n && weight != 0.0; ++i) {
      const int a = w[i], b = w[(i + 1) % n];
      weight *= idx.follows(a, b) ? std::norm(S(b, a)) : 0.0;
    }
    if (weight == 0.0) continue;
    int r = 1;
    for (int p = 1; p <= n; ++p) {
      if (n % p) continue;
      bool rep = true;
      for (int i = p; i < n && rep; ++i) rep = w[i] == w[i - p];
      if (rep) {
        r = n / p;
        break;
      }
    }
    std::vector<int> rev(n);
    for (int i = 0; i < n; ++i) rev[i] = idx.reverse(w[n - 1 - i]);
    const bool self = canonical_rotation(rev) == canonical_rotation(w);
    sum += (self ? 0.5 : 1.0) * weight / r;
  }
  return static_cast<double>(n) / g.bond_count() * sum;
}

std::vector<MetricGraph> three_bond_graphs() {
  std::vector<MetricGraph> gs{tadpole(1.0, std::sqrt(2.0)), star({1.0, 1.3, 0.7})};
  for (std::uint64_t s = 300; gs.size() < 6; ++s) {
    auto g = random_graph(s, 3);
    if (g.bond_count() >= 2 && g.bond_count() <= 3) gs.push_back(g);
  }
  return gs;
}

}  // namespace

TEST_SUITE("statistics") {
  TEST_CASE("tadpole K_1 is 4/9") {
    const auto g = tadpole(1.0, std::sqrt(2.0));
    CHECK(form_factor_exact_small(g, 1) == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
    CHECK(exact_by_walk_dp(g, 1) == doctest::Approx(4.0 / 9.0).epsilon(1e-13));
    const auto mc = form_factor_mc(g, 1, 20000, 7);
    CHECK(std::abs(mc.value - 4.0 / 9.0) <= 3.0 * mc.stderr_ + 1e-12);
  }

  TEST_CASE("exact form factor matches the closed-walk expansion") {
    for (const auto& g : three_bond_graphs())
      for (int n = 0; n <= 6; ++n) {
        const double oracle = n == 0 ? 2.0 * g.bond_count() : exact_by_walk_dp(g, n);
        CHECK(form_factor_exact_small(g, n) == doctest::Approx(oracle).epsilon(1e-11));
      }
  }

  TEST_CASE("Monte Carlo agrees with the exact value") {
    int index = 0;
    for (const auto& g : three_bond_graphs()) {
      for (int n = 1; n <= 6; ++n) {
        const auto mc = form_factor_mc(g, n, 20000, 1000 + index++, 2);
        const double exact = form_factor_exact_small(g, n);
        CHECK(mc.tau == doctest::Approx(n / (2.0 * g.bond_count())));
        CHECK(std::abs(mc.value - exact) <= 3.0 * mc.stderr_ + 1e-12);
      }
    }
    const auto g = star({1.0, 1.3, 0.7});
    const auto k0 = form_factor_mc(g, 0, 10, 1);
    CHECK(k0.value == doctest::Approx(6.0));
    CHECK(k0.stderr_ == 0.0);
  }

  TEST_CASE("Monte Carlo is deterministic across thread counts") {
    const auto g = complete_graph(4);
    const auto a = form_factor_mc(g, 5, 3000, 42, 1);
    const auto b = form_factor_mc(g, 5, 3000, 42, 4);
    const auto c = form_factor_mc(g, 5, 3000, 43, 4);
    CHECK(a.value == b.value);
    CHECK(a.stderr_ == b.stderr_);
    CHECK(a.value != c.value);
  }

  TEST_CASE("diagonal approximation") {
    SUBCASE("Dirichlet bond") {
      const auto g = interval(1.0, VertexCondition::dirichlet(), VertexCondition::dirichlet());
      const auto d = form_factor_diagonal(g, 2);
      CHECK(d.leading == doctest::Approx(4.0));
      CHECK(d.self_retracing == doctest::Approx(-2.0));
      CHECK(d.repetitions == doctest::Approx(0.0));
      CHECK(d.value == doctest::Approx(2.0));
      CHECK(form_factor_exact_small(g, 2) == doctest::Approx(2.0));
    }
    SUBCASE("brute-force walk sum") {
      for (const auto& g : three_bond_graphs())
        for (int n = 1; n <= 5; ++n) {
          const auto d = form_factor_diagonal(g, n);
          CHECK(d.corrections_included);
          CHECK(d.value == doctest::Approx(diagonal_by_walks(g, n)).epsilon(1e-12));
        }
    }
    SUBCASE("leading term only beyond the orbit limit") {
      const auto g = complete_graph(4);
      const auto d = form_factor_diagonal(g, 20);
      CHECK_FALSE(d.corrections_included);
      CHECK(d.value == d.leading);
      // Bistochastic M: tr M^n tends to 1 (plus -1 for bipartite graphs).
      CHECK(d.leading == doctest::Approx(2.0 * 20.0 / 12.0).epsilon(1e-3));
    }
  }

  TEST_CASE("Tanner gap report") {
    const auto k5 = tanner_gap_report(complete_graph(5));
    CHECK(k5.verdict == TannerVerdict::UniversalExpected);
    CHECK_FALSE(k5.has_minus_one);
    CHECK(k5.convention.find("c = 1") != std::string::npos);

    // NK star: the two-step map has eigenvalues 1 and 1 - 4/N.
    for (int N : {10, 30, 60}) {
      const auto r = tanner_gap_report(equal_star(N, 1.0));
      CHECK(r.gap == doctest::Approx(1.0 - std::sqrt(1.0 - 4.0 / N)).epsilon(1e-9));
      CHECK(r.gap_times_b == doctest::Approx(N * (1.0 - std::sqrt(1.0 - 4.0 / N))).epsilon(1e-9));
      CHECK(r.has_minus_one);
      // gap * B -> 2, so with c = 1 the star sits between the two thresholds.
      CHECK(r.verdict == TannerVerdict::Intermediate);
    }
    CHECK(tanner_gap_report(equal_star(30, 1.0), 3.0).verdict == TannerVerdict::NonUniversalExpected);
    CHECK_THROWS_AS(tanner_gap_report(tadpole(1.0, 1.0, VertexCondition::delta(1.0))), InputError);
  }

  TEST_CASE("spacings of a Neumann bond are all one") {
    const auto g = interval(1.0, VertexCondition::nk(), VertexCondition::nk());
    const auto sp = find_spectrum(g, 150.5 * pi);
    const auto s = spacing_distribution(sp, g.total_length(), 20, 2.0);
    CHECK(s.spacings.size() == 149);
    CHECK(s.min == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.max == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(s.histogram[9] + s.histogram[10] == 149);
    CHECK_THROWS_AS(spacing_distribution(find_spectrum(g, 50.5 * pi), 1.0), InputError);
  }

  TEST_CASE("unfolded mean spacing and Weyl ratio") {
    const auto g = random_graph(77, 6, 0.5, 2.0, false);
    const auto sp = find_first_states(g, 500);
    const auto s = spacing_distribution(sp, g.total_length());
    CHECK(std::abs(s.mean - 1.0) <= 0.02);
    CHECK(std::abs(weyl_ratio(sp, g.total_length(), 500) - 1.0) <= 0.02);
    CHECK_THROWS_AS(weyl_ratio(sp, g.total_length(), 100000), InputError);
  }

  TEST_CASE("rejections") {
    CHECK_THROWS_AS(form_factor_mc(open_loop(1.0), 1, 100, 1), InputError);
    CHECK_THROWS_AS(form_factor_exact_small(tadpole(1.0, 1.0), 11), InputError);
    CHECK_THROWS_AS(form_factor_diagonal(tadpole(1.0, 1.0, VertexCondition::delta(2.0)), 2), InputError);
  }
}
