#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

#include "wn/errors.hpp"
#include "wn/morse_complex.hpp"

#include <cmath>
#include <random>

using namespace wn;

namespace {

InstantonGraph single_edge(double a) {
    InstantonGraph g;
    g.add_vertex("p", 1);
    g.add_vertex("q", 0);
    g.add_edge("p", "q", 1, -a);
    return g;
}

// Two maxima over one minimum with leading weights 3 and 4.
InstantonGraph two_maxima(double second) {
    InstantonGraph g;
    g.add_vertex("p1", 1);
    g.add_vertex("p2", 1);
    g.add_vertex("q", 0);
    g.add_edge("p1", "q", 1, -3.0);
    g.add_edge("p1", "q", -1, -5.0);
    g.add_edge("p2", "q", 1, -second);
    return g;
}

}  // namespace

TEST_CASE("differential entries are signed exponentials of the weights") {
    InstantonGraph g = fixtures::s1_graph();
    GradedMatrixComplex d0 = build_differential(g, {0.0, 0.0});
    CHECK(std::abs(d0.d[0](0, 0)) < 1e-15);
    SpectralParameter z(2.0, 0.7);
    cplx expect = std::exp(-0.5 * z.z()) - std::exp(-1.5 * z.z());
    CHECK(std::abs(build_differential(g, z).d[0](0, 0) - expect) < 1e-14);

    // Exact source: d_z = e^{-zh} d e^{zh} with h the potential. Rows are the
    // index-1 vertex, columns the index-0 vertices.
    InstantonGraph e;
    e.add_vertex("p", 1);
    e.add_vertex("q", 0);
    e.add_vertex("r", 0);
    e.add_edge("p", "q", 1, -2.0);
    e.add_edge("p", "r", -1, -1.0);
    const double hp = 0.0, hq = -2.0, hr = -1.0;
    cplx zz(1.3, -0.4);
    CMatrix dz = build_differential(e, SpectralParameter::from(zz)).d[0];
    CMatrix d = build_differential(e, {0.0, 0.0}).d[0];
    REQUIRE(dz.rows() == 1);
    CHECK(std::abs(dz(0, 0) - std::exp(-zz * hp) * d(0, 0) * std::exp(zz * hq)) < 1e-13);
    CHECK(std::abs(dz(0, 1) - std::exp(-zz * hp) * d(0, 1) * std::exp(zz * hr)) < 1e-13);
}

TEST_CASE("d^2 = 0 for 20 random z on every fixture") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    std::vector<InstantonGraph> graphs{fixtures::s1_graph(), fixtures::product_graph(),
                                       product_graph(fixtures::product_graph(), circle_graph({0.3, 0.4}, "w"))};
    for (int i = 0; i < 5; ++i) graphs.push_back(random_valid_graph(rng));
    for (const auto& g : graphs) {
        CHECK_NOTHROW(check_complex_symbolic(g));
        for (int i = 0; i < 20; ++i) {
            GradedMatrixComplex cx = build_differential(g, {u(rng), u(rng)});
            for (std::size_t k = 0; k + 1 < cx.d.size(); ++k) {
                double scale = std::max(1.0, cx.d[k].norm() * cx.d[k + 1].norm());
                CHECK((cx.d[k + 1] * cx.d[k]).norm() <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("a non-cancelling square is rejected with the offending pair") {
    InstantonGraph g;
    g.add_vertex("a", 2);
    g.add_vertex("b", 1);
    g.add_vertex("c", 0);
    g.add_edge("a", "b", 1, -1.0);
    g.add_edge("b", "c", 1, -1.0);
    CHECK_THROWS_AS(check_complex_symbolic(g), NotAComplex);
    CHECK_THROWS_AS(build_differential(g, {1.0, 0.0}), NotAComplex);
    try {
        check_complex_symbolic(g);
    } catch (const NotAComplex& e) {
        CHECK(std::string(e.what()).find('a') != std::string::npos);
    }
}

TEST_CASE("rank recursion") {
    RankProfile s1 = rank_sequence({1, 1}, {0, 0});
    CHECK(s1.m == std::vector<int>{1, 1});
    CHECK(s1.m1 == std::vector<int>{0, 1});
    CHECK(s1.m2 == std::vector<int>{1, 0});
    CHECK(rank_sequence({1, 1}, {1, 1}).m == std::vector<int>{0, 0});

    RankProfile t = rank_sequence({1, 2, 1}, {0, 0, 0});
    CHECK(t.m1 == std::vector<int>{0, 1, 1});
    for (int k = 0; k <= 2; ++k) {
        CHECK(t.m[k] == t.m1[k] + t.m2[k]);
        CHECK(t.m1[k] == t.m2[2 - k]);
    }
    CHECK(t.euler() == 0);
    CHECK_THROWS_AS(rank_sequence({1, 2}, {0, 0}), InfeasibleError);
    CHECK_THROWS_AS(rank_sequence({1, 1}, {2, 2}), InfeasibleError);
    CHECK_THROWS_AS(rank_sequence({3, 1, 0}, {0, 0, 2}), InfeasibleError);
}

TEST_CASE("numeric Hodge dimensions match the recursion and projections are orthogonal") {
    for (const auto& g : {fixtures::s1_graph(), fixtures::product_graph()}) {
        for (double mu : {-20.0, -10.0, 10.0, 20.0})
            for (double nu : {0.0, 3.0}) {
                HodgeRanks h = hodge_ranks_numeric(g, {mu, nu});
                HodgeRanks hc = hodge_ranks_numeric(g, {mu, -nu});
                CHECK(h.ker == hc.ker);
                RankProfile r = rank_sequence(g.counts(), h.ker);
                CHECK(h.im_d == r.m1);
                CHECK(h.im_delta == r.m2);
                for (int b : h.ker) CHECK(b == 0);
                CHECK(h.max_projection_defect < 1e-10);
            }
    }
    // At z = 0 the circle differential vanishes: everything is kernel.
    HodgeRanks z0 = hodge_ranks_numeric(fixtures::s1_graph(), {0.0, 0.0});
    CHECK(z0.ker == std::vector<int>{1, 1});
}

TEST_CASE("tightness") {
    Tightness t = tightness_check(two_maxima(3.0));
    CHECK(t.tight);
    CHECK(t.M_vertex[0] == 3.0);
    CHECK(t.a[1] == 3.0);
    Tightness nt = tightness_check(two_maxima(4.0));
    CHECK_FALSE(nt.tight);
    CHECK(nt.M_lo[1] == 3.0);
    CHECK(nt.M_hi[1] == 4.0);
    CHECK_THROWS_AS(z_invariants(two_maxima(4.0), rank_sequence({1, 2}, {0, 1})), StateError);

    InstantonGraph lonely = single_edge(1.0);
    lonely.add_vertex("x", 1);
    CHECK_THROWS_AS(tightness_check(lonely), StructureError);

    Tightness p = tightness_check(fixtures::product_graph());
    CHECK(p.tight);
    CHECK(p.a[1] == doctest::Approx(0.5));
    CHECK(p.a[2] == doctest::Approx(0.5));
}

TEST_CASE("leading complex keeps exactly the leading edges") {
    LeadingComplex s = leading_complex(fixtures::s1_graph());
    REQUIRE(s.d_lead.size() == 1);
    CHECK(s.d_lead[0](0, 0) == 1.0);
    CHECK(s.has_subleading);
    CHECK(s.predicted_slope == doctest::Approx(-1.0));
    CHECK(s.fitted_slope == doctest::Approx(-1.0).epsilon(1e-3));

    // p1 also carries a -5 instanton below the leading -3.
    LeadingComplex e = leading_complex(two_maxima(3.0));
    CHECK(e.has_subleading);
    CHECK(e.predicted_slope == doctest::Approx(-2.0));
    CHECK(e.d_lead[0].cwiseAbs().sum() == 2.0);
    LeadingComplex eq = leading_complex(single_edge(2.0));
    CHECK_FALSE(eq.has_subleading);
    for (double d : eq.difference) CHECK(d < 1e-14);

    LeadingComplex p = leading_complex(fixtures::product_graph());
    REQUIRE(p.d_lead.size() == 2);
    CHECK((p.d_lead[1] * p.d_lead[0]).norm() == 0.0);
    CHECK(p.fitted_slope < 0);
}

TEST_CASE("small spectrum window") {
    auto w = small_spectrum_window(single_edge(1.5), {7.0, 2.0});
    REQUIRE(w.size() == 2);
    REQUIRE(w[1].size() == 1);
    CHECK(w[1][0] == doctest::Approx(1.0).epsilon(1e-12));

    WindowSweep s = window_sweep(fixtures::product_graph(), {10, 20, 30, 40});
    for (std::size_t k = 1; k < s.max_relative_drift.size(); ++k) {
        CHECK(s.max_relative_drift[k] < 0.1);
        CHECK(s.band_lo[k] > 0);
    }
}

TEST_CASE("z invariants") {
    RankProfile s1 = rank_sequence({1, 1}, {0, 0});
    ZInvariants a = z_invariants(1, {0.0, 2.0}, s1);
    CHECK(a.z_sm == doctest::Approx(std::exp(2.0) - 1.0));
    CHECK(a.z_sm == doctest::Approx(6.389056).epsilon(1e-6));
    CHECK_FALSE(a.lemma_applicable);

    RankProfile t = rank_sequence({1, 2, 1}, {0, 0, 0});
    ZInvariants b = z_invariants(2, {0.0, 0.7, 0.7}, t);
    CHECK(b.lemma_applicable);
    CHECK(b.lemma_agrees);
    CHECK(std::abs(b.z_sm) < 1e-14);
    CHECK(std::abs(b.lemma_variant) < 1e-14);

    // Reversal swaps a_k with a_{n-k+1}.
    ZInvariants c = z_invariants(2, {0.0, 0.3, 1.1}, t);
    double za = -(1 - std::exp(0.3)) + (1 - std::exp(1.1));
    double zr = (1 - std::exp(1.1)) - (1 - std::exp(0.3));
    CHECK(c.z_sm == doctest::Approx(za));
    CHECK(c.minus_z_sm_neg == doctest::Approx(zr));
    CHECK(c.lemma_agrees);

    ZInvariants g = z_invariants(fixtures::s1_graph(), s1);
    CHECK(g.z_sm == doctest::Approx(std::exp(0.5) - 1.0));
    CHECK_THROWS_AS(z_invariants(2, {0.0, 1.0}, t), StateError);
}

TEST_CASE("projection law") {
    InstantonGraph eq;
    eq.add_vertex("p1", 1);
    eq.add_vertex("p2", 1);
    eq.add_vertex("q", 0);
    eq.add_edge("p1", "q", 1, -0.8);
    eq.add_edge("p2", "q", -1, -0.8);
    ProjectionLaw e = projection_law_check(eq, {5, 10, 20}, {0, 3});
    CHECK(e.exact_zero[1]);

    ProjectionLaw s = projection_law_check(fixtures::s1_graph(), {10, 20, 30, 40}, {0, 5, 25});
    CHECK_FALSE(s.exact_zero[1]);
    CHECK(s.rate[1] > 0);
    CHECK(s.nu_uniformity[1] <= 2.0);
    for (std::size_t i = 1; i < s.mus.size(); ++i) CHECK(s.deviation[1][i][0] < s.deviation[1][i - 1][0]);
}

TEST_CASE("tau prescription") {
    TauProblem p{2, 1.0, 1.0, 1.0, 2.0, 1.0, 0.0, 0.0};
    // Equal constants on both ends: the exponential terms cancel for even n.
    for (double c : {0.2, 1.0}) CHECK(tau_increment(p, c, c) == doctest::Approx(c * (2.0 - 1.0)));
    TauSolution zero = prescribe_tau(p);
    CHECK(zero.c0 == 0.0);
    CHECK(zero.cn == 0.0);

    p.z_baseline = 0.4;
    p.tau = 5.4;
    TauSolution up = prescribe_tau(p);
    CHECK(up.c0 >= 0);
    CHECK(up.cn >= 0);
    CHECK(std::abs(p.z_baseline + tau_increment(p, up.c0, up.cn) - p.tau) < 1e-10);

    p.tau = -7.0;
    TauSolution down = prescribe_tau(p);
    CHECK(down.residual < 1e-10 * 7.0);
    CHECK(down.cn > 0);

    TauProblem odd{1, 1.0, 1.0, 1.0, 1.0, 1.0, 2.0, 1.0};
    CHECK_THROWS_AS(prescribe_tau(odd), InfeasibleError);
    odd.tau = 3.0;
    CHECK(prescribe_tau(odd).residual < 1e-10 * 3.0);
    odd.X0 = 0;
    CHECK_THROWS_AS(prescribe_tau(odd), DomainError);
}

TEST_CASE("graph text round trip and parse errors") {
    InstantonGraph g = fixtures::product_graph();
    InstantonGraph h = InstantonGraph::parse(g.to_text());
    REQUIRE(h.vertices.size() == g.vertices.size());
    REQUIRE(h.edges.size() == g.edges.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        CHECK(h.edges[i].p == g.edges[i].p);
        CHECK(h.edges[i].sign == g.edges[i].sign);
        CHECK(h.edges[i].weight == g.edges[i].weight);
    }
    CHECK_THROWS_AS(InstantonGraph::parse("v a 1\nv b 0\ne a c 1 -1\n"), DataError);
    CHECK_THROWS_AS(InstantonGraph::parse("v a 1\nv b 0\ne a b 1\n"), DataError);
    CHECK_THROWS_AS(InstantonGraph::parse("v a 1\nv a 0\n"), DataError);
    CHECK_THROWS_AS(InstantonGraph::parse("v a 2\nv b 0\ne a b 1 -1\n").validate(), StructureError);
    CHECK_THROWS_AS(InstantonGraph::parse("v a 1\nv b 0\ne a b 1 0.5\n").validate(), LyapunovError);
    CHECK_NOTHROW(InstantonGraph::parse("# comment\n\nv a 1\nv b 0\ne a b -1 -0.5\n").validate());
    CHECK(g.reversed().reversed().to_text() == g.to_text());
}
