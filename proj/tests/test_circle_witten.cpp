#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

#include "wn/circle_witten.hpp"
#include "wn/errors.hpp"

#include <cmath>

using namespace wn;

namespace {

Eigen::VectorXd hermitian_values(const CMatrix& a) {
    Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
    return es.eigenvalues();
}

Eigen::VectorXd singular_values(const CircleWittenSystem& sys, SpectralParameter z) {
    Eigen::JacobiSVD<CMatrix> svd(assemble_circle_complex(sys, z).d[0]);
    return svd.singularValues();
}

}  // namespace

TEST_CASE("two-zero profile hits its values and is monotone between caps") {
    MorseProfile p({{0.0, 1.0, 1}, {kPi, -1.0, 0}}, 0.0, 0.4);
    CHECK(p.H(0.0) == doctest::Approx(1.0));
    CHECK(p.H(kPi) == doctest::Approx(-1.0));
    for (int i = 1; i < 400; ++i) {
        double a = kPi * (i - 1) / 400, b = kPi * i / 400;
        CHECK(p.h(b) <= p.h(a) + 1e-14);
        CHECK(p.h(kPi + b) >= p.h(kPi + a) - 1e-14);
    }
    // Quadratic caps: second difference of h is -1 at the maximum, +1 at the minimum.
    const double e = 1e-3;
    for (double x : {0.0, 0.1, -0.2}) {
        CHECK((p.h(x + e) - 2 * p.h(x) + p.h(x - e)) / (e * e) == doctest::Approx(-1.0).epsilon(1e-5));
        CHECK((p.h(kPi + x + e) - 2 * p.h(kPi + x) + p.h(kPi + x - e)) / (e * e) ==
              doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("four alternating zeros give monotone arcs and the listed values") {
    CircleWittenSystem s = fixtures::four_zero_exact(128);
    const auto& p = *s.profile;
    for (const auto& z : s.zeros) CHECK(p.h(z.theta) == doctest::Approx(z.value));
    for (const auto& a : p.arcs())
        for (int i = 1; i < 200; ++i) {
            double s0 = a.L * (i - 1) / 200, s1 = a.L * i / 200;
            CHECK(a.sigma * (p.H(a.t0 + s1) - p.H(a.t0 + s0)) >= -1e-14);
        }
    // The Morse form vanishes exactly at the listed zeros.
    for (const auto& z : s.zeros) CHECK(std::abs(p.eta(z.theta)) < 1e-14);
}

TEST_CASE("profile rejects bad geometry") {
    CHECK_THROWS_AS(MorseProfile({{0.0, 1.0, 1}, {kPi, -1.0, 0}}, 0.0, 1.7), GeometryError);
    CHECK_THROWS_AS(MorseProfile({{0.0, 1.0, 1}, {1.0, -1.0, 1}}, 0.0, 0.2), GeometryError);
    CHECK_THROWS_AS(MorseProfile({{0.0, 1.0, 1}}, 0.0, 0.2), GeometryError);
    CHECK_THROWS_AS(MorseProfile({{0.0, 1.0, 1}, {kPi, -1.0, 0}}, 0.0, 0.0), GeometryError);
    CHECK_THROWS_AS(MorseProfile({{kPi, 1.0, 1}, {0.5, -1.0, 0}}, 0.0, 0.2), GeometryError);
    CHECK_THROWS_AS(make_circle_system({{0.0, 1.0, 1}, {kPi, -1.0, 0}}, 0.0, 0.3, 100), ConfigError);
}

TEST_CASE("z = 0 with c = 0 is plain differentiation with Betti numbers (1,1)") {
    CircleWittenSystem s = fixtures::two_zero_exact(64);
    GradedMatrixComplex cx = assemble_circle_complex(s, {0.0, 0.0});
    CHECK(cx.dims == std::vector<int>{64, 64});
    CHECK((cx.d[0] - fourier_derivative(64)).norm() < 1e-12);
    BettiReport b = betti_novikov(s, {0.0, 0.0});
    CHECK(b.b0 == 1);
    CHECK(b.b1 == 1);
    for (double mu : {-15.0, 10.0, 25.0}) {
        BettiReport bm = betti_novikov(s, {mu, 2.0});
        CHECK(bm.b0 == 1);
        CHECK(bm.b1 == 1);
    }
}

TEST_CASE("nonexact form: Novikov Betti numbers vanish for |mu| >= 10") {
    CircleWittenSystem s = fixtures::tight(128);
    for (double mu : {10.0, 20.0, -20.0}) {
        BettiReport b = betti_novikov(s, {mu, 1.5});
        CHECK(b.b0 == 0);
        CHECK(b.b1 == 0);
        CHECK(b.b0 - b.b1 == 0);
    }
}

TEST_CASE("exact case: spectra are gauge invariant in nu") {
    CircleWittenSystem s = fixtures::two_zero_exact(256);
    Eigen::VectorXd s0 = singular_values(s, {10.0, 0.0});
    const Eigen::Index n = s0.size();
    for (double nu : {1.0, 3.0, 25.0}) {
        Eigen::VectorXd s1 = singular_values(s, {10.0, nu});
        // e^{i nu h} is band limited only approximately; the low spectrum is resolved.
        for (Eigen::Index j = n - 32; j < n; ++j)
            CHECK(std::abs(s1[j] * s1[j] - s0[j] * s0[j]) <= 1e-8 * std::max(1.0, s0[j] * s0[j]));
    }
}

TEST_CASE("Delta_0 and Delta_1 share their nonzero spectrum") {
    CircleWittenSystem s = fixtures::tight(64);
    GradedMatrixComplex cx = assemble_circle_complex(s, {6.0, -2.0});
    GradedLaplacianFamily fam = assemble_laplacians(cx);
    Eigen::VectorXd l0 = hermitian_values(fam.laplacians[0]), l1 = hermitian_values(fam.laplacians[1]);
    const double scale = l0.maxCoeff();
    for (Eigen::Index j = 0; j < l0.size(); ++j) CHECK(std::abs(l0[j] - l1[j]) <= 1e-9 * scale);
}

TEST_CASE("zeta invariant on the exact system and its small/large split") {
    CircleWittenSystem s = fixtures::two_zero_exact(256);
    ZetaReport r = zeta_invariant(s, {30.0, 0.0});
    CHECK(std::abs(r.zeta.real() + 2.0) < 0.02);
    CHECK(std::abs(r.zeta.imag()) < 1e-8);
    CHECK(std::abs(r.zeta - (r.zeta_sm + r.zeta_la)) < 1e-12);
    CHECK(r.small_matches_zeros);
    CHECK(r.small_counts == std::vector<int>{1, 1});
    CHECK(r.convergence_change < 0.05);
    // Raw samples settle as t decreases.
    CHECK(std::abs(r.raw.back() - r.raw_limit) < std::abs(r.raw.front() - r.raw_limit));
}

TEST_CASE("flipping the form and the parameter flips zeta") {
    CircleWittenSystem a = fixtures::two_zero_exact(256);
    CircleWittenSystem b = make_circle_system({{0.0, -1.0, 0}, {kPi, 1.0, 1}}, 0.0, 0.35, 256);
    for (int j = 0; j < a.N; ++j) REQUIRE(std::abs(a.eta[j] + b.eta[j]) < 1e-12);
    CircleZetaOptions opt;
    opt.check_convergence = false;
    cplx za = zeta_invariant(a, {12.0, 1.0}, opt).zeta;
    cplx zb = zeta_invariant(b, {-12.0, -1.0}, opt).zeta;
    CHECK(std::abs(za + zb) < 1e-9 * std::max(1.0, std::abs(za)));
}

TEST_CASE("instanton data on the circle") {
    CircleInstantonData e = instanton_data_circle(fixtures::two_zero_exact(128));
    REQUIRE(e.graph.edges.size() == 2);
    for (const auto& ed : e.graph.edges) CHECK(ed.weight == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(e.tight);
    CHECK(e.a1 == doctest::Approx(2.0).epsilon(1e-10));
    CHECK(e.graph.edges[0].sign * e.graph.edges[1].sign == -1);

    CircleWittenSystem t = fixtures::tight(128);
    CircleInstantonData f = instanton_data_circle(t);
    REQUIRE(f.graph.edges.size() == 2);
    double w0 = f.graph.edges[0].weight, w1 = f.graph.edges[1].weight;
    CHECK(std::abs(std::abs(w0 - w1) - 2 * kPi * t.c) < 1e-10);
    CHECK(std::max(w0, w1) < 0);
    CHECK(f.tight);
    CHECK(f.a1 == doctest::Approx(-std::max(w0, w1)).epsilon(1e-12));
    CHECK(f.a1 == doctest::Approx(0.5).epsilon(1e-10));

    // Two maxima with different leading weights are not tight.
    CircleWittenSystem u = make_circle_system(
        {{0.0, 1.0, 1}, {kPi / 2, -1.0, 0}, {kPi, 2.0, 1}, {3 * kPi / 2, -1.0, 0}}, 0.0, 0.4, 128);
    CHECK_FALSE(instanton_data_circle(u).tight);
}

TEST_CASE("Mathai-Quillen pullback: sign, value and linearity") {
    CHECK(calibrate_mathai_quillen_sign() == -1);
    MathaiQuillen mq = mathai_quillen_1d(fixtures::two_zero_exact(128));
    CHECK(mq.sign == -1);
    CHECK(mq.z_la == doctest::Approx(-2.0).epsilon(1e-10));
    CHECK(mq.z_la == doctest::Approx(exact_zero_sum(fixtures::two_zero_exact(128))).epsilon(1e-10));
    for (double v : mq.pullback) CHECK(std::abs(std::abs(v) - 0.5) * std::abs(v) < 1e-15);

    CircleWittenSystem doubled = make_circle_system({{0.0, 2.0, 1}, {kPi, -2.0, 0}}, 0.0, 0.35, 128);
    CHECK(mathai_quillen_1d(doubled).z_la == doctest::Approx(2 * mq.z_la).epsilon(1e-10));

    CircleWittenSystem four = fixtures::four_zero_exact(128);
    CHECK(mathai_quillen_1d(four).z_la == doctest::Approx(exact_zero_sum(four)).epsilon(1e-10));
    CHECK(exact_zero_sum(four) == doctest::Approx(-1.0 - 0.8 - 1.0 - 0.7));
}

TEST_CASE("trigonometric interpolant reproduces grid values and band-limited functions") {
    const int N = 32;
    CVector v(N);
    for (int j = 0; j < N; ++j) v[j] = std::cos(3 * 2 * kPi * j / N) + cplx(0, 1) * std::sin(2 * kPi * j / N);
    TrigInterpolant f(v);
    for (int j = 0; j < N; ++j) CHECK(std::abs(f(2 * kPi * j / N) - v[j]) < 1e-12);
    CHECK(std::abs(f(0.37) - cplx(std::cos(3 * 0.37), std::sin(0.37))) < 1e-12);
}

TEST_CASE("Phi on an index-0 zero is evaluation") {
    CircleWittenSystem s = fixtures::two_zero_exact(64);
    CVector w(s.N);
    for (int j = 0; j < s.N; ++j) w[j] = std::cos(s.theta[j]) + 0.5;
    CHECK(std::abs(phi_map_circle(s, {7.0, 3.0}, w, 0, 1) - cplx(-0.5)) < 1e-12);
    CHECK_THROWS_AS(phi_map_circle(s, {7.0, 3.0}, w, 1, 1), DomainError);
    CHECK_THROWS_AS(phi_map_circle(s, {7.0, 3.0}, CVector::Ones(8), 0, 1), DataError);
}

TEST_CASE("Phi Psi entries approach the Gaussian normalization") {
    CircleWittenSystem s = fixtures::four_zero_exact(256);
    double prev_diag = 1e300;
    for (double mu : {10.0, 20.0, 40.0}) {
        PhiPsiReport r = phi_psi_report(s, {mu, 0.0});
        CHECK(r.max_diag_deviation < prev_diag);
        prev_diag = r.max_diag_deviation;
        CHECK(r.expected[1] == doctest::Approx(std::pow(mu / kPi, 0.25)));
        CHECK(r.expected[0] == doctest::Approx(std::pow(kPi / mu, 0.25)));
    }
    CHECK(prev_diag < 0.01);
}

TEST_CASE("spectral gap on the tight system") {
    GapReport g = spectral_gap_report(fixtures::tight(256), {5, 10, 20, 40}, 0.0);
    REQUIRE(g.fitted);
    CHECK(g.log_slope < 0);
    CHECK(g.min_large_over_mu > 0.1);
    for (std::size_t i = 1; i < g.rows.size(); ++i) CHECK(g.rows[i].max_small < g.rows[i - 1].max_small);

    // Exact system: the small eigenvalues are kernel.
    GapReport e = spectral_gap_report(fixtures::two_zero_exact(128), {10, 20}, 0.0);
    for (const auto& row : e.rows) {
        CHECK(row.small_counts == std::vector<int>{1, 1});
        CHECK(row.small_values.empty());
    }
}

TEST_CASE("Sobolev ratio: closed form for constants and uniformity in nu") {
    const double c = 0.7;
    CircleWittenSystem u = make_uniform_system(32, c);
    for (double nu : {0.0, 2.0, 10.0}) {
        double expect = 0.0;
        for (int k = 0; k <= 2; ++k) expect += std::pow(std::abs(nu * c), k);
        expect = 1.0 / (std::sqrt(2 * kPi) * expect);
        CHECK(sobolev_ratio(u, 2, nu, CVector::Ones(32)) == doctest::Approx(expect).epsilon(1e-10));
    }
    SobolevReport r = sobolev_constant_probe(fixtures::tight(128), 1, {0, 10, 100}, 5, 17);
    CHECK(r.rows.size() == 3);
    CHECK(r.spread < 2.0);
    CHECK(sobolev_constant_probe(fixtures::tight(128), 2, {0, 10, 100}, 3, 5).spread < 2.0);
    for (const auto& row : r.rows) CHECK(std::isfinite(row.max_ratio));
    CHECK_THROWS_AS(sobolev_ratio(u, 0, 0.0, CVector::Ones(32)), DomainError);
}

TEST_CASE("exact-form trace identity") {
    CircleWittenSystem s = fixtures::two_zero_exact(256);
    IdentityResidual r = exact_identity_residual(s, {10.0, 0.0}, 0.1);
    CHECK(r.residual < 1e-8 * r.scale);
    IdentityResidual r0 = exact_identity_residual(s, {0.0, 0.0}, 0.1);
    CHECK(r0.residual < 1e-8 * r0.scale);
    IdentityResidual big = exact_identity_residual(s, {10.0, 0.0}, 50.0);
    CHECK(std::abs(big.lhs) < 1e-12);
    CHECK(std::abs(big.rhs) < 1e-12);
    CHECK_THROWS_AS(exact_identity_residual(fixtures::tight(64), {1.0, 0.0}, 0.1), UnsupportedError);
}
