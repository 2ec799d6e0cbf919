#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fixtures.hpp"

#include "wn/errors.hpp"
#include "wn/spectral_core.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <random>

using namespace wn;

namespace {

GradedMatrixComplex two_term(const CMatrix& d) {
    GradedMatrixComplex cx;
    cx.dims = {static_cast<int>(d.cols()), static_cast<int>(d.rows())};
    cx.d = {d};
    return cx;
}

GradedLaplacianFamily solved(const GradedMatrixComplex& cx, EigenRoute route = EigenRoute::Singular) {
    GradedLaplacianFamily fam = assemble_laplacians(cx);
    eigendecompose(fam, route);
    return fam;
}

CMatrix random_matrix(std::mt19937_64& rng, int rows, int cols) {
    std::normal_distribution<double> g;
    CMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m(i, j) = cplx(g(rng), g(rng));
    return m;
}

}  // namespace

TEST_CASE("spectral parameter rejects non-finite parts") {
    CHECK_THROWS_AS(SpectralParameter(std::nan(""), 0.0), DomainError);
    CHECK_THROWS_AS(SpectralParameter(0.0, INFINITY), DomainError);
    SpectralParameter z(2.0, -3.0);
    CHECK(z.z() == cplx(2.0, -3.0));
    CHECK(SpectralParameter::from(cplx(1, 4)).nu == 4.0);
}

TEST_CASE("1x1 complex d = [2] gives Laplacians [4] and [4]") {
    CMatrix d(1, 1);
    d(0, 0) = 2.0;
    GradedLaplacianFamily fam = assemble_laplacians(two_term(d));
    CHECK(fam.laplacians[0](0, 0).real() == doctest::Approx(4.0));
    CHECK(fam.laplacians[1](0, 0).real() == doctest::Approx(4.0));
}

TEST_CASE("zero differential has full kernels") {
    GradedLaplacianFamily fam = solved(two_term(CMatrix::Zero(1, 2)));
    CHECK(fam.betti() == std::vector<int>{2, 1});
    CHECK(fam.laplacians[0].norm() == 0.0);
}

TEST_CASE("shape and d^2 violations are rejected") {
    GradedMatrixComplex bad;
    bad.dims = {2, 2};
    bad.d = {CMatrix::Identity(3, 2)};
    CHECK_THROWS_AS(assemble_laplacians(bad), ShapeError);

    GradedMatrixComplex notcx;
    notcx.dims = {1, 1, 1};
    notcx.d = {CMatrix::Ones(1, 1), CMatrix::Ones(1, 1)};
    CHECK_THROWS_AS(assemble_laplacians(notcx), NotAComplex);
}

TEST_CASE("diagonal and 2x2 eigenvalues") {
    // Delta_0 = d^H d for d = diag(sqrt 3, 1) is diag(3, 1).
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = std::sqrt(3.0);
    d(1, 1) = 1.0;
    for (EigenRoute route : {EigenRoute::Singular, EigenRoute::Hermitian}) {
        GradedLaplacianFamily fam = solved(two_term(d), route);
        CHECK(fam.spectra[0].values[0] == doctest::Approx(1.0));
        CHECK(fam.spectra[0].values[1] == doctest::Approx(3.0));
    }
    // [[2,1],[1,2]] = d^H d with d its symmetric square root.
    Eigen::Matrix2d a;
    a << 2, 1, 1, 2;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(a);
    CMatrix root = es.operatorSqrt().cast<cplx>();
    GradedLaplacianFamily fam = solved(two_term(root));
    CHECK(fam.spectra[0].values[0] == doctest::Approx(1.0));
    CHECK(fam.spectra[0].values[1] == doctest::Approx(3.0));
}

TEST_CASE("random 50x50 family reconstructs within tolerance on both routes") {
    std::mt19937_64 rng(11);
    GradedMatrixComplex cx = two_term(random_matrix(rng, 50, 50));
    for (EigenRoute route : {EigenRoute::Singular, EigenRoute::Hermitian}) {
        GradedLaplacianFamily fam = assemble_laplacians(cx);
        CHECK_NOTHROW(eigendecompose(fam, route));
        for (std::size_t k = 0; k < 2; ++k) {
            const auto& sp = fam.spectra[k];
            CMatrix rec = sp.vectors * sp.values.cast<cplx>().asDiagonal() * sp.vectors.adjoint();
            CHECK((rec - fam.laplacians[k]).norm() <= 1e-10 * fam.laplacians[k].norm());
            for (Eigen::Index j = 1; j < sp.values.size(); ++j) CHECK(sp.values[j] >= sp.values[j - 1]);
        }
    }
}

TEST_CASE("small/large split at threshold 1") {
    CMatrix d = CMatrix::Zero(3, 3);
    d(1, 1) = std::sqrt(0.3);
    d(2, 2) = std::sqrt(7.0);
    GradedLaplacianFamily fam = solved(two_term(d));
    SpectralSplit s = split_small_large(fam);
    CHECK(s.small_counts() == std::vector<int>{2, 2});
    CHECK(s.large_counts() == std::vector<int>{1, 1});

    GradedLaplacianFamily tiny = solved(two_term(CMatrix::Identity(2, 2) * 0.5));
    CHECK(split_small_large(tiny).large_counts() == std::vector<int>{0, 0});
}

TEST_CASE("split is invariant under a unitary change of basis") {
    std::mt19937_64 rng(5);
    CMatrix d = random_matrix(rng, 6, 6) * 0.3;
    Eigen::HouseholderQR<CMatrix> q0(random_matrix(rng, 6, 6)), q1(random_matrix(rng, 6, 6));
    CMatrix U0 = q0.householderQ(), U1 = q1.householderQ();
    auto a = split_small_large(solved(two_term(d)));
    auto b = split_small_large(solved(two_term(U1 * d * U0.adjoint())));
    CHECK(a.small_counts() == b.small_counts());
}

TEST_CASE("heat supertrace: zero complex on degrees (2,1) is 1 for every t") {
    GradedLaplacianFamily fam = solved(two_term(CMatrix::Zero(1, 2)));
    for (double t : {0.01, 1.0, 10.0}) CHECK(heat_supertrace(fam, {}, t).real() == doctest::Approx(1.0));
    CHECK_THROWS_AS(heat_supertrace(fam, {}, 0.0), DomainError);
}

TEST_CASE("McKean-Singer and vanishing perp supertrace on assembled families") {
    std::mt19937_64 rng(3);
    std::vector<GradedMatrixComplex> cxs{
        two_term(random_matrix(rng, 5, 7)),
        assemble_circle_complex(fixtures::two_zero_exact(64), {8, 1}),
        assemble_circle_complex(fixtures::tight(64), {12, -2}),
        build_differential(fixtures::product_graph(), {10, 0.5}),
    };
    for (const auto& cx : cxs)
        for (EigenRoute route : {EigenRoute::Singular, EigenRoute::Hermitian}) {
            GradedLaplacianFamily fam = solved(cx, route);
            auto b = fam.betti();
            int chi = 0, dim = 0;
            for (std::size_t k = 0; k < b.size(); ++k) {
                chi += (k % 2 ? -1 : 1) * b[k];
                dim += cx.dims[k];
            }
            for (double t : {0.001, 0.1, 2.0}) {
                CHECK(std::abs(heat_supertrace(fam, {}, t, Subset::All) - cplx(chi)) <= 1e-8 * dim);
                CHECK(std::abs(heat_supertrace(fam, {}, t, Subset::Perp)) <= 1e-8 * dim);
            }
        }
}

TEST_CASE("zeta by eigen-sum") {
    ZetaOptions plain{false};
    // Delta_0 = diag(1, 4), weight identity on degree 0 only.
    CMatrix d = CMatrix::Zero(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = 2.0;
    GradedLaplacianFamily fam = solved(two_term(d));
    DegreeWeights w{CMatrix::Identity(2, 2), CMatrix::Zero(2, 2)};
    CHECK(zeta_via_spectrum(fam, w, 1.0, 0.0, plain).real() == doctest::Approx(1.25));

    CMatrix d2 = CMatrix::Zero(2, 2);
    d2(1, 1) = std::sqrt(2.0);
    GradedLaplacianFamily fam2 = solved(two_term(d2));
    CHECK(zeta_via_spectrum(fam2, w, 1.0, 0.0, plain).real() == doctest::Approx(0.5));
    CHECK_THROWS_AS(zeta_via_spectrum(fam2, w, 1.0, -1.0), DomainError);
}

TEST_CASE("eigen-sum agrees with the Mellin integral of the heat trace") {
    // Single eigenvalue 2: 2^{-s} at s = 1.5.
    CMatrix d(1, 1);
    d(0, 0) = std::sqrt(2.0);
    GradedLaplacianFamily fam = solved(two_term(d));
    DegreeWeights w{CMatrix::Identity(1, 1), CMatrix::Zero(1, 1)};
    const double s = 1.5;
    // t = u^2 removes the endpoint singularity of t^{s-1}.
    double mellin = integrate(
                        [&](double u) {
                            return 2 * u * std::pow(u * u, s - 1) * heat_supertrace(fam, w, u * u, Subset::Perp).real();
                        },
                        1e-12, 12.0, 1e-13) /
                    boost::math::tgamma(s);
    cplx eig = zeta_via_spectrum(fam, w, s, 0.0);
    CHECK(std::abs(eig.real() - std::pow(2.0, -s)) < 1e-12);
    CHECK(std::abs(mellin - eig.real()) < 1e-10);

    // Integer s on a gapped random family.
    std::mt19937_64 rng(9);
    CMatrix r = random_matrix(rng, 4, 4) + 3.0 * CMatrix::Identity(4, 4);
    GradedLaplacianFamily g = solved(two_term(r));
    double lmin = g.spectra[0].values.minCoeff();
    DegreeWeights w4{CMatrix::Identity(4, 4), CMatrix::Zero(4, 4)};
    double m1 = integrate([&](double t) { return heat_supertrace(g, w4, t, Subset::Perp).real(); }, 0.0,
                          60.0 / lmin, 1e-13);
    CHECK(std::abs(m1 - zeta_via_spectrum(g, w4, 1.0, 0.0).real()) < 1e-9);
}
