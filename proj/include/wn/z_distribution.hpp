#pragma once

#include "wn/circle_witten.hpp"

#include <string>
#include <vector>

namespace wn {

// f(x) = sum_i c_i exp(-x^2 / (2 sigma_i^2)), fhat(nu) = int f(x) e^{-i x nu} dx.
struct TestFunctionSpec {
    struct Term {
        double c = 1.0;
        double sigma = 1.0;
    };
    std::vector<Term> terms;
    double R = 0.0;  // nu-truncation radius; 0 means 8 / min sigma

    static TestFunctionSpec gaussian(double sigma, double c = 1.0);
    TestFunctionSpec operator+(const TestFunctionSpec& o) const;
    TestFunctionSpec scaled(double s) const;

    double f0() const;
    double fhat(double nu) const;
    double radius() const;
    // int_{|nu| > R} |fhat| / 2pi, per unit sup of the paired function
    double tail_weight(double R) const;
};

enum class PairingOrder { InnerFirst, OuterFirst };
std::string to_string(PairingOrder o);

// Per-node values of the nu-integrand on [-R, R] for one mu, reusable across
// test functions sharing R. Inner order: Tr^s(eta delta_z Delta_z^{-1}) on the
// nonzero spectrum (the u-integral in closed form). Outer order: zeta(1, z).
// Both carry the same Fourier-tail correction.
struct NodeValues {
    double mu = 0.0;
    double R = 0.0;
    PairingOrder order = PairingOrder::OuterFirst;
    std::vector<double> nodes, weights;
    std::vector<cplx> values;
    // Coarser Gauss rule on the same interval for a quadrature error estimate.
    std::vector<double> coarse_nodes, coarse_weights;
    std::vector<cplx> coarse_values;
    double sup_abs = 0.0;
};

NodeValues pairing_nodes(const CircleWittenSystem& sys, double mu, double R, PairingOrder order,
                         unsigned n_nodes = 129, unsigned n_coarse = 65);

// Integrand at one nu.
cplx inner_integrand(const CircleWittenSystem& sys, SpectralParameter z);
cplx outer_integrand(const CircleWittenSystem& sys, SpectralParameter z);

struct Pairing {
    PairingOrder order = PairingOrder::OuterFirst;
    double mu = 0.0;
    double R = 0.0;
    cplx value = 0.0;
    double tail_bound = 0.0;   // bound on the nu-truncation error
    double quad_error = 0.0;   // |fine - coarse|
    double tolerance() const { return tail_bound + quad_error; }
};

// (1/2pi) int fhat(nu) X(nu) dnu over the nodes, with the truncation bound recorded.
Pairing pair(const NodeValues& nv, const TestFunctionSpec& f);
// Returns p unless its truncation bound exceeds 1e-8 max(1, |value|) (ConvergenceError).
const Pairing& certify(const Pairing& p);
// Both certify their result.
Pairing pair_inner_first(const CircleWittenSystem& sys, double mu, const TestFunctionSpec& f);
Pairing pair_outer_first(const CircleWittenSystem& sys, double mu, const TestFunctionSpec& f);

// The limit constant z = z_sm + z_la for a circle system.
struct ZLimit {
    double z_sm = 0.0;
    double z_la = 0.0;
    double z = 0.0;
    bool exact = false;
};
ZLimit z_limit(const CircleWittenSystem& sys);

struct DeltaRow {
    double mu = 0.0;
    double sigma = 0.0;
    PairingOrder order = PairingOrder::OuterFirst;
    cplx value = 0.0;
    double target = 0.0;     // z f(0)
    double deviation = 0.0;  // |value - target| / |target|
    double fubini_gap = 0.0; // |inner - outer|, same on both rows
    double tolerance = 0.0;  // combined quadrature tolerance of both orders
};
struct DeltaReport {
    ZLimit z;
    std::vector<DeltaRow> rows;
    std::vector<double> sigmas;
    std::vector<double> extrapolated;  // per sigma: intercept of Re(value)/f(0) against 1/mu
    std::vector<bool> monotone;        // per sigma: outer-order deviation decreasing in mu
};
// Gaussians of the given widths share R = 8 / min sigma, so the node values
// are computed once per mu and order.
DeltaReport delta_limit_report(const CircleWittenSystem& sys, const std::vector<double>& mus,
                               const std::vector<double>& sigmas);

}  // namespace wn
