#pragma once

#include "wn/instanton_graph.hpp"
#include "wn/profile.hpp"
#include "wn/spectral_core.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace wn {

// Grid samples of a Morse form eta = h' d theta + c d theta on S^1. Vectors
// hold the l^2 coefficients of the grid basis; L^2 function values differ by
// the factor sqrt(N / 2pi), which cancels in every quantity computed here.
struct CircleWittenSystem {
    int N = 0;
    double c = 0.0;
    double r = 0.0;
    std::vector<double> theta;
    std::vector<double> eta;  // coefficient of d theta
    std::vector<double> h;    // periodic part of the primitive
    std::vector<ZeroSpec> zeros;
    std::shared_ptr<const MorseProfile> profile;  // null for the uniform test system
    std::string label;

    bool exact() const { return c == 0.0; }
    std::vector<int> zero_counts() const;  // (|X_0|, |X_1|)
};

CircleWittenSystem make_circle_system(const std::vector<ZeroSpec>& zeros, double c, double r,
                                      int N = 256, const std::string& label = "");
// eta == c everywhere; no zeros. Only used for closed-form probes.
CircleWittenSystem make_uniform_system(int N, double c);
// Same profile sampled on a different grid.
CircleWittenSystem resample(const CircleWittenSystem& sys, int N);

// Fourier pseudospectral derivative with the Nyquist mode treated as +N/2.
CMatrix fourier_derivative(int N);

GradedMatrixComplex assemble_circle_complex(const CircleWittenSystem& sys, SpectralParameter z);

struct BettiReport {
    int b0 = 0;
    int b1 = 0;
    std::vector<std::string> warnings;
};
BettiReport betti_novikov(const CircleWittenSystem& sys, SpectralParameter z);

struct CircleZetaOptions {
    std::vector<double> t_sequence;  // empty: t_j = 2^{-j}, j = 0..11
    bool tail_correction = true;
    bool check_convergence = true;   // compare against the N/2 grid
    double convergence_tol = 0.05;
};

struct ZetaReport {
    SpectralParameter z;
    int N = 0;
    std::vector<double> t;
    std::vector<cplx> raw;        // Tr^s(eta d^{-1} e^{-t Delta} Pi^1) per t
    cplx richardson = 0.0;        // sqrt(t) extrapolation of the last pair, diagnostic
    cplx raw_limit = 0.0;         // finite sum at t = 0
    cplx tail = 0.0;              // Fourier-tail correction subtracted from raw_limit
    cplx zeta = 0.0;
    cplx zeta_sm = 0.0;
    cplx zeta_la = 0.0;
    std::vector<int> small_counts;  // eigenvalues <= 1 per degree
    bool small_matches_zeros = false;
    cplx coarse_zeta = 0.0;
    double convergence_change = 0.0;
    std::vector<std::string> warnings;
};

// Thrown data carries the raw samples when the N/2 comparison disagrees.
ZetaReport zeta_invariant(const CircleWittenSystem& sys, SpectralParameter z,
                          const CircleZetaOptions& opt = {});

// Analytic contribution of the Fourier modes beyond the grid, per unit z.
double zeta_tail_factor(const CircleWittenSystem& sys);

struct IdentityResidual {
    cplx lhs = 0.0;  // Tr^s(eta d^{-1} e^{-t Delta} Pi^1)
    cplx rhs = 0.0;  // Tr^s(h e^{-t Delta} Pi^perp)
    double residual = 0.0;
    double scale = 1.0;
};
IdentityResidual exact_identity_residual(const CircleWittenSystem& sys, SpectralParameter z,
                                         double t);

struct CircleInstantonData {
    InstantonGraph graph;
    std::vector<double> M;  // per vertex, index-1 vertices only meaningful
    bool tight = false;
    double a1 = 0.0;
};
CircleInstantonData instanton_data_circle(const CircleWittenSystem& sys);

struct MathaiQuillen {
    int sign = 0;                 // calibrated global sign of X*psi
    double calibration_error = 0.0;
    std::vector<double> pullback;  // X*psi at grid points, 0 at zeros
    double z_la = 0.0;
};
// Sign calibrated once on the reference exact profile, then applied to sys.
int calibrate_mathai_quillen_sign();
MathaiQuillen mathai_quillen_1d(const CircleWittenSystem& sys);

// Alternating sum of primitive values at the zeros, the exact-case limit.
double exact_zero_sum(const CircleWittenSystem& sys);

// Trigonometric interpolant of grid samples (Nyquist mode as +N/2).
class TrigInterpolant {
public:
    explicit TrigInterpolant(const CVector& samples);
    cplx operator()(double theta) const;

private:
    int N_;
    std::vector<cplx> coef_;  // modes -N/2+1 .. N/2
};

// Phi_z(omega)(p): evaluation at p for index 0, integral of e^{z(H - H(p))} omega
// over the unstable arc for index 1. `samples` are function values on the grid.
cplx phi_map_circle(const CircleWittenSystem& sys, SpectralParameter z, const CVector& samples,
                    int degree, int zero);

// Cutoff ground state e_{p,z} as grid function values (rho with radius r/2).
CVector cutoff_state(const CircleWittenSystem& sys, int zero, double mu, double nu);

struct PhiPsiReport {
    SpectralParameter z;
    std::vector<std::vector<cplx>> matrix;  // [q][p], same-index pairs only
    std::vector<double> expected;           // per p
    double max_diag_deviation = 0.0;        // max |ratio - 1|
    double max_offdiag = 0.0;               // max |entry| / expected
};
PhiPsiReport phi_psi_report(const CircleWittenSystem& sys, SpectralParameter z);

struct GapRow {
    double mu = 0.0;
    double max_small = 0.0;
    double min_large = 0.0;
    std::vector<int> small_counts;
    std::vector<double> small_values;  // nonzero small eigenvalues, ascending
};
struct GapReport {
    double nu = 0.0;
    std::vector<GapRow> rows;
    double log_slope = 0.0;  // fit of log(max small) vs mu; 0 when nothing to fit
    double log_fit_r2 = 0.0;
    double min_large_over_mu = 0.0;
    bool fitted = false;
};
GapReport spectral_gap_report(const CircleWittenSystem& sys, const std::vector<double>& mus,
                              double nu);

struct SobolevRow {
    double nu = 0.0;
    double max_ratio = 0.0;
    std::string argmax;
};
struct SobolevReport {
    int m = 0;
    std::vector<SobolevRow> rows;
    double spread = 0.0;  // max / min of max_ratio across the sweep
};
// ||alpha||_inf / sum_{k<=m} ||D_{i nu}^k alpha|| for one 0-form (grid values).
double sobolev_ratio(const CircleWittenSystem& sys, int m, double nu, const CVector& alpha);
SobolevReport sobolev_constant_probe(const CircleWittenSystem& sys, int m,
                                     const std::vector<double>& nus, int trials,
                                     std::uint64_t seed);

// Small-complex compression of eta d^{-1} on im d: per index-1 direction,
// returns Pi^1_sm (eta d^{-1}) Pi^1_sm as a matrix in the small basis.
struct SmallCompression {
    CMatrix block;
    double sign = 0.0;      // chosen sign in the (1 - e^{a}) law
    double deviation = 0.0;
};
SmallCompression circle_projection_law(const CircleWittenSystem& sys, SpectralParameter z, double a1);

}  // namespace wn
