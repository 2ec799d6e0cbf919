#pragma once

#include "wn/instanton_graph.hpp"
#include "wn/spectral_core.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace wn {

// (d_z)_{p,q} = sum over instantons p -> q of sign * e^{z weight}. The basis of
// degree k follows the order of index-k vertices in the graph.
GradedMatrixComplex build_differential(const InstantonGraph& g, SpectralParameter z);

// d^2 = 0 for every z iff, for each pair of endpoints two levels apart, the
// signs of the 2-paths cancel within every group of equal total weight.
// Throws NotAComplex naming the first offending pair.
void check_complex_symbolic(const InstantonGraph& g, double weight_tol = 1e-10);

struct RankProfile {
    std::vector<int> counts;  // |X_k|
    std::vector<int> betti;
    std::vector<int> m, m1, m2;
    int euler() const;
};
RankProfile rank_sequence(const std::vector<int>& counts, const std::vector<int>& betti);

struct HodgeRanks {
    std::vector<int> ker, im_d, im_delta;  // per degree
    std::vector<CMatrix> pi0, pi1, pi2;
    double max_projection_defect = 0.0;  // idempotence, hermiticity, Pi1 + Pi2 = Pi^perp
    std::vector<std::string> warnings;
};
HodgeRanks hodge_ranks_numeric(const InstantonGraph& g, SpectralParameter z);

struct Tightness {
    std::vector<double> M_vertex;  // -max outgoing weight (index >= 1), NaN otherwise
    std::vector<double> M_lo, M_hi;  // per index k, range of M_p over X_k
    std::vector<double> a;           // a[k], k = 1..n (a[0] unused), valid when tight
    bool tight = false;
};
Tightness tightness_check(const InstantonGraph& g, double tol = 1e-9);

struct LeadingComplex {
    std::vector<Eigen::MatrixXd> d_lead;      // d'_{k-1} for k = 1..n, stored at k - 1
    std::vector<Eigen::MatrixXd> delta_lead;  // transposes
    std::vector<double> mus;
    std::vector<double> difference;  // max_k ||e^{a_k z} d_{z,k-1} - d'_{k-1}||
    double fitted_slope = 0.0;
    double predicted_slope = 0.0;  // max over dropped edges of (w + a_k)
    bool has_subleading = false;
};
LeadingComplex leading_complex(const InstantonGraph& g,
                               const std::vector<double>& mus = {10, 20, 30, 40}, double nu = 0.0);

// Per k = 1..n: nonzero squared singular values of e^{a_k z} d_{z,k-1},
// that is the nonzero spectrum of Delta_z on im delta_{z,k} + im d_{z,k-1}
// multiplied by e^{2 a_k mu}. Index 0 of the result is empty.
std::vector<std::vector<double>> small_spectrum_window(const InstantonGraph& g, SpectralParameter z);

struct WindowSweep {
    std::vector<double> mus;
    // [k][mu][j]
    std::vector<std::vector<std::vector<double>>> values;
    std::vector<double> band_lo, band_hi;
    std::vector<double> max_relative_drift;  // per k, over eigenvalue slots
};
WindowSweep window_sweep(const InstantonGraph& g, const std::vector<double>& mus, double nu = 0.0);

struct ZInvariants {
    double z_sm = 0.0;
    double minus_z_sm_neg = 0.0;  // -z_sm(-eta)
    double lemma_variant = 0.0;   // -sum_k (-1)^k e^{a_k} m1_k
    bool lemma_applicable = false;  // n even and m_k = m_{n-k}
    bool lemma_agrees = false;
};
ZInvariants z_invariants(const InstantonGraph& g, const RankProfile& profile);
// Same from explicit data; a[k] for k = 1..n.
ZInvariants z_invariants(int n, const std::vector<double>& a, const RankProfile& profile);

struct ProjectionLaw {
    std::vector<double> mus, nus;
    // [k][mu][nu]: ||d_{z-1} d_z^{-1} Pi^1 - e^{a_k} Pi^1||
    std::vector<std::vector<std::vector<double>>> deviation;
    std::vector<double> rate;            // per k: minus the fitted slope of log(max_nu deviation)
    std::vector<double> nu_uniformity;   // per k: max over mu of max_nu / nu=first
    std::vector<bool> exact_zero;        // per k: every deviation is 0 up to roundoff
};
ProjectionLaw projection_law_check(const InstantonGraph& g, const std::vector<double>& mus,
                                   const std::vector<double>& nus);

struct TauProblem {
    int n = 1;
    double a = 0.0;
    double m1_1 = 0.0;
    double m1_n = 0.0;
    double X0 = 0.0;
    double Xn = 0.0;
    double z_baseline = 0.0;
    double tau = 0.0;
};
struct TauSolution {
    double c0 = 0.0;
    double cn = 0.0;
    double value = 0.0;  // z after the change
    double residual = 0.0;
};
double tau_increment(const TauProblem& p, double c0, double cn);
TauSolution prescribe_tau(const TauProblem& p);

// Graphs whose Morse differential squares to zero.
InstantonGraph circle_graph(const std::vector<double>& drops, const std::string& prefix = "x");
InstantonGraph product_graph(const InstantonGraph& a, const InstantonGraph& b);
InstantonGraph random_valid_graph(std::mt19937_64& rng, int max_factors = 3, int max_vertices = 40);

// Weighted rank of a matrix via its singular values, scale-relative.
int numeric_rank(const CMatrix& m);

}  // namespace wn
