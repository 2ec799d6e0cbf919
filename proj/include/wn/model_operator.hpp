#pragma once

#include "wn/numerics.hpp"

#include <functional>
#include <string>
#include <vector>

namespace wn {

struct MorseModelSpec {
    int n = 1;
    int k = 0;

    MorseModelSpec(int n_, int k_);
    // epsilon_j for j = 1..n: -1 on the first k axes, +1 after.
    int eps(int j) const { return j <= k ? -1 : 1; }
};

struct ModelEigenvalue {
    double value = 0.0;
    std::vector<int> quanta;  // u_j
    std::vector<int> signs;   // v_j
    int degree = 0;
};

// All mu * sum_j (1 + 2u_j + eps_j v_j) with exactly `degree` entries v_j = +1
// and u_j <= max_quanta, sorted by value (ties in lexicographic (v, u) order).
std::vector<ModelEigenvalue> model_spectrum(const MorseModelSpec& spec, int degree, double mu,
                                            int max_quanta = 6);

// (mu/pi)^{n/4} exp(-i nu h_p(x)) exp(-mu |x|^2 / 2), h_p = sum eps_j x_j^2 / 2.
std::vector<cplx> model_ground_state(const MorseModelSpec& spec, double mu, double nu,
                                     const std::vector<std::vector<double>>& points);

// L^2 norm of the ground state over R^n by adaptive quadrature.
double model_ground_state_norm(const MorseModelSpec& spec, double mu, double nu);

struct CutoffNormalization {
    double a_mu = 0.0;
    double reference = 0.0;      // (pi/mu)^{n/4}
    double rel_deviation = 0.0;  // |a_mu - reference| / reference
    double log_abs_deviation = 0.0;
};

using CutoffProfile = std::function<double(double)>;

CutoffNormalization cutoff_normalization(double mu, double r, const CutoffProfile& rho, int n);

struct DegreeCheck {
    int degree = 0;
    std::vector<double> numeric;
    std::vector<double> formula;
    double max_rel_error = 0.0;   // |num - formula| / max(formula, mu)
    int ground_multiplicity = 0;  // numeric eigenvalues below mu
};

struct ModelCheck {
    double mu = 0.0;
    int k = 0;
    int N = 0;
    double L = 0.0;
    double h = 0.0;
    double estimated_error = 0.0;  // Richardson estimate against the N/2 grid
    bool resolved = true;
    std::vector<DegreeCheck> degrees;  // degree 0 and degree 1
    std::string note;

    double max_rel_error() const;
};

// Finite-difference model Laplacian on [-L, L] with Dirichlet ends.
// N = 0 picks the grid adaptively from the Richardson error estimate.
ModelCheck numeric_model_check(int k, double mu, int N = 0, int levels = 10);

// Half-width used by the check: Gaussian tail e^{-mu L^2/2} below 1e-12.
double model_half_width(double mu);

}  // namespace wn
