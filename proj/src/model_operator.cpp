#include "wn/model_operator.hpp"

#include "wn/errors.hpp"

#include <lapacke.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace wn {

MorseModelSpec::MorseModelSpec(int n_, int k_) : n(n_), k(k_) {
    if (n < 1 || n > 8) throw DomainError("MorseModelSpec: dimension must be in [1, 8]");
    if (k < 0 || k > n) throw DomainError("MorseModelSpec: index must be in [0, n]");
}

std::vector<ModelEigenvalue> model_spectrum(const MorseModelSpec& spec, int degree, double mu,
                                            int max_quanta) {
    if (degree < 0 || degree > spec.n) throw DomainError("model_spectrum: degree outside [0, n]");
    if (!(mu > 0.0)) throw DomainError("model_spectrum: mu must be positive");
    if (max_quanta < 0) throw DomainError("model_spectrum: max_quanta must be >= 0");
    const int n = spec.n;
    std::vector<ModelEigenvalue> out;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) != degree) continue;
        std::vector<int> v(n);
        for (int j = 0; j < n; ++j) v[j] = (mask >> j) & 1u ? 1 : -1;
        std::vector<int> u(n, 0);
        while (true) {
            long sum = 0;
            for (int j = 0; j < n; ++j) sum += 1 + 2 * u[j] + spec.eps(j + 1) * v[j];
            out.push_back({mu * static_cast<double>(sum), u, v, degree});
            int j = 0;
            while (j < n && u[j] == max_quanta) u[j++] = 0;
            if (j == n) break;
            ++u[j];
        }
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.value < b.value; });
    return out;
}

std::vector<cplx> model_ground_state(const MorseModelSpec& spec, double mu, double nu,
                                     const std::vector<std::vector<double>>& points) {
    if (!(mu > 0.0)) throw DomainError("model_ground_state: mu must be positive");
    const double amp = std::pow(mu / kPi, spec.n / 4.0);
    std::vector<cplx> out;
    out.reserve(points.size());
    for (const auto& x : points) {
        if (static_cast<int>(x.size()) != spec.n)
            throw ShapeError("model_ground_state: point dimension differs from n");
        double r2 = 0.0, hp = 0.0;
        for (int j = 0; j < spec.n; ++j) {
            r2 += x[j] * x[j];
            hp += 0.5 * spec.eps(j + 1) * x[j] * x[j];
        }
        out.push_back(amp * std::exp(cplx(-0.5 * mu * r2, -nu * hp)));
    }
    return out;
}

double model_ground_state_norm(const MorseModelSpec& spec, double mu, double nu) {
    // The state is a product over axes, so the n-dimensional integral factorizes.
    const double reach = std::sqrt(2.0 * 40.0 / mu);
    double one_axis = integrate(
        [&](double x) {
            std::vector<std::vector<double>> p{std::vector<double>(1, x)};
            MorseModelSpec s1(1, 0);
            double m = std::abs(model_ground_state(s1, mu, nu, p)[0]);
            return m * m;
        },
        -reach, reach, 1e-14);
    return std::sqrt(std::pow(one_axis, spec.n));
}

CutoffNormalization cutoff_normalization(double mu, double r, const CutoffProfile& rho, int n) {
    if (!(mu > 0.0)) throw DomainError("cutoff_normalization: mu must be positive");
    if (!(r > 0.0)) throw DomainError("cutoff_normalization: r must be positive");
    if (n < 1) throw DomainError("cutoff_normalization: n must be positive");
    for (int i = 0; i <= 64; ++i) {
        double x = 3.0 * r * i / 64.0;
        double a = rho(x), b = rho(-x);
        if (!std::isfinite(a) || std::abs(a - b) > 1e-14)
            throw DomainError("cutoff_normalization: rho is not even");
        if (x <= r && std::abs(a - 1.0) > 1e-14)
            throw DomainError("cutoff_normalization: rho must equal 1 on [-r, r]");
        if (x >= 2.0 * r && a != 0.0)
            throw DomainError("cutoff_normalization: rho must vanish outside [-2r, 2r]");
    }
    // Beyond 40/mu in x^2 the Gaussian is below e^{-40}; no need to integrate further.
    const double reach = std::min(2.0 * r, std::sqrt(80.0 / mu));
    auto f = [&](double x) {
        double p = rho(x);
        return p * p * std::exp(-mu * x * x);
    };
    double half = integrate(f, 0.0, std::min(r, reach), 1e-13);
    if (reach > r) half += integrate(f, r, reach, 1e-13);
    CutoffNormalization out;
    out.a_mu = std::pow(2.0 * half, n / 2.0);
    out.reference = std::pow(kPi / mu, n / 4.0);
    double dev = std::abs(out.a_mu - out.reference);
    out.rel_deviation = dev / out.reference;
    out.log_abs_deviation = dev > 0 ? std::log(dev) : -std::numeric_limits<double>::infinity();
    return out;
}

double ModelCheck::max_rel_error() const {
    double m = 0.0;
    for (const auto& d : degrees) m = std::max(m, d.max_rel_error);
    return m;
}

double model_half_width(double mu) {
    if (!(mu > 0.0)) throw DomainError("model_half_width: mu must be positive");
    return std::max({6.0 / std::sqrt(mu), 4.0, std::sqrt(2.0 * std::log(1e12) / mu)});
}

namespace {

// Lowest `levels` eigenvalues of -f'' + (mu^2 x^2 + shift) f on N interior points.
std::vector<double> fd_levels(double mu, double shift, double L, int N, int levels) {
    const double h = 2.0 * L / (N + 1);
    std::vector<double> diag(N), off(N > 1 ? N - 1 : 1, -1.0 / (h * h));
    for (int i = 0; i < N; ++i) {
        double x = -L + (i + 1) * h;
        diag[i] = 2.0 / (h * h) + mu * mu * x * x + shift;
    }
    lapack_int m = 0, nsplit = 0;
    std::vector<double> w(N);
    std::vector<lapack_int> iblock(N), isplit(N);
    lapack_int info = LAPACKE_dstebz('I', 'B', N, 0.0, 0.0, 1, levels, 0.0, diag.data(),
                                     off.data(), &m, &nsplit, w.data(), iblock.data(),
                                     isplit.data());
    if (info != 0 || m != levels)
        throw NumericalError("dstebz failed (info " + std::to_string(info) + ")");
    return std::vector<double>(w.begin(), w.begin() + levels);
}

}  // namespace

ModelCheck numeric_model_check(int k, double mu, int N, int levels) {
    if (k < 0 || k > 1) throw DomainError("numeric_model_check: index must be 0 or 1");
    if (!(mu > 0.0)) throw DomainError("numeric_model_check: mu must be positive");
    if (N != 0 && N < 16) throw DomainError("numeric_model_check: grid too small");
    MorseModelSpec spec(1, k);
    ModelCheck out;
    out.mu = mu;
    out.k = k;
    out.L = model_half_width(mu);
    const double eps = spec.eps(1);
    const double target = 2e-5;

    // Degree d potential shift: mu * eps * (2d - 1).
    auto solve = [&](int n) {
        std::vector<std::vector<double>> r;
        for (int d = 0; d <= 1; ++d) r.push_back(fd_levels(mu, mu * eps * (2 * d - 1), out.L, n, levels));
        return r;
    };
    auto richardson = [&](const auto& coarse, const auto& fine) {
        double e = 0.0;
        for (int d = 0; d <= 1; ++d)
            for (int i = 0; i < levels; ++i)
                e = std::max(e, std::abs(coarse[d][i] - fine[d][i]) / 3.0 / mu);
        return e;
    };

    std::vector<std::vector<double>> vals;
    if (N == 0) {
        int n = 1000;
        auto coarse = solve(n);
        while (true) {
            auto fine = solve(2 * n);
            out.estimated_error = richardson(coarse, fine);
            n *= 2;
            vals = std::move(fine);
            if (out.estimated_error < target || n >= (1 << 17)) break;
            coarse = vals;
        }
        out.N = n;
    } else {
        out.N = N;
        vals = solve(N);
        out.estimated_error = richardson(solve(N / 2), vals);
    }
    out.h = 2.0 * out.L / (out.N + 1);
    out.resolved = out.estimated_error < 1e-4;
    if (!out.resolved)
        out.note = "grid too coarse: estimated relative error " + std::to_string(out.estimated_error);

    for (int d = 0; d <= 1; ++d) {
        DegreeCheck dc;
        dc.degree = d;
        auto formula = model_spectrum(spec, d, mu, levels);
        for (int i = 0; i < levels; ++i) {
            dc.numeric.push_back(vals[d][i]);
            dc.formula.push_back(formula[i].value);
            double err = std::abs(vals[d][i] - formula[i].value) / std::max(formula[i].value, mu);
            dc.max_rel_error = std::max(dc.max_rel_error, err);
            if (vals[d][i] < mu) ++dc.ground_multiplicity;
        }
        out.degrees.push_back(std::move(dc));
    }
    return out;
}

}  // namespace wn
