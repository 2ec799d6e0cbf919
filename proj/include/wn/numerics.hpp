#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace wn {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

struct GaussRule {
    std::vector<double> nodes;    // on [-1, 1], ascending
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule; nodes from Boost's Legendre zeros.
GaussRule gauss_legendre(unsigned n);

// Adaptive Gauss-Kronrod on [a, b]; throws NumericalError if the error
// estimate stays above tol relative to the integral magnitude.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13);

// C-infinity transition: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smooth_step(double x);

// Even cutoff: 1 on [-r, r], 0 outside [-2r, 2r].
double cutoff(double x, double r);

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// Evaluates fn(i) for i in [0, n) on a few worker threads. Results land in
// index order, so any later reduction is independent of scheduling.
template <class T>
std::vector<T> parallel_map(std::size_t n, const std::function<T(std::size_t)>& fn) {
    std::vector<T> out(n);
    unsigned workers = std::max(1u, std::thread::hardware_concurrency());
    if (workers == 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) out[i] = fn(i);
        return out;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) out[i] = fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace wn
