#include "wn/circle_witten.hpp"

#include "wn/errors.hpp"
#include "wn/model_operator.hpp"

#include <boost/math/special_functions/trigamma.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace wn {

std::vector<int> CircleWittenSystem::zero_counts() const {
    std::vector<int> c(2, 0);
    for (const auto& z : zeros) ++c[static_cast<std::size_t>(z.index)];
    return c;
}

namespace {

void check_grid(int N) {
    if (N < 8 || (N & (N - 1)) != 0)
        throw ConfigError("grid size " + std::to_string(N) + " is not a power of two >= 8");
}

std::vector<double> grid(int N) {
    std::vector<double> t(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) t[static_cast<std::size_t>(j)] = 2.0 * kPi * j / N;
    return t;
}

const MorseProfile& need_profile(const CircleWittenSystem& sys, const char* what) {
    if (!sys.profile) throw UnsupportedError(std::string(what) + " needs a Morse profile");
    return *sys.profile;
}

double arc_integral(const MorseProfile& p, const MorseProfile::Arc& a, bool absolute) {
    double acc = 0.0;
    auto br = p.arc_breaks(a);
    for (std::size_t j = 0; j + 1 < br.size(); ++j) {
        if (!(br[j + 1] > br[j])) continue;
        acc += integrate(
            [&](double s) {
                double e = p.arc_eta(a, s);
                return absolute ? std::abs(e) : e;
            },
            br[j], br[j + 1], 1e-13);
    }
    return acc;
}

SingularTriples circle_triples(const CircleWittenSystem& sys, SpectralParameter z) {
    return singular_triples(assemble_circle_complex(sys, z).d[0]);
}

// g_j = u_j^H diag(eta) v_j for the leading `count` triples.
CVector eta_pairings(const CircleWittenSystem& sys, const SingularTriples& tr, Eigen::Index count) {
    CVector g(count);
    for (Eigen::Index j = 0; j < count; ++j) {
        cplx acc = 0.0;
        for (int i = 0; i < sys.N; ++i) acc += std::conj(tr.U(i, j)) * sys.eta[i] * tr.V(i, j);
        g[j] = acc;
    }
    return g;
}

}  // namespace

CircleWittenSystem make_circle_system(const std::vector<ZeroSpec>& zeros, double c, double r, int N,
                                      const std::string& label) {
    check_grid(N);
    CircleWittenSystem s;
    s.N = N;
    s.c = c;
    s.r = r;
    s.label = label;
    s.profile = std::make_shared<const MorseProfile>(zeros, c, r);
    s.zeros = s.profile->zeros();
    s.theta = grid(N);
    for (double t : s.theta) {
        s.eta.push_back(s.profile->eta(t));
        s.h.push_back(s.profile->h(t));
    }
    return s;
}

CircleWittenSystem make_uniform_system(int N, double c) {
    check_grid(N);
    CircleWittenSystem s;
    s.N = N;
    s.c = c;
    s.theta = grid(N);
    s.eta.assign(static_cast<std::size_t>(N), c);
    s.h.assign(static_cast<std::size_t>(N), 0.0);
    s.label = "uniform";
    return s;
}

CircleWittenSystem resample(const CircleWittenSystem& sys, int N) {
    if (!sys.profile) return make_uniform_system(N, sys.c);
    return make_circle_system(sys.zeros, sys.c, sys.r, N, sys.label);
}

CMatrix fourier_derivative(int N) {
    check_grid(N);
    CMatrix D(N, N);
    for (int j = 0; j < N; ++j)
        for (int l = 0; l < N; ++l) {
            int k = j - l;
            double sgn = (k % 2 == 0) ? 1.0 : -1.0;
            double re = k == 0 ? 0.0 : 0.5 * sgn / std::tan(k * kPi / N);
            D(j, l) = cplx(re, 0.5 * sgn);
        }
    return D;
}

GradedMatrixComplex assemble_circle_complex(const CircleWittenSystem& sys, SpectralParameter z) {
    GradedMatrixComplex cx;
    cx.dims = {sys.N, sys.N};
    CMatrix d = fourier_derivative(sys.N);
    for (int j = 0; j < sys.N; ++j) d(j, j) += z.z() * sys.eta[static_cast<std::size_t>(j)];
    cx.d.push_back(std::move(d));
    cx.label = sys.label.empty() ? "circle" : sys.label;
    std::ostringstream src;
    src << "circle N=" << sys.N << " c=" << sys.c << " z=" << z.mu << "+" << z.nu << "i";
    cx.source = src.str();
    return cx;
}

BettiReport betti_novikov(const CircleWittenSystem& sys, SpectralParameter z) {
    auto cx = assemble_circle_complex(sys, z);
    SingularTriples tr = singular_triples(cx.d[0]);
    BettiReport b;
    b.b0 = sys.N - static_cast<int>(tr.rank);
    b.b1 = sys.N - static_cast<int>(tr.rank);
    double tol = rank_tolerance(tr.sigma, sys.N, sys.N);
    for (Eigen::Index j = 0; j < tr.sigma.size(); ++j)
        if (tr.sigma[j] > tol / 10 && tr.sigma[j] < tol * 10)
            b.warnings.push_back("AmbiguousKernel: singular value " + std::to_string(tr.sigma[j]) +
                                 " within 10x of the rank threshold " + std::to_string(tol));
    return b;
}

double zeta_tail_factor(const CircleWittenSystem& sys) {
    double e2 = 0.0;
    for (double e : sys.eta) e2 += e * e;
    e2 /= sys.N;
    const double half = sys.N / 2.0;
    return e2 * (boost::math::trigamma(half) + boost::math::trigamma(half + 1.0));
}

ZetaReport zeta_invariant(const CircleWittenSystem& sys, SpectralParameter z,
                          const CircleZetaOptions& opt) {
    ZetaReport rep;
    rep.z = z;
    rep.N = sys.N;
    if (opt.t_sequence.empty())
        for (int j = 0; j < 12; ++j) rep.t.push_back(std::ldexp(1.0, -j));
    else
        rep.t = opt.t_sequence;
    for (double t : rep.t)
        if (!(t > 0.0)) throw DomainError("zeta_invariant: t values must be positive");

    SingularTriples tr = circle_triples(sys, z);
    CVector g = eta_pairings(sys, tr, tr.rank);
    for (double t : rep.t) {
        cplx acc = 0.0;
        for (Eigen::Index j = 0; j < tr.rank; ++j)
            acc -= std::exp(-t * tr.sigma[j] * tr.sigma[j]) * g[j] / tr.sigma[j];
        rep.raw.push_back(acc);
    }
    if (rep.raw.size() >= 2) {
        const std::size_t n = rep.raw.size();
        double q = std::sqrt(rep.t[n - 1] / rep.t[n - 2]);
        rep.richardson = (rep.raw[n - 1] - q * rep.raw[n - 2]) / (1.0 - q);
    }
    for (Eigen::Index j = 0; j < tr.rank; ++j) {
        cplx term = -g[j] / tr.sigma[j];
        rep.raw_limit += term;
        if (tr.sigma[j] * tr.sigma[j] <= 1.0) rep.zeta_sm += term;
    }
    rep.tail = opt.tail_correction ? z.z() * zeta_tail_factor(sys) : 0.0;
    rep.zeta = rep.raw_limit - rep.tail;
    rep.zeta_la = rep.zeta - rep.zeta_sm;

    int small = 0;
    for (Eigen::Index j = 0; j < tr.sigma.size(); ++j) small += tr.sigma[j] * tr.sigma[j] <= 1.0;
    rep.small_counts = {small, small};
    auto zc = sys.zero_counts();
    rep.small_matches_zeros = small == zc[0] && small == zc[1];
    if (!rep.small_matches_zeros)
        rep.warnings.push_back("small spectrum count " + std::to_string(small) +
                               " differs from the zero counts; mu may be below the asymptotic regime");

    if (opt.check_convergence && sys.N >= 16) {
        CircleZetaOptions sub = opt;
        sub.check_convergence = false;
        ZetaReport coarse = zeta_invariant(resample(sys, sys.N / 2), z, sub);
        rep.coarse_zeta = coarse.zeta;
        rep.convergence_change = std::abs(rep.zeta - coarse.zeta) / std::max(1.0, std::abs(rep.zeta));
        if (rep.convergence_change > opt.convergence_tol) {
            std::ostringstream raw;
            raw.precision(17);
            raw << "N=" << sys.N << " zeta=" << rep.zeta << " N/2 zeta=" << coarse.zeta << " t/raw:";
            for (std::size_t i = 0; i < rep.t.size(); ++i) raw << ' ' << rep.t[i] << ':' << rep.raw[i];
            throw ConvergenceError("zeta_invariant: grid refinement changed the value by " +
                                       std::to_string(rep.convergence_change),
                                   raw.str());
        }
    }
    return rep;
}

IdentityResidual exact_identity_residual(const CircleWittenSystem& sys, SpectralParameter z, double t) {
    if (!sys.exact()) throw UnsupportedError("exact_identity_residual needs an exact form (c = 0)");
    if (!(t > 0.0)) throw DomainError("exact_identity_residual: t must be positive");
    SingularTriples tr = circle_triples(sys, z);
    CVector g = eta_pairings(sys, tr, tr.rank);
    IdentityResidual out;
    double mag = 0.0;
    for (Eigen::Index j = 0; j < tr.rank; ++j) {
        double w = std::exp(-t * tr.sigma[j] * tr.sigma[j]);
        out.lhs -= w * g[j] / tr.sigma[j];
        cplx hv = 0.0, hu = 0.0;
        for (int i = 0; i < sys.N; ++i) {
            hv += std::norm(tr.V(i, j)) * sys.h[i];
            hu += std::norm(tr.U(i, j)) * sys.h[i];
        }
        out.rhs += w * (hv - hu);
        mag += w * std::abs(g[j]) / tr.sigma[j];
    }
    out.residual = std::abs(out.lhs + out.rhs);
    out.scale = std::max(1.0, mag);
    return out;
}

CircleInstantonData instanton_data_circle(const CircleWittenSystem& sys) {
    const MorseProfile& prof = need_profile(sys, "instanton_data_circle");
    const auto& arcs = prof.arcs();
    const int m = static_cast<int>(sys.zeros.size());
    CircleInstantonData out;
    for (int i = 0; i < m; ++i) out.graph.add_vertex("x" + std::to_string(i), sys.zeros[i].index);
    out.M.assign(static_cast<std::size_t>(m), 0.0);
    std::vector<double> maxima;
    for (int i = 0; i < m; ++i) {
        if (sys.zeros[i].index != 1) continue;
        int right = (i + 1) % m, left = (i - 1 + m) % m;
        double w_right = arc_integral(prof, arcs[i], false);
        double w_left = -arc_integral(prof, arcs[left], false);
        for (double w : {w_right, w_left})
            if (!(w < 0.0))
                throw LyapunovError("instanton from x" + std::to_string(i) + " has weight " +
                                    std::to_string(w) + " >= 0");
        // Orientation of the unstable arc by increasing angle: the right end enters with +.
        out.graph.add_edge(i, right, +1, w_right);
        out.graph.add_edge(i, left, -1, w_left);
        out.M[static_cast<std::size_t>(i)] = -std::max(w_right, w_left);
        maxima.push_back(out.M[static_cast<std::size_t>(i)]);
    }
    out.tight = !maxima.empty();
    for (double v : maxima)
        if (std::abs(v - maxima.front()) > 1e-9 * std::max(1.0, std::abs(v))) out.tight = false;
    if (out.tight) out.a1 = maxima.front();
    return out;
}

double exact_zero_sum(const CircleWittenSystem& sys) {
    double s = 0.0;
    for (const auto& z : sys.zeros) s += (z.index % 2 ? -1.0 : 1.0) * z.value;
    return s;
}

int calibrate_mathai_quillen_sign() {
    static const int sign = [] {
        MorseProfile ref({{0.0, 1.0, 1}, {kPi, -1.0, 0}}, 0.0, 0.35);
        double total = 0.0;
        for (const auto& a : ref.arcs()) total += arc_integral(ref, a, true);
        const double oracle = -2.0;  // h(min) - h(max)
        int best = 0;
        double err = 1e300;
        for (int s : {1, -1}) {
            double e = std::abs(s * 0.5 * total - oracle);
            if (e < err) {
                err = e;
                best = s;
            }
        }
        if (err > 1e-8)
            throw ConventionError("no sign of X*psi reproduces the exact-form limit (error " +
                                  std::to_string(err) + ")");
        return best;
    }();
    return sign;
}

MathaiQuillen mathai_quillen_1d(const CircleWittenSystem& sys) {
    MathaiQuillen out;
    out.sign = calibrate_mathai_quillen_sign();
    for (double e : sys.eta) out.pullback.push_back(e == 0.0 ? 0.0 : out.sign * 0.5 * (e > 0 ? 1.0 : -1.0));
    double total = 0.0;
    if (sys.profile) {
        for (const auto& a : sys.profile->arcs()) total += arc_integral(*sys.profile, a, true);
    } else {
        total = 2.0 * kPi * std::abs(sys.c);
    }
    out.z_la = out.sign * 0.5 * total;
    if (sys.profile && sys.exact()) {
        out.calibration_error = std::abs(out.z_la - exact_zero_sum(sys));
        if (out.calibration_error > 1e-8 * std::max(1.0, total))
            throw ConventionError("calibrated z_la disagrees with the exact-form value by " +
                                  std::to_string(out.calibration_error));
    }
    return out;
}

TrigInterpolant::TrigInterpolant(const CVector& f) : N_(static_cast<int>(f.size())) {
    if (N_ < 2 || N_ % 2) throw ShapeError("TrigInterpolant: need an even number of samples");
    for (int k = -N_ / 2 + 1; k <= N_ / 2; ++k) {
        cplx acc = 0.0;
        for (int j = 0; j < N_; ++j) acc += f[j] * std::polar(1.0, -2.0 * kPi * k * j / N_);
        coef_.push_back(acc / static_cast<double>(N_));
    }
}

cplx TrigInterpolant::operator()(double theta) const {
    const cplx step = std::polar(1.0, theta);
    cplx w = std::polar(1.0, (-N_ / 2 + 1) * theta), acc = 0.0;
    for (const auto& c : coef_) {
        acc += c * w;
        w *= step;
    }
    return acc;
}

cplx phi_map_circle(const CircleWittenSystem& sys, SpectralParameter z, const CVector& samples,
                    int degree, int zero) {
    const MorseProfile& prof = need_profile(sys, "phi_map_circle");
    const int m = static_cast<int>(sys.zeros.size());
    if (zero < 0 || zero >= m) throw DomainError("phi_map_circle: no such zero");
    if (samples.size() != sys.N) throw DataError("phi_map_circle: form is not sampled on the system grid");
    const auto& p = sys.zeros[zero];
    if (degree != p.index) throw DomainError("phi_map_circle: form degree differs from the Morse index");
    TrigInterpolant omega(samples);
    if (p.index == 0) return omega(p.theta);

    double lo = zero > 0 ? sys.zeros[zero - 1].theta : sys.zeros[m - 1].theta - 2.0 * kPi;
    double hi = zero + 1 < m ? sys.zeros[zero + 1].theta : sys.zeros[0].theta + 2.0 * kPi;
    const double Hp = prof.H(p.theta);
    static const GaussRule rule = gauss_legendre(40);
    const int panels = 40;
    cplx acc = 0.0;
    for (int k = 0; k < panels; ++k) {
        double a = lo + (hi - lo) * k / panels, b = lo + (hi - lo) * (k + 1) / panels;
        double half = 0.5 * (b - a), mid = 0.5 * (a + b);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double t = mid + half * rule.nodes[i];
            acc += rule.weights[i] * half * std::exp(z.z() * (prof.H(t) - Hp)) * omega(t);
        }
    }
    return acc;
}

CVector cutoff_state(const CircleWittenSystem& sys, int zero, double mu, double nu) {
    if (zero < 0 || zero >= static_cast<int>(sys.zeros.size())) throw DomainError("cutoff_state: no such zero");
    const auto& p = sys.zeros[zero];
    const double rr = 0.5 * sys.r;
    auto rho = [rr](double x) { return cutoff(x, rr); };
    const double a_mu = cutoff_normalization(mu, rr, rho, 1).a_mu;
    CVector e(sys.N);
    for (int j = 0; j < sys.N; ++j) {
        double x = std::remainder(sys.theta[j] - p.theta, 2.0 * kPi);
        double hp = (p.index == 1 ? -0.5 : 0.5) * x * x;
        e[j] = rho(x) * std::exp(cplx(-0.5 * mu * x * x, -nu * hp)) / a_mu;
    }
    return e;
}

PhiPsiReport phi_psi_report(const CircleWittenSystem& sys, SpectralParameter z) {
    need_profile(sys, "phi_psi_report");
    SingularTriples tr = circle_triples(sys, z);
    Eigen::Index ns = 0;
    for (Eigen::Index j = 0; j < tr.sigma.size(); ++j) ns += tr.sigma[j] * tr.sigma[j] <= 1.0;
    CMatrix Vs = tr.V.rightCols(ns), Us = tr.U.rightCols(ns);

    const int m = static_cast<int>(sys.zeros.size());
    PhiPsiReport rep;
    rep.z = z;
    rep.matrix.assign(static_cast<std::size_t>(m), std::vector<cplx>(static_cast<std::size_t>(m), 0.0));
    for (int p = 0; p < m; ++p) {
        int k = sys.zeros[p].index;
        CVector e = cutoff_state(sys, p, z.mu, z.nu);
        CVector pe = k == 0 ? CVector(Vs * (Vs.adjoint() * e)) : CVector(Us * (Us.adjoint() * e));
        double expected = std::pow(kPi / z.mu, k / 2.0) * std::pow(z.mu / kPi, 0.25);
        rep.expected.push_back(expected);
        for (int q = 0; q < m; ++q) {
            if (sys.zeros[q].index != k) continue;
            cplx v = phi_map_circle(sys, z, pe, k, q);
            rep.matrix[q][p] = v;
            if (q == p)
                rep.max_diag_deviation = std::max(rep.max_diag_deviation, std::abs(v / expected - 1.0));
            else
                rep.max_offdiag = std::max(rep.max_offdiag, std::abs(v) / expected);
        }
    }
    return rep;
}

GapReport spectral_gap_report(const CircleWittenSystem& sys, const std::vector<double>& mus, double nu) {
    GapReport rep;
    rep.nu = nu;
    std::vector<double> xs, ys;
    rep.min_large_over_mu = 1e300;
    for (double mu : mus) {
        SingularTriples tr = circle_triples(sys, SpectralParameter(mu, nu));
        GapRow row;
        row.mu = mu;
        row.min_large = 1e300;
        int small = 0;
        for (Eigen::Index j = 0; j < tr.sigma.size(); ++j) {
            double lam = tr.sigma[j] * tr.sigma[j];
            if (lam <= 1.0) {
                ++small;
                if (j < tr.rank) {
                    row.small_values.push_back(lam);
                    row.max_small = std::max(row.max_small, lam);
                }
            } else {
                row.min_large = std::min(row.min_large, lam);
            }
        }
        std::sort(row.small_values.begin(), row.small_values.end());
        row.small_counts = {small, small};
        if (row.max_small > 0.0) {
            xs.push_back(mu);
            ys.push_back(std::log(row.max_small));
        }
        if (mu > 0) rep.min_large_over_mu = std::min(rep.min_large_over_mu, row.min_large / mu);
        rep.rows.push_back(std::move(row));
    }
    if (xs.size() >= 2) {
        LineFit f = fit_line(xs, ys);
        rep.log_slope = f.slope;
        rep.log_fit_r2 = f.r2;
        rep.fitted = true;
    }
    return rep;
}

double sobolev_ratio(const CircleWittenSystem& sys, int m, double nu, const CVector& alpha) {
    if (m < 1) throw DomainError("sobolev_ratio: m must exceed 1/2");
    if (alpha.size() != sys.N) throw ShapeError("sobolev_ratio: alpha not on the system grid");
    CMatrix d = assemble_circle_complex(sys, SpectralParameter(0.0, nu)).d[0];
    const double l2 = std::sqrt(2.0 * kPi / sys.N);
    double sup = alpha.cwiseAbs().maxCoeff();
    double norm = 0.0;
    CVector cur = alpha;
    for (int k = 0; k <= m; ++k) {
        norm += l2 * cur.norm();
        cur = (k % 2 == 0) ? CVector(d * cur) : CVector(d.adjoint() * cur);
    }
    return norm > 0 ? sup / norm : 0.0;
}

SobolevReport sobolev_constant_probe(const CircleWittenSystem& sys, int m, const std::vector<double>& nus,
                                     int trials, std::uint64_t seed) {
    if (m < 1) throw DomainError("sobolev_constant_probe: m must exceed 1/2");
    SobolevReport rep;
    rep.m = m;
    const int N = sys.N;
    for (double nu : nus) {
        SobolevRow row;
        row.nu = nu;
        auto consider = [&](const CVector& a, const std::string& tag) {
            double r = sobolev_ratio(sys, m, nu, a);
            if (r > row.max_ratio) {
                row.max_ratio = r;
                row.argmax = tag;
            }
        };
        consider(CVector::Ones(N), "constant");

        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss;
        for (int t = 0; t < trials; ++t) {
            CVector a = CVector::Zero(N);
            for (int k = -N / 4; k <= N / 4; ++k) {
                cplx ck(gauss(rng), gauss(rng));
                ck /= std::pow(1.0 + std::abs(k), m + 1.0);
                for (int j = 0; j < N; ++j) a[j] += ck * std::polar(1.0, k * sys.theta[j]);
            }
            consider(a, "random");
            CVector b = a;
            for (int j = 0; j < N; ++j) b[j] *= std::polar(1.0, -nu * sys.h[j]);
            consider(b, "random-gauged");
        }

        // Maximizers of the Hilbertian version of the norm at a few points.
        CMatrix d = assemble_circle_complex(sys, SpectralParameter(0.0, nu)).d[0];
        CMatrix G = CMatrix::Zero(N, N), A = CMatrix::Identity(N, N);
        for (int k = 0; k <= m; ++k) {
            G += A.adjoint() * A;
            A = (k % 2 == 0) ? CMatrix(d * A) : CMatrix(d.adjoint() * A);
        }
        Eigen::LLT<CMatrix> llt(G);
        for (int j = 0; j < N; j += std::max(1, N / 16)) {
            CVector e = CVector::Zero(N);
            e[j] = 1.0;
            consider(llt.solve(e), "green");
        }
        rep.rows.push_back(row);
    }
    double lo = 1e300, hi = 0.0;
    for (const auto& r : rep.rows) {
        lo = std::min(lo, r.max_ratio);
        hi = std::max(hi, r.max_ratio);
    }
    rep.spread = rep.rows.empty() || lo == 0.0 ? 0.0 : hi / lo;
    return rep;
}

SmallCompression circle_projection_law(const CircleWittenSystem& sys, SpectralParameter z, double a1) {
    SingularTriples tr = circle_triples(sys, z);
    std::vector<Eigen::Index> idx;
    for (Eigen::Index j = 0; j < tr.rank; ++j)
        if (tr.sigma[j] * tr.sigma[j] <= 1.0) idx.push_back(j);
    const Eigen::Index n = static_cast<Eigen::Index>(idx.size());
    SmallCompression out;
    out.block = CMatrix::Zero(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b) {
            cplx acc = 0.0;
            for (int i = 0; i < sys.N; ++i) acc += std::conj(tr.U(i, idx[a])) * sys.eta[i] * tr.V(i, idx[b]);
            out.block(a, b) = acc / tr.sigma[idx[b]];
        }
    const double law = 1.0 - std::exp(a1);
    double best = 1e300;
    for (double s : {1.0, -1.0}) {
        double dev = (out.block - s * law * CMatrix::Identity(n, n)).norm();
        if (dev < best) {
            best = dev;
            out.sign = s;
        }
    }
    out.deviation = best;
    return out;
}

}  // namespace wn
