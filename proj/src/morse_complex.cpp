#include "wn/morse_complex.hpp"

#include "wn/errors.hpp"
#include "wn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace wn {

namespace {

// Matrix of sum sign * e^{z (w + shift)} over edges from index k+1 to index k.
CMatrix level_matrix(const InstantonGraph& g, int k, cplx z, double shift) {
    auto c = g.counts();
    auto slot = g.slot();
    CMatrix m = CMatrix::Zero(c[static_cast<std::size_t>(k + 1)], c[static_cast<std::size_t>(k)]);
    for (const auto& e : g.edges) {
        if (g.vertices[e.p].index != k + 1) continue;
        m(slot[e.p], slot[e.q]) += static_cast<double>(e.sign) * std::exp(z * (e.weight + shift));
    }
    return m;
}

SingularTriples scaled_triples(const CMatrix& m) {
    double s = m.size() ? m.cwiseAbs().maxCoeff() : 0.0;
    SingularTriples t = singular_triples(s > 0 ? CMatrix(m / s) : m);
    t.sigma *= s > 0 ? s : 1.0;
    return t;
}

}  // namespace

void check_complex_symbolic(const InstantonGraph& g, double weight_tol) {
    auto out = g.outgoing();
    for (int p = 0; p < static_cast<int>(g.vertices.size()); ++p) {
        if (g.vertices[p].index < 2) continue;
        // endpoint r -> list of (total weight, sign)
        std::map<int, std::vector<std::pair<double, int>>> paths;
        for (int e1 : out[p]) {
            const auto& a = g.edges[e1];
            for (int e2 : out[a.q]) {
                const auto& b = g.edges[e2];
                paths[b.q].push_back({a.weight + b.weight, a.sign * b.sign});
            }
        }
        for (auto& [r, list] : paths) {
            std::sort(list.begin(), list.end());
            std::size_t i = 0;
            while (i < list.size()) {
                std::size_t j = i;
                int sum = 0;
                while (j < list.size() &&
                       std::abs(list[j].first - list[i].first) <= weight_tol * std::max(1.0, std::abs(list[i].first)))
                    sum += list[j++].second;
                if (sum != 0)
                    throw NotAComplex("d^2 != 0 between " + g.vertices[p].id + " and " + g.vertices[r].id +
                                      " (2-paths of total weight " + std::to_string(list[i].first) +
                                      " do not cancel)");
                i = j;
            }
        }
    }
}

GradedMatrixComplex build_differential(const InstantonGraph& g, SpectralParameter z) {
    g.validate(true);
    check_complex_symbolic(g);
    GradedMatrixComplex cx;
    cx.dims = g.counts();
    for (int k = 0; k + 1 < static_cast<int>(cx.dims.size()); ++k) cx.d.push_back(level_matrix(g, k, z.z(), 0.0));
    cx.label = "morse";
    cx.source = "instanton graph with " + std::to_string(g.vertices.size()) + " vertices";
    return cx;
}

int RankProfile::euler() const {
    int s = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) s += (k % 2 ? -1 : 1) * counts[k];
    return s;
}

RankProfile rank_sequence(const std::vector<int>& counts, const std::vector<int>& betti) {
    if (counts.size() != betti.size() || counts.empty())
        throw ShapeError("rank_sequence: counts and betti numbers need the same nonzero length");
    RankProfile r;
    r.counts = counts;
    r.betti = betti;
    int chi_x = 0, chi_b = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (counts[k] < 0 || betti[k] < 0) throw DomainError("rank_sequence: negative input");
        chi_x += (k % 2 ? -1 : 1) * counts[k];
        chi_b += (k % 2 ? -1 : 1) * betti[k];
    }
    if (chi_x != chi_b)
        throw InfeasibleError("rank_sequence: Euler characteristics differ (" + std::to_string(chi_x) + " vs " +
                              std::to_string(chi_b) + ")");
    const std::size_t n = counts.size();
    r.m.resize(n);
    r.m1.assign(n, 0);
    r.m2.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
        r.m[k] = counts[k] - betti[k];
        if (r.m[k] < 0) throw InfeasibleError("rank_sequence: m_" + std::to_string(k) + " < 0");
        if (k > 0) r.m1[k] = r.m2[k - 1];
        r.m2[k] = r.m[k] - r.m1[k];
        if (r.m2[k] < 0) throw InfeasibleError("rank_sequence: m2_" + std::to_string(k) + " < 0");
    }
    if (r.m2[n - 1] != 0) throw InfeasibleError("rank_sequence: top degree leaves a nonzero m2");
    return r;
}

int numeric_rank(const CMatrix& m) { return static_cast<int>(scaled_triples(m).rank); }

HodgeRanks hodge_ranks_numeric(const InstantonGraph& g, SpectralParameter z) {
    GradedMatrixComplex cx = build_differential(g, z);
    const int nd = static_cast<int>(cx.dims.size());
    std::vector<SingularTriples> tr;
    for (const auto& d : cx.d) tr.push_back(scaled_triples(d));
    HodgeRanks h;
    for (int k = 0; k < nd; ++k) {
        const Eigen::Index n = cx.dims[k];
        CMatrix p1 = CMatrix::Zero(n, n), p2 = CMatrix::Zero(n, n);
        int rin = 0, rout = 0;
        if (k > 0) {
            rin = static_cast<int>(tr[k - 1].rank);
            auto u = tr[k - 1].U.leftCols(rin);
            p1 = u * u.adjoint();
        }
        if (k + 1 < nd) {
            rout = static_cast<int>(tr[k].rank);
            auto v = tr[k].V.leftCols(rout);
            p2 = v * v.adjoint();
        }
        CMatrix id = CMatrix::Identity(n, n);
        CMatrix p0 = id - p1 - p2;
        for (const CMatrix* p : {&p0, &p1, &p2}) {
            h.max_projection_defect = std::max(h.max_projection_defect, (*p * *p - *p).norm());
            h.max_projection_defect = std::max(h.max_projection_defect, (*p - p->adjoint()).norm());
        }
        h.max_projection_defect = std::max(h.max_projection_defect, (p1 * p2).norm());
        h.ker.push_back(static_cast<int>(n) - rin - rout);
        h.im_d.push_back(rin);
        h.im_delta.push_back(rout);
        h.pi0.push_back(std::move(p0));
        h.pi1.push_back(std::move(p1));
        h.pi2.push_back(std::move(p2));
    }
    for (std::size_t k = 0; k < tr.size(); ++k) {
        const auto& s = tr[k].sigma;
        double tol = rank_tolerance(s, cx.d[k].rows(), cx.d[k].cols());
        for (Eigen::Index j = 0; j < s.size(); ++j)
            if (s[j] > tol / 10 && s[j] < tol * 10)
                h.warnings.push_back("AmbiguousKernel: d_" + std::to_string(k) + " singular value " +
                                     std::to_string(s[j]) + " near the rank threshold");
    }
    return h;
}

Tightness tightness_check(const InstantonGraph& g, double tol) {
    const int n = g.top_index();
    auto out = g.outgoing();
    Tightness t;
    t.M_vertex.assign(g.vertices.size(), std::numeric_limits<double>::quiet_NaN());
    t.M_lo.assign(static_cast<std::size_t>(n) + 1, std::numeric_limits<double>::infinity());
    t.M_hi.assign(static_cast<std::size_t>(n) + 1, -std::numeric_limits<double>::infinity());
    for (int p = 0; p < static_cast<int>(g.vertices.size()); ++p) {
        int k = g.vertices[p].index;
        if (k == 0) continue;
        if (out[p].empty()) throw StructureError("vertex " + g.vertices[p].id + " of index " + std::to_string(k) +
                                                 " has no outgoing instanton");
        double mx = -std::numeric_limits<double>::infinity();
        for (int e : out[p]) mx = std::max(mx, g.edges[e].weight);
        t.M_vertex[p] = -mx;
        t.M_lo[k] = std::min(t.M_lo[k], -mx);
        t.M_hi[k] = std::max(t.M_hi[k], -mx);
    }
    t.tight = true;
    t.a.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        if (!std::isfinite(t.M_lo[k])) continue;  // no vertex of this index
        if (t.M_hi[k] - t.M_lo[k] > tol * std::max(1.0, std::abs(t.M_hi[k]))) t.tight = false;
        t.a[k] = t.M_lo[k];
    }
    return t;
}

namespace {

const Tightness& require_tight(const Tightness& t) {
    if (!t.tight) throw StateError("a_k unavailable: the graph is not tight");
    return t;
}

}  // namespace

LeadingComplex leading_complex(const InstantonGraph& g, const std::vector<double>& mus, double nu) {
    g.validate(true);
    Tightness t = tightness_check(g);
    require_tight(t);
    const int n = g.top_index();
    auto c = g.counts();
    auto slot = g.slot();
    LeadingComplex lc;
    lc.predicted_slope = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= n; ++k) {
        Eigen::MatrixXd d = Eigen::MatrixXd::Zero(c[k], c[k - 1]);
        for (const auto& e : g.edges) {
            if (g.vertices[e.p].index != k) continue;
            if (std::abs(e.weight + t.a[k]) <= 1e-9 * std::max(1.0, t.a[k])) {
                d(slot[e.p], slot[e.q]) += e.sign;
            } else {
                lc.has_subleading = true;
                lc.predicted_slope = std::max(lc.predicted_slope, e.weight + t.a[k]);
            }
        }
        lc.delta_lead.push_back(d.transpose());
        lc.d_lead.push_back(std::move(d));
    }
    for (std::size_t k = 0; k + 1 < lc.d_lead.size(); ++k)
        if ((lc.d_lead[k + 1] * lc.d_lead[k]).cwiseAbs().maxCoeff() != 0.0)
            throw StructureError("leading complex does not square to zero at degree " + std::to_string(k + 1));
    std::vector<double> xs, ys;
    for (double mu : mus) {
        cplx z(mu, nu);
        double diff = 0.0;
        for (int k = 1; k <= n; ++k) {
            CMatrix full = level_matrix(g, k - 1, z, t.a[k]);
            diff = std::max(diff, (full - lc.d_lead[k - 1].cast<cplx>()).norm());
        }
        lc.mus.push_back(mu);
        lc.difference.push_back(diff);
        if (diff > 0.0) {
            xs.push_back(mu);
            ys.push_back(std::log(diff));
        }
    }
    if (!lc.has_subleading) lc.predicted_slope = 0.0;
    if (xs.size() >= 2) lc.fitted_slope = fit_line(xs, ys).slope;
    return lc;
}

std::vector<std::vector<double>> small_spectrum_window(const InstantonGraph& g, SpectralParameter z) {
    g.validate(true);
    check_complex_symbolic(g);
    Tightness t = tightness_check(g);
    require_tight(t);
    const int n = g.top_index();
    std::vector<std::vector<double>> out(static_cast<std::size_t>(n) + 1);
    for (int k = 1; k <= n; ++k) {
        SingularTriples tr = singular_triples(level_matrix(g, k - 1, z.z(), t.a[k]));
        for (Eigen::Index j = 0; j < tr.rank; ++j) out[k].push_back(tr.sigma[j] * tr.sigma[j]);
        std::sort(out[k].begin(), out[k].end());
    }
    return out;
}

WindowSweep window_sweep(const InstantonGraph& g, const std::vector<double>& mus, double nu) {
    WindowSweep w;
    w.mus = mus;
    const int n = g.top_index();
    w.values.assign(static_cast<std::size_t>(n) + 1, {});
    for (double mu : mus) {
        auto win = small_spectrum_window(g, SpectralParameter(mu, nu));
        for (int k = 0; k <= n; ++k) w.values[k].push_back(win[k]);
    }
    w.band_lo.assign(static_cast<std::size_t>(n) + 1, 0.0);
    w.band_hi.assign(static_cast<std::size_t>(n) + 1, 0.0);
    w.max_relative_drift.assign(static_cast<std::size_t>(n) + 1, 0.0);
    for (int k = 1; k <= n; ++k) {
        double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
        for (const auto& row : w.values[k])
            for (double v : row) {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        w.band_lo[k] = std::isfinite(lo) ? lo : 0.0;
        w.band_hi[k] = hi;
        const std::size_t slots = w.values[k].empty() ? 0 : w.values[k].front().size();
        double drift = 0.0;
        for (const auto& row : w.values[k])
            if (row.size() != slots) drift = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < slots && std::isfinite(drift); ++j) {
            double a = std::numeric_limits<double>::infinity(), b = 0.0;
            for (const auto& row : w.values[k]) {
                a = std::min(a, row[j]);
                b = std::max(b, row[j]);
            }
            drift = std::max(drift, (b - a) / a);
        }
        w.max_relative_drift[k] = drift;
    }
    return w;
}

ZInvariants z_invariants(int n, const std::vector<double>& a, const RankProfile& prof) {
    if (static_cast<int>(a.size()) < n + 1) throw StateError("z_invariants: a_k missing");
    if (static_cast<int>(prof.m1.size()) < n + 1) throw ShapeError("z_invariants: rank profile too short");
    ZInvariants z;
    for (int k = 1; k <= n; ++k) {
        double sgn = k % 2 ? -1.0 : 1.0;
        z.z_sm += sgn * (1.0 - std::exp(a[k])) * prof.m1[k];
        z.minus_z_sm_neg -= sgn * (1.0 - std::exp(a[n - k + 1])) * prof.m1[k];
        z.lemma_variant -= sgn * std::exp(a[k]) * prof.m1[k];
    }
    z.lemma_applicable = n % 2 == 0;
    for (int k = 0; k <= n && z.lemma_applicable; ++k)
        if (prof.m[k] != prof.m[n - k]) z.lemma_applicable = false;
    z.lemma_agrees = std::abs(z.lemma_variant - z.z_sm) <= 1e-9 * std::max(1.0, std::abs(z.z_sm));
    return z;
}

ZInvariants z_invariants(const InstantonGraph& g, const RankProfile& prof) {
    Tightness t = tightness_check(g);
    require_tight(t);
    return z_invariants(g.top_index(), t.a, prof);
}

ProjectionLaw projection_law_check(const InstantonGraph& g, const std::vector<double>& mus,
                                   const std::vector<double>& nus) {
    g.validate(true);
    check_complex_symbolic(g);
    Tightness t = tightness_check(g);
    require_tight(t);
    if (mus.empty() || nus.empty()) throw DomainError("projection_law_check: empty sweep");
    const int n = g.top_index();
    ProjectionLaw pl;
    pl.mus = mus;
    pl.nus = nus;
    pl.deviation.assign(static_cast<std::size_t>(n) + 1, {});
    pl.rate.assign(static_cast<std::size_t>(n) + 1, 0.0);
    pl.nu_uniformity.assign(static_cast<std::size_t>(n) + 1, 0.0);
    pl.exact_zero.assign(static_cast<std::size_t>(n) + 1, false);
    for (int k = 1; k <= n; ++k) {
        const double a = t.a[k];
        std::vector<double> xs, ys;
        double worst = 0.0;
        for (double mu : mus) {
            std::vector<double> row;
            for (double nu : nus) {
                cplx z(mu, nu);
                CMatrix az = level_matrix(g, k - 1, z, a);
                // e^{a(z-1)} d_{z-1} = sum sign e^{(z-1)(w + a)}
                CMatrix azm = level_matrix(g, k - 1, z - 1.0, a);
                SingularTriples tr = singular_triples(az);
                auto U = tr.U.leftCols(tr.rank);
                auto V = tr.V.leftCols(tr.rank);
                RVector inv = tr.sigma.head(tr.rank).cwiseInverse();
                CMatrix pinv = V * inv.cast<cplx>().asDiagonal() * U.adjoint();
                CMatrix pi1 = U * U.adjoint();
                double dev = std::exp(a) * (azm * pinv - pi1).norm();
                row.push_back(dev);
                worst = std::max(worst, dev);
            }
            double mx = *std::max_element(row.begin(), row.end());
            if (mx > 0) {
                xs.push_back(mu);
                ys.push_back(std::log(mx));
            }
            if (row.front() > 0) pl.nu_uniformity[k] = std::max(pl.nu_uniformity[k], mx / row.front());
            pl.deviation[k].push_back(std::move(row));
        }
        pl.exact_zero[k] = worst < 1e-12;
        if (pl.exact_zero[k])
            pl.rate[k] = std::numeric_limits<double>::infinity();
        else if (xs.size() >= 2)
            pl.rate[k] = -fit_line(xs, ys).slope;
    }
    return pl;
}

double tau_increment(const TauProblem& p, double c0, double cn) {
    const double sn = p.n % 2 ? -1.0 : 1.0;
    const double ea = std::exp(p.a);
    return ea * (std::exp(c0) - 1.0) * p.m1_1 + sn * ea * (1.0 - std::exp(cn)) * p.m1_n + c0 * p.X0 -
           sn * cn * p.Xn;
}

TauSolution prescribe_tau(const TauProblem& p) {
    if (p.n < 1) throw DomainError("prescribe_tau: n must be >= 1");
    if (!(p.X0 > 0) || !(p.Xn > 0)) throw DomainError("prescribe_tau: |X_0| and |X_n| must be positive");
    if (p.m1_1 < 0 || p.m1_n < 0) throw DomainError("prescribe_tau: m1 values must be nonnegative");
    const double target = p.tau - p.z_baseline;
    TauSolution s;
    auto finish = [&](double c0, double cn) {
        s.c0 = c0;
        s.cn = cn;
        s.value = p.z_baseline + tau_increment(p, c0, cn);
        s.residual = std::abs(s.value - p.tau);
        if (s.residual > 1e-10 * std::max(1.0, std::abs(p.tau)))
            throw NumericalError("prescribe_tau: bisection residual " + std::to_string(s.residual));
        return s;
    };
    if (target == 0.0) return finish(0.0, 0.0);
    const bool up = target > 0.0;
    if (!up && p.n % 2)
        throw InfeasibleError("prescribe_tau: for odd n the reachable values are >= " + std::to_string(p.z_baseline));
    // Monotone in the moving constant: increasing in c0, decreasing in c_n for even n.
    auto f = [&](double c) { return up ? tau_increment(p, c, 0.0) : -tau_increment(p, 0.0, c); };
    const double goal = std::abs(target);
    double lo = 0.0, hi = 1.0;
    while (f(hi) < goal) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw NumericalError("prescribe_tau: could not bracket the target");
    }
    for (int it = 0; it < 400 && hi - lo > 1e-16 * std::max(1.0, hi); ++it) {
        double mid = 0.5 * (lo + hi);
        (f(mid) < goal ? lo : hi) = mid;
    }
    double c = 0.5 * (lo + hi);
    return up ? finish(c, 0.0) : finish(0.0, c);
}

InstantonGraph circle_graph(const std::vector<double>& drops, const std::string& prefix) {
    const int m = static_cast<int>(drops.size());
    if (m < 2 || m % 2) throw DomainError("circle_graph: need an even number of arc drops");
    InstantonGraph g;
    for (int i = 0; i < m; ++i) g.add_vertex(prefix + std::to_string(i), i % 2 == 0 ? 1 : 0);
    for (int i = 0; i < m; i += 2) {
        if (!(drops[i] > 0) || !(drops[(i - 1 + m) % m] > 0)) throw DomainError("circle_graph: drops must be positive");
        g.add_edge(i, (i + 1) % m, +1, -drops[i]);
        g.add_edge(i, (i - 1 + m) % m, -1, -drops[(i - 1 + m) % m]);
    }
    return g;
}

InstantonGraph product_graph(const InstantonGraph& a, const InstantonGraph& b) {
    InstantonGraph g;
    const int na = static_cast<int>(a.vertices.size()), nb = static_cast<int>(b.vertices.size());
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nb; ++j)
            g.add_vertex(a.vertices[i].id + "_" + b.vertices[j].id, a.vertices[i].index + b.vertices[j].index);
    auto id = [nb](int i, int j) { return i * nb + j; };
    for (const auto& e : a.edges)
        for (int j = 0; j < nb; ++j) g.add_edge(id(e.p, j), id(e.q, j), e.sign, e.weight);
    for (int i = 0; i < na; ++i) {
        int s = a.vertices[i].index % 2 ? -1 : 1;
        for (const auto& e : b.edges) g.add_edge(id(i, e.p), id(i, e.q), s * e.sign, e.weight);
    }
    return g;
}

InstantonGraph random_valid_graph(std::mt19937_64& rng, int max_factors, int max_vertices) {
    std::uniform_int_distribution<int> nf(1, std::max(1, max_factors));
    std::uniform_int_distribution<int> pairs(1, 2);
    std::uniform_real_distribution<double> drop(0.2, 2.0);
    const int factors = nf(rng);
    InstantonGraph g;
    int size = 1;
    for (int f = 0; f < factors; ++f) {
        int m = pairs(rng);
        if (size * 2 * m > max_vertices) m = 1;
        if (size * 2 * m > max_vertices) break;
        std::vector<double> drops;
        for (int i = 0; i < 2 * m; ++i) drops.push_back(drop(rng));
        InstantonGraph c = circle_graph(drops, std::string(1, static_cast<char>('a' + f)));
        g = f == 0 ? c : product_graph(g, c);
        size *= 2 * m;
    }
    return g;
}

}  // namespace wn
