#include "wn/z_distribution.hpp"

#include "wn/errors.hpp"
#include "wn/morse_complex.hpp"
#include "wn/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace wn {

TestFunctionSpec TestFunctionSpec::gaussian(double sigma, double c) {
    if (!(sigma > 0) || !std::isfinite(sigma)) throw DomainError("gaussian width must be positive");
    TestFunctionSpec f;
    f.terms.push_back({c, sigma});
    return f;
}

TestFunctionSpec TestFunctionSpec::operator+(const TestFunctionSpec& o) const {
    TestFunctionSpec f = *this;
    f.terms.insert(f.terms.end(), o.terms.begin(), o.terms.end());
    f.R = std::max(R, o.R);
    return f;
}

TestFunctionSpec TestFunctionSpec::scaled(double s) const {
    TestFunctionSpec f = *this;
    for (auto& t : f.terms) t.c *= s;
    return f;
}

double TestFunctionSpec::f0() const {
    double s = 0.0;
    for (const auto& t : terms) s += t.c;
    return s;
}

double TestFunctionSpec::fhat(double nu) const {
    double s = 0.0;
    for (const auto& t : terms) s += t.c * t.sigma * std::sqrt(2 * kPi) * std::exp(-0.5 * t.sigma * t.sigma * nu * nu);
    return s;
}

double TestFunctionSpec::radius() const {
    if (R > 0) return R;
    double smin = std::numeric_limits<double>::infinity();
    for (const auto& t : terms) smin = std::min(smin, t.sigma);
    return std::isfinite(smin) ? 8.0 / smin : 8.0;
}

double TestFunctionSpec::tail_weight(double r) const {
    double s = 0.0;
    for (const auto& t : terms) s += std::abs(t.c) * std::erfc(t.sigma * r / std::sqrt(2.0));
    return s;
}

std::string to_string(PairingOrder o) { return o == PairingOrder::InnerFirst ? "inner" : "outer"; }

cplx inner_integrand(const CircleWittenSystem& sys, SpectralParameter z) {
    // Degree-1 eigenpairs of Delta_z on im d are (u_j, sigma_j^2) with delta_z u_j = sigma_j v_j,
    // so Tr^s(eta delta_z e^{-s Delta_z}) = -sum_j sigma_j e^{-s sigma_j^2} <u_j, eta v_j>.
    // Forming delta_z u_j numerically instead would cost eps ||d|| / sigma_j^2 on the small pairs.
    SingularTriples tr = singular_triples(assemble_circle_complex(sys, z).d[0]);
    cplx total = 0.0;
    for (Eigen::Index j = 0; j < tr.rank; ++j) {
        cplx g = 0.0;
        for (int i = 0; i < sys.N; ++i) g += std::conj(tr.U(i, j)) * sys.eta[static_cast<std::size_t>(i)] * tr.V(i, j);
        const double lambda = tr.sigma[j] * tr.sigma[j];
        total -= tr.sigma[j] * g / lambda;  // int_0^inf e^{-s lambda} ds = 1 / lambda
    }
    return total - z.z() * zeta_tail_factor(sys);
}

cplx outer_integrand(const CircleWittenSystem& sys, SpectralParameter z) {
    return zeta_invariant(sys, z).zeta;
}

namespace {

std::vector<cplx> evaluate(const CircleWittenSystem& sys, double mu, PairingOrder order,
                           const std::vector<double>& nus) {
    return parallel_map<cplx>(nus.size(), [&](std::size_t i) {
        SpectralParameter z(mu, nus[i]);
        try {
            return order == PairingOrder::InnerFirst ? inner_integrand(sys, z) : outer_integrand(sys, z);
        } catch (const ConvergenceError& e) {
            throw ConvergenceError("pairing node nu = " + std::to_string(nus[i]) + ": " + e.what(), e.raw());
        }
    });
}

void scale_rule(const GaussRule& g, double R, std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
        x.push_back(R * g.nodes[i]);
        w.push_back(R * g.weights[i]);
    }
}

}  // namespace

NodeValues pairing_nodes(const CircleWittenSystem& sys, double mu, double R, PairingOrder order,
                         unsigned n_nodes, unsigned n_coarse) {
    if (!(R > 0)) throw DomainError("pairing_nodes: R must be positive");
    NodeValues nv;
    nv.mu = mu;
    nv.R = R;
    nv.order = order;
    scale_rule(gauss_legendre(n_nodes), R, nv.nodes, nv.weights);
    nv.values = evaluate(sys, mu, order, nv.nodes);
    if (n_coarse > 0) {
        scale_rule(gauss_legendre(n_coarse), R, nv.coarse_nodes, nv.coarse_weights);
        nv.coarse_values = evaluate(sys, mu, order, nv.coarse_nodes);
    }
    for (const auto& v : nv.values) nv.sup_abs = std::max(nv.sup_abs, std::abs(v));
    return nv;
}

Pairing pair(const NodeValues& nv, const TestFunctionSpec& f) {
    auto quad = [&](const std::vector<double>& x, const std::vector<double>& w, const std::vector<cplx>& v) {
        cplx s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f.fhat(x[i]) * v[i];
        return s / (2 * kPi);
    };
    Pairing p;
    p.order = nv.order;
    p.mu = nv.mu;
    p.R = nv.R;
    p.value = quad(nv.nodes, nv.weights, nv.values);
    if (!nv.coarse_values.empty())
        p.quad_error = std::abs(p.value - quad(nv.coarse_nodes, nv.coarse_weights, nv.coarse_values));
    p.tail_bound = f.tail_weight(nv.R) * nv.sup_abs;
    return p;
}

const Pairing& certify(const Pairing& p) {
    if (p.tail_bound > 1e-8 * std::max(1.0, std::abs(p.value)))
        throw ConvergenceError("nu-truncation bound " + std::to_string(p.tail_bound) + " at R = " +
                                   std::to_string(p.R) + " is above tolerance",
                               "value=" + std::to_string(p.value.real()) + "," + std::to_string(p.value.imag()));
    return p;
}

Pairing pair_inner_first(const CircleWittenSystem& sys, double mu, const TestFunctionSpec& f) {
    return certify(pair(pairing_nodes(sys, mu, f.radius(), PairingOrder::InnerFirst), f));
}

Pairing pair_outer_first(const CircleWittenSystem& sys, double mu, const TestFunctionSpec& f) {
    return certify(pair(pairing_nodes(sys, mu, f.radius(), PairingOrder::OuterFirst), f));
}

ZLimit z_limit(const CircleWittenSystem& sys) {
    ZLimit z;
    z.exact = sys.exact();
    z.z_la = mathai_quillen_1d(sys).z_la;
    if (z.exact) {
        // m = 0 in every degree, so the small part vanishes.
        z.z_sm = 0.0;
        z.z = exact_zero_sum(sys);
        return z;
    }
    CircleInstantonData d = instanton_data_circle(sys);
    if (!d.tight) throw StateError("z_limit: the circle fixture is not tight");
    // Novikov cohomology of a nonexact circle class vanishes.
    RankProfile prof = rank_sequence(sys.zero_counts(), {0, 0});
    z.z_sm = z_invariants(1, {0.0, d.a1}, prof).z_sm;
    z.z = z.z_sm + z.z_la;
    return z;
}

DeltaReport delta_limit_report(const CircleWittenSystem& sys, const std::vector<double>& mus,
                               const std::vector<double>& sigmas) {
    if (mus.empty() || sigmas.empty()) throw DomainError("delta_limit_report: empty sweep");
    DeltaReport rep;
    rep.z = z_limit(sys);
    rep.sigmas = sigmas;
    const double smin = *std::min_element(sigmas.begin(), sigmas.end());
    const double R = 8.0 / smin;
    std::vector<std::vector<double>> dev(sigmas.size());
    std::vector<std::vector<double>> ratio(sigmas.size());
    for (double mu : mus) {
        NodeValues inner = pairing_nodes(sys, mu, R, PairingOrder::InnerFirst);
        NodeValues outer = pairing_nodes(sys, mu, R, PairingOrder::OuterFirst);
        for (std::size_t s = 0; s < sigmas.size(); ++s) {
            TestFunctionSpec f = TestFunctionSpec::gaussian(sigmas[s]);
            f.R = R;
            Pairing pi = certify(pair(inner, f)), po = certify(pair(outer, f));
            const double target = rep.z.z * f.f0();
            const double gap = std::abs(pi.value - po.value);
            const double tol = pi.tolerance() + po.tolerance();
            for (const Pairing* p : {&pi, &po}) {
                DeltaRow row;
                row.mu = mu;
                row.sigma = sigmas[s];
                row.order = p->order;
                row.value = p->value;
                row.target = target;
                row.deviation = std::abs(p->value - target) / std::max(std::abs(target), 1e-300);
                row.fubini_gap = gap;
                row.tolerance = tol;
                rep.rows.push_back(row);
            }
            dev[s].push_back(rep.rows.back().deviation);
            ratio[s].push_back(po.value.real() / f.f0());
        }
    }
    std::vector<double> inv;
    for (double mu : mus) inv.push_back(1.0 / mu);
    for (std::size_t s = 0; s < sigmas.size(); ++s) {
        rep.extrapolated.push_back(mus.size() >= 2 ? fit_line(inv, ratio[s]).intercept : ratio[s].front());
        bool mono = true;
        for (std::size_t i = 1; i < dev[s].size(); ++i)
            if (!(dev[s][i] < dev[s][i - 1])) mono = false;
        rep.monotone.push_back(mono);
    }
    return rep;
}

}  // namespace wn
