#include "reports.hpp"

#include "wn/errors.hpp"
#include "wn/model_operator.hpp"
#include "wn/morse_complex.hpp"
#include "wn/weight_prescription.hpp"
#include "wn/z_distribution.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace wnlab {

using namespace wn;
using nlohmann::json;
using nlohmann::ordered_json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void Report::check(bool ok, const std::string& what) {
    summary["checks"][what] = ok;
    if (!ok) failed_checks.push_back(what);
}

std::string Report::csv() const {
    std::ostringstream out;
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << r[i];
        out << '\n';
    }
    return out.str();
}

std::string Report::json() const {
    ordered_json j;
    j["report"] = name;
    j["pass"] = failed_checks.empty();
    for (auto it = summary.begin(); it != summary.end(); ++it) j[it.key()] = it.value();
    return j.dump(2) + "\n";
}

CircleWittenSystem system_from_json(const nlohmann::json& j, std::optional<int> N) {
    try {
        std::vector<ZeroSpec> zeros;
        for (const auto& z : j.at("zeros"))
            zeros.push_back({z.at("theta").get<double>(), z.at("value").get<double>(), z.at("index").get<int>()});
        return make_circle_system(zeros, j.value("c", 0.0), j.at("r").get<double>(), N ? *N : j.value("N", 256),
                                  j.value("label", std::string("config")));
    } catch (const json::exception& e) {
        throw DataError(std::string("system descriptor: ") + e.what());
    }
}

CircleWittenSystem load_system(const std::string& path, std::optional<int> N) {
    std::ifstream f(path);
    if (!f) throw DataError("cannot open system descriptor " + path);
    json j;
    try {
        f >> j;
    } catch (const json::exception& e) {
        throw DataError(path + ": " + e.what());
    }
    return system_from_json(j, N);
}

CircleWittenSystem default_system(int N) {
    return make_circle_system({{0.0, 1.0, 1}, {kPi, -1.0, 0}}, 0.0, 0.35, N, "two_zero_exact");
}

Report model_spectrum(int n, int index, int degree, double mu, int count) {
    Report r;
    r.name = "model spectrum";
    r.columns = {"j", "value", "quanta", "signs"};
    MorseModelSpec spec(n, index);
    auto vals = model_spectrum(spec, degree, mu);
    auto join = [](const std::vector<int>& v) {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "|" : "") + std::to_string(v[i]);
        return s;
    };
    for (int j = 0; j < count && j < static_cast<int>(vals.size()); ++j)
        r.rows.push_back({std::to_string(j), num(vals[j].value), join(vals[j].quanta), join(vals[j].signs)});
    r.summary["n"] = n;
    r.summary["index"] = index;
    r.summary["degree"] = degree;
    r.summary["mu"] = mu;
    return r;
}

Report model_check(const std::vector<double>& mus, const std::vector<int>& indices) {
    Report r;
    r.name = "model check";
    r.columns = {"mu", "k", "degree", "level", "numeric", "formula", "rel_error"};
    double worst = 0.0;
    for (double mu : mus)
        for (int k : indices) {
            ModelCheck c = numeric_model_check(k, mu);
            for (const auto& d : c.degrees)
                for (std::size_t i = 0; i < d.numeric.size() && i < d.formula.size(); ++i)
                    r.rows.push_back({num(mu), std::to_string(k), std::to_string(d.degree), std::to_string(i),
                                      num(d.numeric[i]), num(d.formula[i]),
                                      num(std::abs(d.numeric[i] - d.formula[i]) / std::max(d.formula[i], mu))});
            worst = std::max(worst, c.max_rel_error());
            ordered_json run;
            run["mu"] = mu;
            run["k"] = k;
            run["N"] = c.N;
            run["L"] = c.L;
            run["estimated_error"] = c.estimated_error;
            run["resolved"] = c.resolved;
            run["ground_multiplicity"] = c.degrees[static_cast<std::size_t>(k)].ground_multiplicity;
            r.summary["runs"].push_back(run);
            r.check(c.degrees[static_cast<std::size_t>(k)].ground_multiplicity == 1,
                    "ground multiplicity 1 (mu=" + num(mu) + ", k=" + std::to_string(k) + ")");
        }
    r.summary["max_rel_error"] = worst;
    r.check(worst < 1e-4, "max relative error < 1e-4");
    return r;
}

Report circle_gap(const CircleWittenSystem& sys, const std::vector<double>& mus, double nu) {
    Report r;
    r.name = "circle gap";
    r.columns = {"mu", "nu", "small_count", "max_small", "min_large", "min_large_over_mu"};
    GapReport g = spectral_gap_report(sys, mus, nu);
    auto counts = sys.zero_counts();
    bool counts_ok = true;
    for (const auto& row : g.rows) {
        r.rows.push_back({num(row.mu), num(nu), std::to_string(row.small_counts[0]), num(row.max_small),
                          num(row.min_large), num(row.min_large / row.mu)});
        if (row.mu >= 10 && (row.small_counts[0] != counts[0] || row.small_counts[1] != counts[1])) counts_ok = false;
    }
    r.summary["system"] = sys.label;
    r.summary["zero_counts"] = counts;
    r.summary["log_slope"] = g.log_slope;
    r.summary["log_fit_r2"] = g.log_fit_r2;
    r.summary["fitted"] = g.fitted;
    r.summary["min_large_over_mu"] = g.min_large_over_mu;
    r.check(counts_ok, "small counts equal zero counts for mu >= 10");
    if (g.fitted) r.check(g.log_slope < -0.1, "log(max small) slope < -0.1");
    r.check(g.min_large_over_mu >= 0.2, "min large / mu >= 0.2");
    return r;
}

Report circle_zeta(const CircleWittenSystem& sys, const std::vector<double>& mus, const std::vector<double>& nus) {
    Report r;
    r.name = "circle zeta";
    r.columns = {"mu",          "nu",      "zeta_re", "zeta_im",          "zeta_sm_re",
                 "zeta_la_re", "raw_limit", "tail_re", "convergence_change"};
    std::optional<ZLimit> lim;
    try {
        lim = z_limit(sys);
    } catch (const StateError& e) {
        r.summary["limit_note"] = e.what();
    }
    for (double mu : mus)
        for (double nu : nus) {
            ZetaReport z = zeta_invariant(sys, SpectralParameter(mu, nu));
            r.rows.push_back({num(mu), num(nu), num(z.zeta.real()), num(z.zeta.imag()), num(z.zeta_sm.real()),
                              num(z.zeta_la.real()), num(z.raw_limit.real()), num(z.tail.real()),
                              num(z.convergence_change)});
            if (!lim || mu < 30) continue;
            const std::string at = " (mu=" + num(mu) + ", nu=" + num(nu) + ")";
            if (lim->exact) {
                r.check(std::abs(z.zeta - lim->z) <= 0.01 * std::abs(lim->z), "zeta within 1% of z" + at);
            } else {
                r.check(std::abs(z.zeta_sm.real() - lim->z_sm) <= 0.02 * std::abs(lim->z_sm),
                        "zeta_sm within 2% of z_sm" + at);
                r.check(std::abs(z.zeta_la.real() - lim->z_la) <= 0.03 * std::abs(lim->z_la),
                        "zeta_la within 3% of z_la" + at);
            }
        }
    r.summary["system"] = sys.label;
    r.summary["N"] = sys.N;
    if (lim) {
        r.summary["z_sm"] = lim->z_sm;
        r.summary["z_la"] = lim->z_la;
        r.summary["z"] = lim->z;
    }
    return r;
}

Report circle_identity(const CircleWittenSystem& sys, const std::vector<int>& Ns, double mu, double nu, double t) {
    Report r;
    r.name = "circle identity";
    r.columns = {"N", "lhs_re", "rhs_re", "residual", "scale"};
    std::vector<double> res;
    double scale = 1.0;
    for (int N : Ns) {
        IdentityResidual id = exact_identity_residual(resample(sys, N), SpectralParameter(mu, nu), t);
        r.rows.push_back({std::to_string(N), num(id.lhs.real()), num(id.rhs.real()), num(id.residual), num(id.scale)});
        res.push_back(id.residual);
        scale = id.scale;
    }
    r.summary["system"] = sys.label;
    r.summary["mu"] = mu;
    r.summary["nu"] = nu;
    r.summary["t"] = t;
    if (res.size() >= 2) r.check(res.back() < res.front(), "residual decreases with N");
    if (!Ns.empty() && Ns.back() >= 256) r.check(res.back() < 1e-8 * scale, "residual < 1e-8 scale at the finest N");
    return r;
}

Report circle_phi(const CircleWittenSystem& sys, const std::vector<double>& mus, double nu) {
    Report r;
    r.name = "circle phi";
    r.columns = {"mu", "p", "q", "re", "im", "expected", "ratio_abs"};
    std::vector<double> diag;
    for (double mu : mus) {
        PhiPsiReport ph = phi_psi_report(sys, SpectralParameter(mu, nu));
        for (std::size_t q = 0; q < ph.matrix.size(); ++q)
            for (std::size_t p = 0; p < ph.matrix.size(); ++p) {
                if (sys.zeros[p].index != sys.zeros[q].index) continue;
                cplx v = ph.matrix[q][p];
                r.rows.push_back({num(mu), std::to_string(p), std::to_string(q), num(v.real()), num(v.imag()),
                                  num(ph.expected[p]), num(std::abs(v) / ph.expected[p])});
            }
        diag.push_back(ph.max_diag_deviation);
        r.summary["max_diag_deviation"].push_back(ph.max_diag_deviation);
        r.summary["max_offdiag"].push_back(ph.max_offdiag);
    }
    bool dec = true;
    for (std::size_t i = 1; i < diag.size(); ++i) dec = dec && diag[i] < diag[i - 1];
    r.check(dec, "diagonal deviation decreases along mu");
    return r;
}

Report morse_analyze(const InstantonGraph& g, const std::vector<double>& mus, double nu) {
    Report r;
    r.name = "morse analyze";
    r.columns = {"kind", "mu", "k", "j", "value"};
    g.validate(true);
    check_complex_symbolic(g);
    auto counts = g.counts();
    HodgeRanks h0 = hodge_ranks_numeric(g, SpectralParameter(mus.front(), nu));
    RankProfile prof = rank_sequence(counts, h0.ker);
    auto put = [&](const std::string& kind, const std::vector<int>& v) {
        for (std::size_t k = 0; k < v.size(); ++k) r.rows.push_back({kind, "", std::to_string(k), "", std::to_string(v[k])});
        r.summary[kind] = v;
    };
    put("count", counts);
    put("betti", prof.betti);
    put("m", prof.m);
    put("m1", prof.m1);
    put("m2", prof.m2);
    bool ranks_ok = true;
    for (double mu : mus) {
        HodgeRanks h = hodge_ranks_numeric(g, SpectralParameter(mu, nu));
        for (std::size_t k = 0; k < h.ker.size(); ++k) {
            r.rows.push_back({"ker", num(mu), std::to_string(k), "", std::to_string(h.ker[k])});
            if (h.ker[k] != prof.betti[k] || h.im_d[k] != prof.m1[k] || h.im_delta[k] != prof.m2[k]) ranks_ok = false;
        }
        for (const auto& w : h.warnings) r.summary["warnings"].push_back(w);
    }
    r.check(ranks_ok, "numeric ranks match the rank recursion at every mu");
    Tightness t = tightness_check(g);
    r.summary["tight"] = t.tight;
    if (t.tight) {
        r.summary["a"] = std::vector<double>(t.a.begin() + 1, t.a.end());
        ZInvariants zi = z_invariants(g, prof);
        r.summary["z_sm"] = zi.z_sm;
        r.summary["minus_z_sm_of_minus_eta"] = zi.minus_z_sm_neg;
        r.summary["lemma_variant"] = zi.lemma_variant;
        r.summary["lemma_applicable"] = zi.lemma_applicable;
        if (zi.lemma_applicable) r.check(zi.lemma_agrees, "lemma variant equals z_sm");
        for (double mu : mus) {
            auto win = small_spectrum_window(g, SpectralParameter(mu, nu));
            for (std::size_t k = 1; k < win.size(); ++k)
                for (std::size_t j = 0; j < win[k].size(); ++j)
                    r.rows.push_back({"window", num(mu), std::to_string(k), std::to_string(j), num(win[k][j])});
        }
    } else {
        r.summary["z_sm"] = nullptr;
    }
    return r;
}

namespace {

void fill_prescription(Report& r, const InstantonGraph& input, const PrescriptionResult& res,
                       const std::vector<double>& targets, const PrescriptionProblem* prob) {
    r.columns = {"edge", "p", "q", "sign", "w_in", "w_out"};
    const InstantonGraph in = res.reversed ? input.reversed() : input;
    for (std::size_t i = 0; i < res.graph.edges.size(); ++i) {
        const auto& e = res.graph.edges[i];
        r.rows.push_back({std::to_string(i), res.graph.vertices[e.p].id, res.graph.vertices[e.q].id,
                          std::to_string(e.sign), num(in.edges[i].weight), num(e.weight)});
    }
    PrescriptionCertificate c = verify_prescription(input, res, targets);
    ordered_json cert;
    cert["exactness"] = c.exactness;
    cert["cycle_condition"] = c.cycle_condition;
    cert["negativity"] = c.negativity;
    cert["per_index_max"] = c.per_index_max;
    cert["max_exactness_error"] = c.max_exactness_error;
    cert["max_cycle_error"] = c.max_cycle_error;
    cert["max_target_error"] = c.max_target_error;
    if (!c.counterexample.empty()) cert["counterexample"] = c.counterexample;
    r.summary["certificate"] = cert;
    r.summary["targets"] = targets;
    r.summary["reversed"] = res.reversed;
    r.summary["C"] = res.C;
    if (prob) {
        r.summary["A"] = prob->A;
        r.summary["near_boundary"] = prob->near_boundary;
    }
    for (const auto& st : res.stages) {
        ordered_json s;
        s["k"] = st.k;
        s["b_k"] = st.b_k;
        s["b"] = st.b;
        r.summary["stages"].push_back(s);
    }
    r.check(c.all_pass(), "prescription certificate");
    r.extra_name = "graph";
    r.extra = res.graph.to_text();
}

}  // namespace

Report prescribe(const InstantonGraph& g, const std::vector<double>& targets) {
    Report r;
    r.name = "prescribe";
    bool ascending = std::is_sorted(targets.begin(), targets.end());
    if (ascending) {
        PrescriptionProblem p(g, targets);
        fill_prescription(r, g, wn::prescribe(p), targets, &p);
    } else {
        fill_prescription(r, g, prescribe_reversed(g, targets), targets, nullptr);
    }
    return r;
}

Report prescribe_random(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    PrescriptionProblem p = random_feasible_problem(rng);
    Report r;
    r.name = "prescribe";
    r.summary["seed"] = seed;
    fill_prescription(r, p.graph, wn::prescribe(p), p.targets, &p);
    return r;
}

Report zdist_pair(const CircleWittenSystem& sys, const std::vector<double>& mus, const std::vector<double>& sigmas) {
    Report r;
    r.name = "zdist pair";
    r.columns = {"mu", "sigma", "order", "value_re", "value_im", "deviation", "fubini_gap", "tolerance"};
    DeltaReport d = delta_limit_report(sys, mus, sigmas);
    bool fubini = true, limit = true;
    for (const auto& row : d.rows) {
        r.rows.push_back({num(row.mu), num(row.sigma), to_string(row.order), num(row.value.real()),
                          num(row.value.imag()), num(row.deviation), num(row.fubini_gap), num(row.tolerance)});
        if (row.fubini_gap > std::max(row.tolerance, 1e-6 * std::abs(row.value))) fubini = false;
        if (row.mu >= 30 && !(row.deviation < 0.02)) limit = false;
    }
    r.summary["system"] = sys.label;
    r.summary["z_sm"] = d.z.z_sm;
    r.summary["z_la"] = d.z.z_la;
    r.summary["z"] = d.z.z;
    r.summary["extrapolated_z"] = d.extrapolated;
    std::vector<bool> mono(d.monotone.begin(), d.monotone.end());
    r.summary["monotone"] = mono;
    r.check(fubini, "inner and outer orders agree within tolerance");
    if (*std::max_element(mus.begin(), mus.end()) >= 30) r.check(limit, "deviation from z f(0) < 2% for mu >= 30");
    return r;
}

}  // namespace wnlab
