#include "wn/weight_prescription.hpp"

#include "wn/errors.hpp"
#include "wn/morse_complex.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace wn {

namespace {

double max_abs_weight(const InstantonGraph& g) {
    double a = 0.0;
    for (const auto& e : g.edges) a = std::max(a, std::abs(e.weight));
    return a;
}

void check_targets(const InstantonGraph& g, const std::vector<double>& a, bool ascending) {
    const int n = g.top_index();
    if (static_cast<int>(a.size()) != n)
        throw DomainError("expected " + std::to_string(n) + " targets, got " + std::to_string(a.size()));
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (!(a[k] > 0) || !std::isfinite(a[k])) throw DomainError("targets must be positive and finite");
        if (k > 0 && (ascending ? a[k] < a[k - 1] : a[k] > a[k - 1]))
            throw DomainError(std::string("targets must be ") + (ascending ? "nondecreasing" : "nonincreasing") +
                              " (a_" + std::to_string(k + 1) + " vs a_" + std::to_string(k) + ")");
    }
}

std::string edge_name(const InstantonGraph& g, std::size_t i) {
    const auto& e = g.edges[i];
    return "edge " + std::to_string(i) + " (" + g.vertices[e.p].id + " -> " + g.vertices[e.q].id + ")";
}

}  // namespace

double choose_constants(const InstantonGraph& g, double a1) {
    const double A = max_abs_weight(g);
    if (!(a1 > 2 * A))
        throw InfeasibleTargets("a_1 = " + std::to_string(a1) + " must exceed 2A = " + std::to_string(2 * A));
    double C = A + (a1 - A) / 2;
    // That choice needs a_1 > 3A; between 2A and 3A the midpoint of (A, a_1 - A) still works.
    if (!(C > A) || !(a1 > C + A)) C = a1 / 2;
    if (!(C > A) || !(a1 > C + A)) throw InfeasibleTargets("no admissible C for a_1 = " + std::to_string(a1));
    return C;
}

PrescriptionProblem::PrescriptionProblem(InstantonGraph g, std::vector<double> a)
    : graph(std::move(g)), targets(std::move(a)) {
    graph.validate(false);
    check_targets(graph, targets, true);
    A = max_abs_weight(graph);
    if (!targets.empty()) {
        C = choose_constants(graph, targets[0]);
        near_boundary = targets[0] - 2 * A < 0.01 * std::max(1.0, 2 * A);
    }
}

std::vector<double> initialize_weights(const PrescriptionProblem& p) {
    std::vector<double> w;
    w.reserve(p.graph.edges.size());
    for (std::size_t i = 0; i < p.graph.edges.size(); ++i) {
        double v = p.graph.edges[i].weight - p.C;
        if (!(v < 0) || !(v > -p.targets.front()))
            throw InvariantViolation("initial weight of " + edge_name(p.graph, i) + " = " + std::to_string(v) +
                                     " is outside (-a_1, 0)");
        w.push_back(v);
    }
    return w;
}

PrescriptionResult run_stages(const InstantonGraph& g, const std::vector<double>& targets) {
    const int n = g.top_index();
    check_targets(g, targets, true);
    auto out = g.outgoing();
    PrescriptionResult r;
    r.graph = g;
    r.phi.assign(g.vertices.size(), 0.0);
    auto current = [&](const GraphEdge& e) { return e.weight + r.phi[e.q] - r.phi[e.p]; };
    for (int k = 1; k <= n; ++k) {
        const double ak = targets[k - 1];
        StageTrace st;
        st.k = k;
        st.vertices = g.vertices_of_index(k);
        st.b_k = std::numeric_limits<double>::infinity();
        for (int p : st.vertices) {
            if (out[p].empty())
                throw StructureError("vertex " + g.vertices[p].id + " of index " + std::to_string(k) +
                                     " has no outgoing instanton");
            double mx = -std::numeric_limits<double>::infinity();
            for (int e : out[p]) mx = std::max(mx, current(g.edges[e]));
            double b = -mx;
            if (b > ak + 1e-12 * std::max(1.0, ak))
                throw InvariantViolation("stage " + std::to_string(k) + ": b_p = " + std::to_string(b) +
                                         " exceeds a_k = " + std::to_string(ak) + " at " + g.vertices[p].id);
            st.b.push_back(b);
            st.b_k = std::min(st.b_k, b);
        }
        if (st.vertices.empty()) st.b_k = ak;
        for (std::size_t i = 0; i < st.vertices.size(); ++i) r.phi[st.vertices[i]] += ak - st.b[i];
        for (std::size_t u = 0; u < g.vertices.size(); ++u)
            if (g.vertices[u].index > k) r.phi[u] += ak - st.b_k;
        r.stages.push_back(std::move(st));
    }
    for (auto& e : r.graph.edges) e.weight = e.weight + r.phi[e.q] - r.phi[e.p];
    return r;
}

PrescriptionResult prescribe(const PrescriptionProblem& p) {
    if (p.targets.empty()) {
        PrescriptionResult r;
        r.graph = p.graph;
        r.phi.assign(p.graph.vertices.size(), 0.0);
        return r;
    }
    InstantonGraph shifted = p.graph;
    std::vector<double> w = initialize_weights(p);
    for (std::size_t i = 0; i < w.size(); ++i) shifted.edges[i].weight = w[i];
    PrescriptionResult r = run_stages(shifted, p.targets);
    r.C = p.C;
    return r;
}

PrescriptionResult prescribe_reversed(const InstantonGraph& g, const std::vector<double>& targets) {
    check_targets(g, targets, false);
    std::vector<double> rev(targets.rbegin(), targets.rend());
    PrescriptionResult r = prescribe(PrescriptionProblem(g.reversed(), rev));
    r.reversed = true;
    return r;
}

PrescriptionCertificate verify_prescription(const InstantonGraph& input, const PrescriptionResult& result,
                                            const std::vector<double>& targets, double tol) {
    const InstantonGraph in = result.reversed ? input.reversed() : input;
    std::vector<double> a = targets;
    if (result.reversed) std::reverse(a.begin(), a.end());
    const InstantonGraph& g = result.graph;
    if (in.vertices.size() != g.vertices.size() || in.edges.size() != g.edges.size() ||
        result.phi.size() != g.vertices.size())
        throw ShapeError("verify_prescription: result does not match the input graph");
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (in.edges[i].p != g.edges[i].p || in.edges[i].q != g.edges[i].q)
            throw ShapeError("verify_prescription: edge order differs");
    PrescriptionCertificate c;
    auto note = [&](const std::string& s) {
        if (c.counterexample.empty()) c.counterexample = s;
    };
    const double scale = std::max(1.0, a.empty() ? 1.0 : a.back());

    // exactness against the reported potential
    c.exactness = true;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        const auto& e = g.edges[i];
        double expect = in.edges[i].weight - result.C + result.phi[e.q] - result.phi[e.p];
        double err = std::abs(e.weight - expect);
        c.max_exactness_error = std::max(c.max_exactness_error, err);
        if (err > tol * scale) {
            c.exactness = false;
            note(edge_name(g, i) + ": weight differs from the potential shift by " + std::to_string(err));
        }
    }

    // class preservation without trusting phi: potential on a spanning forest
    std::vector<std::vector<std::pair<int, int>>> adj(g.vertices.size());
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        adj[g.edges[i].p].push_back({static_cast<int>(i), g.edges[i].q});
        adj[g.edges[i].q].push_back({static_cast<int>(i), g.edges[i].p});
    }
    auto delta = [&](int i) { return g.edges[i].weight - in.edges[i].weight + result.C; };  // psi(q) - psi(p)
    std::vector<double> psi(g.vertices.size(), 0.0);
    std::vector<bool> seen(g.vertices.size(), false);
    for (std::size_t s = 0; s < g.vertices.size(); ++s) {
        if (seen[s]) continue;
        seen[s] = true;
        std::deque<int> q{static_cast<int>(s)};
        while (!q.empty()) {
            int v = q.front();
            q.pop_front();
            for (auto [i, w] : adj[v]) {
                if (seen[w]) continue;
                seen[w] = true;
                psi[w] = g.edges[i].q == w ? psi[v] + delta(i) : psi[v] - delta(i);
                q.push_back(w);
            }
        }
    }
    c.cycle_condition = true;
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        double err = std::abs(delta(static_cast<int>(i)) - (psi[g.edges[i].q] - psi[g.edges[i].p]));
        c.max_cycle_error = std::max(c.max_cycle_error, err);
        if (err > tol * scale) {
            c.cycle_condition = false;
            note(edge_name(g, i) + ": closes a cycle with defect " + std::to_string(err));
        }
    }

    c.negativity = true;
    for (std::size_t i = 0; i < g.edges.size(); ++i)
        if (!(g.edges[i].weight < 0)) {
            c.negativity = false;
            note(edge_name(g, i) + ": weight " + std::to_string(g.edges[i].weight) + " is not negative");
        }

    const int n = g.top_index();
    c.per_index_max = static_cast<int>(a.size()) == n;
    if (!c.per_index_max) note("target count differs from the top index");
    c.recomputed_max.assign(static_cast<std::size_t>(n) + 1, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t p = 0; p < g.vertices.size(); ++p) {
        int k = g.vertices[p].index;
        if (k == 0) continue;
        double mx = -std::numeric_limits<double>::infinity();
        for (const auto& e : g.edges)
            if (e.p == static_cast<int>(p)) mx = std::max(mx, e.weight);
        double M = -mx;
        double& slot = c.recomputed_max[k];
        slot = std::isnan(slot) ? M : std::min(slot, M);
        if (static_cast<int>(a.size()) < k) continue;
        double err = std::abs(M - a[k - 1]);
        c.max_target_error = std::max(c.max_target_error, std::isfinite(err) ? err : 1e300);
        if (!(err <= tol * std::max(1.0, a[k - 1]))) {
            c.per_index_max = false;
            note("vertex " + g.vertices[p].id + ": M_p = " + std::to_string(M) + " but a_" + std::to_string(k) +
                 " = " + std::to_string(a[k - 1]));
        }
    }
    return c;
}

PrescriptionProblem random_feasible_problem(std::mt19937_64& rng, int max_index, int max_vertices) {
    std::uniform_int_distribution<int> nf(1, std::max(1, max_index));
    std::uniform_int_distribution<int> pairs(1, 2);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int factors = nf(rng);
    InstantonGraph g;
    int size = 1;
    for (int f = 0; f < factors; ++f) {
        int m = pairs(rng);
        if (size * 2 * m > max_vertices) m = 1;
        if (size * 2 * m > max_vertices) break;
        InstantonGraph c = circle_graph(std::vector<double>(static_cast<std::size_t>(2 * m), 1.0),
                                        std::string(1, static_cast<char>('a' + f)));
        g = f == 0 ? c : product_graph(g, c);
        size *= 2 * m;
    }
    const double A0 = 0.1 + 1.9 * unit(rng);
    for (auto& e : g.edges) e.weight = A0 * (2 * unit(rng) - 1);
    const double A = max_abs_weight(g);
    std::vector<double> a;
    a.push_back(2 * A + 0.5 + 1.5 * unit(rng));
    const double C = choose_constants(g, a[0]);
    for (int k = 2; k <= g.top_index(); ++k)
        a.push_back(std::max(a.back(), C + (2 * k - 1) * A + 0.1 + 0.9 * unit(rng)));
    return PrescriptionProblem(std::move(g), std::move(a));
}

}  // namespace wn
