#pragma once

#include "wn/instanton_graph.hpp"

#include <random>
#include <string>
#include <vector>

namespace wn {

// Raw weights w'(gamma) of a representative of the class, any sign, and
// nondecreasing targets a_1 <= ... <= a_n (targets[k-1] = a_k).
struct PrescriptionProblem {
    InstantonGraph graph;
    std::vector<double> targets;
    double A = 0.0;  // max |w'|
    double C = 0.0;
    bool near_boundary = false;  // a_1 within 1% of the feasibility edge 2A

    // Validates the graph and targets and chooses C.
    // DomainError: target count or order; InfeasibleTargets: a_1 <= 2A.
    PrescriptionProblem(InstantonGraph g, std::vector<double> a);
};

// C = A + (a_1 - A)/2 when a_1 > 3A, else a_1/2; either way C > A and a_1 > C + A.
double choose_constants(const InstantonGraph& g, double a1);

// w'' = w' - C, in edge order. InvariantViolation when some w'' leaves (-a_1, 0).
std::vector<double> initialize_weights(const PrescriptionProblem& p);

struct StageTrace {
    int k = 0;
    std::vector<int> vertices;  // X_k
    std::vector<double> b;      // b_p for each vertex above
    double b_k = 0.0;           // min b_p
};

struct PrescriptionResult {
    InstantonGraph graph;        // same vertices and edge order, prescribed weights
    std::vector<double> phi;     // potential per vertex
    double C = 0.0;
    std::vector<StageTrace> stages;
    bool reversed = false;       // graph is the reversed graph of the input
};

// Runs the stages k = 1..n on the given current weights (no constant shift).
// phi starts at zero. InvariantViolation when b_p > a_k at some stage.
PrescriptionResult run_stages(const InstantonGraph& g, const std::vector<double>& targets);

PrescriptionResult prescribe(const PrescriptionProblem& p);

// Targets a_1 >= ... >= a_n: runs on g.reversed() with the targets reversed,
// so the result lives on the reversed graph.
PrescriptionResult prescribe_reversed(const InstantonGraph& g, const std::vector<double>& targets);

struct PrescriptionCertificate {
    bool exactness = false;       // w = w' - C + phi(q) - phi(p)
    bool cycle_condition = false; // same, with a potential rebuilt on a spanning forest
    bool negativity = false;
    bool per_index_max = false;   // -max outgoing w = a_k, recomputed
    double max_exactness_error = 0.0;
    double max_cycle_error = 0.0;
    double max_target_error = 0.0;
    std::vector<double> recomputed_max;  // per index k, -max over X_k of outgoing weights
    std::string counterexample;          // first failing edge or vertex
    bool all_pass() const { return exactness && cycle_condition && negativity && per_index_max; }
};

// input is the graph the result was computed from (before any reversal).
PrescriptionCertificate verify_prescription(const InstantonGraph& input, const PrescriptionResult& result,
                                            const std::vector<double>& targets, double tol = 1e-9);

// Random problem that satisfies the stage precondition: products of circle
// graphs with raw weights uniform in [-A0, A0] and well separated targets.
PrescriptionProblem random_feasible_problem(std::mt19937_64& rng, int max_index = 5, int max_vertices = 40);

}  // namespace wn
