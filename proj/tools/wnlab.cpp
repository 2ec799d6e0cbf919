// wnlab: command-line front end for the Witten-Novikov laboratory.
#include "reports.hpp"

#include "wn/errors.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

namespace {

using wnlab::Report;

int emit(const Report& r, const std::string& out) {
    if (out.empty()) {
        std::cout << r.csv() << r.json();
        if (!r.extra.empty()) std::cout << r.extra;
    } else {
        auto write = [](const std::string& path, const std::string& text) {
            std::ofstream f(path);
            if (!f) throw wn::DataError("cannot write " + path);
            f << text;
        };
        write(out + ".csv", r.csv());
        write(out + ".json", r.json());
        if (!r.extra.empty()) write(out + "." + r.extra_name, r.extra);
    }
    for (const auto& c : r.failed_checks) std::cerr << "wnlab: check failed: " << c << '\n';
    return r.exit_code();
}

wn::CircleWittenSystem system_for(const std::string& config, const std::optional<int>& N) {
    return config.empty() ? wnlab::default_system(N ? *N : 256) : wnlab::load_system(config, N);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Witten-Novikov deformation laboratory"};
    app.require_subcommand(1);
    std::string out, config, graph;
    std::optional<int> N;
    std::vector<double> mus, nus, sigmas, targets;
    std::vector<int> Ns, indices{0, 1};
    double nu = 0.0, t = 0.1;
    int n = 1, index = 0, count = 10;
    std::optional<int> degree;
    std::optional<std::uint64_t> seed;
    std::function<Report()> run;

    auto add_out = [&](CLI::App* c) { c->add_option("--out", out, "Output prefix for .csv/.json files"); };
    auto add_config = [&](CLI::App* c) {
        c->add_option("--config", config, "System descriptor (JSON)")->check(CLI::ExistingFile);
        c->add_option("--N", N, "Grid size (power of two)");
    };

    auto* model = app.add_subcommand("model", "Model Witten Laplacian")->require_subcommand(1);
    auto* spectrum = model->add_subcommand("spectrum", "Closed-form spectrum table");
    spectrum->add_option("--n", n, "Dimension")->capture_default_str();
    spectrum->add_option("--index", index, "Morse index")->capture_default_str();
    spectrum->add_option("--degree", degree, "Form degree (default: the index)");
    spectrum->add_option("--mu", mus, "mu")->required()->expected(1);
    spectrum->add_option("--count", count, "Rows")->capture_default_str();
    add_out(spectrum);
    spectrum->callback([&] {
        run = [&] { return wnlab::model_spectrum(n, index, degree ? *degree : index, mus[0], count); };
    });
    auto* mcheck = model->add_subcommand("check", "Finite-difference check against the formula");
    mcheck->add_option("--mu", mus, "mu values")->required()->delimiter(',');
    mcheck->add_option("--index", indices, "Indices")->delimiter(',');
    add_out(mcheck);
    mcheck->callback([&] { run = [&] { return wnlab::model_check(mus, indices); }; });

    auto* circle = app.add_subcommand("circle", "Discretized circle complexes")->require_subcommand(1);
    auto* gap = circle->add_subcommand("gap", "Small/large spectral gap sweep");
    add_config(gap);
    gap->add_option("--mu", mus, "mu values")->delimiter(',');
    gap->add_option("--nu", nu, "nu");
    add_out(gap);
    gap->callback([&] {
        if (mus.empty()) mus = {5, 10, 20, 40};
        run = [&] { return wnlab::circle_gap(system_for(config, N), mus, nu); };
    });
    auto* zeta = circle->add_subcommand("zeta", "zeta(1, z) and its small/large split");
    add_config(zeta);
    zeta->add_option("--mu", mus, "mu values")->delimiter(',');
    zeta->add_option("--nu", nus, "nu values")->delimiter(',');
    add_out(zeta);
    zeta->callback([&] {
        if (mus.empty()) mus = {30};
        if (nus.empty()) nus = {0};
        run = [&] { return wnlab::circle_zeta(system_for(config, N), mus, nus); };
    });
    auto* identity = circle->add_subcommand("identity", "Exact-form trace identity residual");
    identity->add_option("--config", config, "System descriptor (JSON)")->check(CLI::ExistingFile);
    identity->add_option("--N", Ns, "Grid sizes")->delimiter(',');
    identity->add_option("--mu", mus, "mu")->expected(1);
    identity->add_option("--nu", nu, "nu");
    identity->add_option("--t", t, "heat time")->capture_default_str();
    add_out(identity);
    identity->callback([&] {
        if (Ns.empty()) Ns = {64, 128, 256};
        if (mus.empty()) mus = {10};
        run = [&] { return wnlab::circle_identity(system_for(config, Ns.back()), Ns, mus[0], nu, t); };
    });
    auto* phi = circle->add_subcommand("phi", "Phi_z Psi_z asymptotics");
    add_config(phi);
    phi->add_option("--mu", mus, "mu values")->delimiter(',');
    phi->add_option("--nu", nu, "nu");
    add_out(phi);
    phi->callback([&] {
        if (mus.empty()) mus = {10, 20, 30, 40};
        run = [&] { return wnlab::circle_phi(system_for(config, N), mus, nu); };
    });

    auto* morse = app.add_subcommand("morse", "Perturbed Morse complexes")->require_subcommand(1);
    auto* analyze = morse->add_subcommand("analyze", "Ranks, z_sm and eigenvalue windows");
    analyze->add_option("--graph", graph, "Instanton graph file")->required()->check(CLI::ExistingFile);
    analyze->add_option("--mu", mus, "mu values")->delimiter(',');
    analyze->add_option("--nu", nu, "nu");
    add_out(analyze);
    analyze->callback([&] {
        if (mus.empty()) mus = {20};
        run = [&] { return wnlab::morse_analyze(wn::InstantonGraph::load(graph), mus, nu); };
    });

    auto* presc = app.add_subcommand("prescribe", "Prescribe instanton weights");
    presc->add_option("--graph", graph, "Instanton graph file")->check(CLI::ExistingFile);
    presc->add_option("--targets", targets, "a_1,...,a_n")->delimiter(',');
    presc->add_option("--seed", seed, "Random feasible problem instead of --graph");
    add_out(presc);
    presc->callback([&] {
        if (graph.empty() == !seed.has_value())
            throw CLI::ValidationError("prescribe", "give either --graph with --targets or --seed");
        if (!graph.empty() && targets.empty()) throw CLI::ValidationError("prescribe", "--targets is required");
        run = [&] {
            return seed ? wnlab::prescribe_random(*seed) : wnlab::prescribe(wn::InstantonGraph::load(graph), targets);
        };
    });

    auto* zdist = app.add_subcommand("zdist", "Tempered distribution Z_mu")->require_subcommand(1);
    auto* pair = zdist->add_subcommand("pair", "Both integration orders against Gaussians");
    add_config(pair);
    pair->add_option("--mu", mus, "mu values")->delimiter(',');
    pair->add_option("--sigma", sigmas, "Gaussian widths")->delimiter(',');
    add_out(pair);
    pair->callback([&] {
        if (mus.empty()) mus = {10, 20, 30};
        if (sigmas.empty()) sigmas = {1};
        run = [&] { return wnlab::zdist_pair(system_for(config, N), mus, sigmas); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return wnlab::kUsage;
    }
    try {
        return emit(run(), out);
    } catch (const wn::InputError& e) {
        std::cerr << "wnlab: invalid input: " << e.what() << '\n';
        return wnlab::kInfeasible;
    } catch (const wn::InfeasibleError& e) {
        std::cerr << "wnlab: infeasible input: " << e.what() << '\n';
        return wnlab::kInfeasible;
    } catch (const wn::Error& e) {
        std::cerr << "wnlab: certificate failed: " << e.what() << '\n';
        return wnlab::kFalsified;
    }
}
