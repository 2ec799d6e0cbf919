#pragma once

#include "wn/circle_witten.hpp"
#include "wn/instanton_graph.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wnlab {

// Exit-code contract of the command line.
enum Exit { kPass = 0, kUsage = 2, kInfeasible = 3, kFalsified = 4 };

struct Report {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    nlohmann::ordered_json summary;
    std::vector<std::string> failed_checks;
    std::string extra_name;  // optional third artifact, e.g. a prescribed graph
    std::string extra;

    void check(bool ok, const std::string& what);
    int exit_code() const { return failed_checks.empty() ? kPass : kFalsified; }
    std::string csv() const;
    std::string json() const;  // summary plus checks
};

// System descriptor: {"zeros": [{"theta", "value", "index"}...], "c", "r", "N", "label"}.
wn::CircleWittenSystem load_system(const std::string& path, std::optional<int> N = std::nullopt);
wn::CircleWittenSystem system_from_json(const nlohmann::json& j, std::optional<int> N = std::nullopt);
// Built-in two-zero exact system used when no --config is given.
wn::CircleWittenSystem default_system(int N = 256);

Report model_spectrum(int n, int index, int degree, double mu, int count);
Report model_check(const std::vector<double>& mus, const std::vector<int>& indices);

Report circle_gap(const wn::CircleWittenSystem& sys, const std::vector<double>& mus, double nu);
Report circle_zeta(const wn::CircleWittenSystem& sys, const std::vector<double>& mus, const std::vector<double>& nus);
// Systems are resampled onto each N.
Report circle_identity(const wn::CircleWittenSystem& sys, const std::vector<int>& Ns, double mu, double nu, double t);
Report circle_phi(const wn::CircleWittenSystem& sys, const std::vector<double>& mus, double nu);

Report morse_analyze(const wn::InstantonGraph& g, const std::vector<double>& mus, double nu);

// Ascending targets prescribe directly; descending targets use the reversed graph.
Report prescribe(const wn::InstantonGraph& g, const std::vector<double>& targets);
Report prescribe_random(std::uint64_t seed);

Report zdist_pair(const wn::CircleWittenSystem& sys, const std::vector<double>& mus, const std::vector<double>& sigmas);

// Formats a double for CSV cells with enough digits to round trip.
std::string num(double v);

}  // namespace wnlab
