#include "wn/profile.hpp"

#include "wn/errors.hpp"
#include "wn/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace wn {

namespace {

constexpr int kPanelsPerPiece = 16;
constexpr unsigned kPanelNodes = 20;

const GaussRule& panel_rule() {
    static const GaussRule rule = gauss_legendre(kPanelNodes);
    return rule;
}

double gl_integral(const MorseProfile& p, const MorseProfile::Arc& a, double lo, double hi) {
    const auto& g = panel_rule();
    double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo), acc = 0.0;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) acc += g.weights[i] * p.arc_eta(a, mid + half * g.nodes[i]);
    return acc * half;
}

}  // namespace

MorseProfile::MorseProfile(std::vector<ZeroSpec> zeros, double c, double r)
    : zeros_(std::move(zeros)), c_(c), r_(r) {
    if (!(r_ > 0.0)) throw GeometryError("cap radius must be positive");
    if (!std::isfinite(c_)) throw DomainError("circulation must be finite");
    const std::size_t m = zeros_.size();
    if (m < 2 || m % 2) throw GeometryError("need an even number (>= 2) of alternating zeros");
    for (auto& z : zeros_) {
        if (z.index != 0 && z.index != 1) throw GeometryError("zero index must be 0 or 1");
        if (!std::isfinite(z.theta) || !std::isfinite(z.value))
            throw DomainError("zero position and value must be finite");
    }
    for (std::size_t i = 1; i < m; ++i)
        if (!(zeros_[i].theta > zeros_[i - 1].theta))
            throw GeometryError("zeros must be listed by increasing angle");
    if (!(zeros_.back().theta - zeros_.front().theta < 2.0 * kPi))
        throw GeometryError("zeros must lie within one turn");
    for (std::size_t i = 0; i < m; ++i)
        if (zeros_[i].index == zeros_[(i + 1) % m].index)
            throw GeometryError("zero indices must alternate around the circle");

    for (std::size_t i = 0; i < m; ++i) {
        Arc a;
        const auto& z0 = zeros_[i];
        double t1 = i + 1 < m ? zeros_[i + 1].theta : zeros_[0].theta + 2.0 * kPi;
        double H1 = i + 1 < m ? zeros_[i + 1].value : zeros_[0].value + 2.0 * kPi * c_;
        a.t0 = z0.theta;
        a.L = t1 - z0.theta;
        a.sigma = z0.index == 1 ? -1.0 : 1.0;
        a.H0 = z0.value;
        a.dH = H1 - z0.value;
        if (!(a.L > 2.0 * r_))
            throw GeometryError("caps of radius " + std::to_string(r_) + " overlap on arc " +
                                std::to_string(i));
        if (a.dH * a.sigma <= 0.0)
            throw GeometryError("values on arc " + std::to_string(i) +
                                " do not descend from the maximum to the minimum");
        a.ell = std::min(0.5 * (a.L - 2.0 * r_), r_);
        a.kappa = 1.0;
        // eta is affine in kappa, so the plateau height follows from two evaluations.
        auto arc_integral = [&](double kappa) {
            Arc t = a;
            t.kappa = kappa;
            double acc = 0.0;
            auto br = arc_breaks(t);
            for (std::size_t j = 0; j + 1 < br.size(); ++j)
                if (br[j + 1] > br[j])
                    acc += integrate([&](double s) { return arc_eta(t, s); }, br[j], br[j + 1], 1e-13);
            return acc;
        };
        double base = arc_integral(0.0);
        double slope = arc_integral(1.0) - base;
        a.kappa = (a.dH - base) / slope;
        if (!(a.kappa > 0.0))
            throw GeometryError("arc " + std::to_string(i) +
                                ": value difference too small for quadratic caps of radius " +
                                std::to_string(r_));

        auto br = arc_breaks(a);
        double H = a.H0;
        for (std::size_t j = 0; j + 1 < br.size(); ++j) {
            if (!(br[j + 1] > br[j])) continue;
            double w = (br[j + 1] - br[j]) / kPanelsPerPiece;
            for (int q = 0; q < kPanelsPerPiece; ++q) {
                double lo = br[j] + q * w;
                a.panel_start.push_back(lo);
                a.panel_H.push_back(H);
                H += gl_integral(*this, a, lo, lo + w);
            }
        }
        arcs_.push_back(std::move(a));
    }
}

std::vector<double> MorseProfile::arc_breaks(const Arc& a) const {
    return {0.0, r_, r_ + a.ell, a.L - r_ - a.ell, a.L - r_, a.L};
}

double MorseProfile::arc_eta(const Arc& a, double s) const {
    double w1 = s <= r_ ? 1.0 : 1.0 - smooth_step((s - r_) / a.ell);
    double w2 = s >= a.L - r_ ? 1.0 : smooth_step((s - (a.L - r_ - a.ell)) / a.ell);
    return a.sigma * (s * w1 + (a.L - s) * w2 + a.kappa * (1.0 - w1 - w2));
}

std::size_t MorseProfile::locate(double theta, double& s, double& shift) const {
    const double t0 = zeros_.front().theta;
    double turns = std::floor((theta - t0) / (2.0 * kPi));
    double th = theta - 2.0 * kPi * turns;
    shift = turns;
    std::size_t i = arcs_.size() - 1;
    while (i > 0 && th < arcs_[i].t0) --i;
    s = std::clamp(th - arcs_[i].t0, 0.0, arcs_[i].L);
    return i;
}

double MorseProfile::eta(double theta) const {
    double s, turns;
    std::size_t i = locate(theta, s, turns);
    return arc_eta(arcs_[i], s);
}

double MorseProfile::H(double theta) const {
    double s, turns;
    const Arc& a = arcs_[locate(theta, s, turns)];
    auto it = std::upper_bound(a.panel_start.begin(), a.panel_start.end(), s);
    std::size_t j = it == a.panel_start.begin() ? 0 : static_cast<std::size_t>(it - a.panel_start.begin()) - 1;
    double val = a.panel_H[j];
    if (s > a.panel_start[j]) val += gl_integral(*this, a, a.panel_start[j], s);
    return val + 2.0 * kPi * c_ * turns;
}

}  // namespace wn
