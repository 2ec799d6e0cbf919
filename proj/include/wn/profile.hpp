#pragma once

#include <vector>

namespace wn {

// A zero of the Morse form on the circle. `value` is the primitive H on the
// lift that starts at the first zero; index 1 marks a maximum, 0 a minimum.
struct ZeroSpec {
    double theta = 0.0;
    double value = 0.0;
    int index = 0;
};

// Standard-form Morse profile on R/2piZ. Each arc between consecutive zeros
// carries exact quadratic caps of radius r at both ends, joined by a smooth
// partition of unity with a constant plateau in the middle:
//   eta = sigma * (s w1 + (L - s) w2 + kappa (1 - w1 - w2)),
// where sigma = -1 on arcs leaving a maximum and kappa fixes the arc integral.
class MorseProfile {
public:
    struct Arc {
        double t0 = 0.0;     // start angle on the lift
        double L = 0.0;      // length
        double sigma = 1.0;  // sign of eta on the arc
        double ell = 0.0;    // width of each transition band
        double kappa = 0.0;  // plateau height
        double H0 = 0.0;     // primitive at the start
        double dH = 0.0;     // primitive increment across the arc
        std::vector<double> panel_start;  // local coordinate of each panel
        std::vector<double> panel_H;      // primitive at each panel start
    };

    MorseProfile(std::vector<ZeroSpec> zeros, double c, double r);

    double eta(double theta) const;
    // Primitive on the universal cover: H(theta + 2pi) = H(theta) + 2pi c.
    double H(double theta) const;
    // Periodic part H - c theta.
    double h(double theta) const { return H(theta) - c_ * theta; }

    const std::vector<ZeroSpec>& zeros() const { return zeros_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    double c() const { return c_; }
    double r() const { return r_; }
    // Lift of zero i that lies in [theta_0, theta_0 + 2pi).
    double zero_theta(int i) const { return zeros_[static_cast<std::size_t>(i)].theta; }

    // Breakpoints of the piecewise-smooth structure on an arc, local coordinate.
    std::vector<double> arc_breaks(const Arc& a) const;
    double arc_eta(const Arc& a, double s) const;

private:
    std::vector<ZeroSpec> zeros_;
    double c_;
    double r_;
    std::vector<Arc> arcs_;

    std::size_t locate(double theta, double& s, double& shift) const;
};

}  // namespace wn
