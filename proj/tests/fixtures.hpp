#pragma once

#include "wn/circle_witten.hpp"
#include "wn/morse_complex.hpp"

namespace fixtures {

// Caps +1 at 0 and -1 at pi; zeta(1, z) tends to -2.
inline wn::CircleWittenSystem two_zero_exact(int N = 256, double r = 0.35) {
    return wn::make_circle_system({{0.0, 1.0, 1}, {wn::kPi, -1.0, 0}}, 0.0, r, N, "two_zero_exact");
}

// Nonexact (period 1) with a single pair of zeros; drops 0.5 and 1.5, so a_1 = 0.5.
inline wn::CircleWittenSystem tight(int N = 256) {
    return wn::make_circle_system({{0.0, 0.25, 1}, {1.6, -0.25, 0}}, 1.0 / (2.0 * wn::kPi), 0.3, N, "tight");
}

inline wn::CircleWittenSystem four_zero_exact(int N = 256) {
    return wn::make_circle_system(
        {{0.0, 1.0, 1}, {wn::kPi / 2, -1.0, 0}, {wn::kPi, 0.8, 1}, {3 * wn::kPi / 2, -0.7, 0}}, 0.0, 0.5, N,
        "four_zero_exact");
}

inline wn::InstantonGraph s1_graph() { return wn::circle_graph({0.5, 1.5}); }

// Tight torus-type product with a_1 = a_2 = 0.5 and one subleading edge per level.
inline wn::InstantonGraph product_graph() {
    return wn::product_graph(wn::circle_graph({0.5, 1.5}, "x"), wn::circle_graph({0.5, 0.9}, "y"));
}

}  // namespace fixtures
