#pragma once

#include <array>

#include "presshock/riemann.hpp"

namespace testdata {

inline presshock::RiemannData make(const std::array<double, 9>& a) {
    presshock::RiemannData d;
    d.s1 = {a[0], a[1], a[2], 0};
    d.s2 = {a[3], a[4], a[5], 0};
    d.s3 = {a[6], a[7], a[8], 0};
    return d;
}

// The nine published datasets, (rho, u, v) for states 1, 2, 3.
inline presshock::RiemannData published(int k) {
    static const std::array<std::array<double, 9>, 9> D = {{
        {0.1, -0.815, 0.035, 0.1, -0.015, -0.825, 0.1, 0.85, 0.83},
        {0.5, -0.975, -0.498, 0.3, 0.015, -0.925, 0.1, 0.945, 0.935},
        {0.2, -0.015, 0.248, 0.4, 0.275, -0.925, 0.2, -0.985, 0.945},
        {0.9, 0.035, -0.24, 0.6, 0.035, -0.925, 0.3, -0.985, 0.945},
        {0.4, -0.615, 0.415, 0.8, -0.615, -0.625, 0.2, 0.051, 0.415},
        {0.2, 0.075, 0.018, 0.5, 0.075, -0.625, 0.2, 0.985, 0.945},
        {0.2, -0.475, 0.018, 0.3, 0.275, 0.018, 0.1, 0.435, 0.018},
        {0.9, 0.475, 0.418, 0.2, 0.475, -0.438, 0.6, -0.435, 0.418},
        {0.4, -0.615, 0.415, 0.8, -0.615, -0.625, 0.2, 0.051, 0.415},
    }};
    return make(D.at(k - 1));
}

// Data satisfying the Case 6 and Case 2 conditions.
inline presshock::RiemannData case6_synthetic() {
    return make({0.2, 0.075, 0.018, 0.2, 0.075, -0.625, 0.5, 0.985, 0.945});
}
inline presshock::RiemannData case2_synthetic_a() {
    return make({0.2, -0.495, -0.024, 0.2, -0.43, -0.706, 0.3, 0.74, 0.799});
}
inline presshock::RiemannData case2_synthetic_b() {
    return make({0.1, -0.712, -0.53, 0.2, 0.078, -0.833, 0.6, 0.897, 0.592});
}

} // namespace testdata
