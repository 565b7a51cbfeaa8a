// Regular polygon theories: state space, effect space, symmetries.
#pragma once

#include <numbers>
#include <stdexcept>
#include <vector>

#include "linalg.hpp"

namespace polygon_chsh {

struct Theory {
    int n = 0;              // side count, >= 3
    double theta = 0.0;     // pi/n
    double r = 0.0;         // circumradius sqrt(1/cos(pi/n))
    double R = 0.0;         // 1/(1+r^2), the odd-case effect normalization
    std::vector<Vec3> pure_states;   // omega(i), i = 0..n-1
    std::vector<Vec3> pure_effects;  // e(i) (even n: n entries; odd n: e(i) then ebar(i))
    Vec3 unit{0, 0, 1};              // unit effect u
    Vec3 max_mixed{0, 0, 1};         // maximally mixed state
    Mat3 T;                          // order isomorphism between effect and state cones
};

struct Observable {
    Vec3 effect0, effect1;  // effect0 + effect1 = u
    int index = -1;         // i when the observable is {e(i), u - e(i)}
};

inline int mod_index(int i, int n) {
    int m = i % n;
    return m < 0 ? m + n : m;
}

inline Theory build_theory(int n) {
    if (n < 3) throw std::invalid_argument("build_theory: n must be >= 3");
    Theory t;
    t.n = n;
    t.theta = std::numbers::pi / n;
    t.r = std::sqrt(1.0 / std::cos(t.theta));
    t.R = 1.0 / (1.0 + t.r * t.r);
    t.pure_states.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * i * t.theta;
        t.pure_states.push_back({t.r * std::cos(a), t.r * std::sin(a), 1.0});
    }
    if (n % 2 == 0) {
        // e(i) = (1/2)(r cos((2i+1)theta), r sin((2i+1)theta), 1); complements are
        // members of the same family: u - e(i) = e(i + n/2).
        t.pure_effects.reserve(n);
        for (int i = 0; i < n; ++i) {
            const double a = (2 * i + 1) * t.theta;
            t.pure_effects.push_back({0.5 * t.r * std::cos(a), 0.5 * t.r * std::sin(a), 0.5});
        }
        t.T = rotation_z(-t.theta);
    } else {
        // e(i) = R (r cos(2 i theta), r sin(2 i theta), 1); complements u - e(i)
        // are separate extreme rays for odd n.
        t.pure_effects.reserve(2 * n);
        for (int i = 0; i < n; ++i) {
            const double a = 2.0 * i * t.theta;
            t.pure_effects.push_back({t.R * t.r * std::cos(a), t.R * t.r * std::sin(a), t.R});
        }
        for (int i = 0; i < n; ++i) t.pure_effects.push_back(t.unit - t.pure_effects[i]);
        t.T = Mat3::identity();
    }
    return t;
}

inline Vec3 pure_state(const Theory& t, int i) { return t.pure_states[mod_index(i, t.n)]; }

inline Vec3 pure_effect(const Theory& t, int i) { return t.pure_effects[mod_index(i, t.n)]; }

inline Observable binary_observable(const Theory& t, int i) {
    const int k = mod_index(i, t.n);
    return {t.pure_effects[k], t.unit - t.pure_effects[k], k};
}

// Membership in the state space: z = 1 and inside every edge half-plane.
inline bool contains_state(const Theory& t, const Vec3& v, double tol = 1e-9) {
    if (std::abs(v.z - 1.0) > tol) return false;
    const double edge = t.r * std::cos(t.theta);  // apothem
    for (int i = 0; i < t.n; ++i) {
        const double a = (2 * i + 1) * t.theta;  // outward edge normal direction
        if (v.x * std::cos(a) + v.y * std::sin(a) > edge + tol) return false;
    }
    return true;
}

// Membership in the effect space: 0 <= <v, omega(i)> <= 1 on all vertices.
inline bool contains_effect(const Theory& t, const Vec3& v, double tol = 1e-9) {
    for (const Vec3& w : t.pure_states) {
        const double p = dot(v, w);
        if (p < -tol || p > 1.0 + tol) return false;
    }
    return true;
}

// Dihedral symmetry group of the polygon: n rotations then n reflections.
// Element k (0 <= k < n) is rotation by 2*pi*k/n; element n+k is the
// reflection across the line at angle pi*k/n.
inline std::vector<Mat3> symmetry_group(const Theory& t) {
    std::vector<Mat3> g;
    g.reserve(2 * t.n);
    for (int k = 0; k < t.n; ++k) g.push_back(rotation_z(2.0 * k * t.theta));
    for (int k = 0; k < t.n; ++k) g.push_back(reflection_z(2.0 * k * t.theta));
    return g;
}

inline Mat3 order_isomorphism(const Theory& t) { return t.T; }

}  // namespace polygon_chsh
