// Closed-form quantities: the even-n bound, the beta/beta-hat coefficients,
// the boundary function, the G/H tables, and the closed form of the
// maximally-entangled optimum H_n(n_star).
#pragma once

#include <stdexcept>
#include <vector>

#include "theory.hpp"

namespace polygon_chsh {

struct WrongResidue : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct OutOfRange : std::out_of_range {
    using std::out_of_range::out_of_range;
};

struct OddCaseData {
    int n = 0;
    int n_star = 0;  // optimal Bob-setting separation
    int M0 = 0;      // central boundary-segment index
    int K_n = 0;     // maximally entangled rotation index
    int k_n = 0;     // companion index (stored for completeness, unused by formulas)
    int residue = 0; // n mod 8
};

inline OddCaseData odd_case_data(int n) {
    if (n < 5 || n % 2 == 0) throw WrongResidue("odd_case_data: odd n >= 5 required");
    OddCaseData d;
    d.n = n;
    d.residue = n % 8;
    switch (d.residue) {
        case 1: d.n_star = (n - 1) / 4; d.M0 = (n - 1) / 4; d.K_n = (3 * n - 3) / 8; d.k_n = -(n - 1) / 8; break;
        case 3: d.n_star = (n + 1) / 4; d.M0 = (n - 3) / 4; d.K_n = -(n - 3) / 8; d.k_n = (3 * n - 1) / 8; break;
        case 5: d.n_star = (n - 1) / 4; d.M0 = (n - 1) / 4; d.K_n = -(n + 3) / 8; d.k_n = (3 * n + 1) / 8; break;
        case 7: d.n_star = (n + 1) / 4; d.M0 = (n - 3) / 4; d.K_n = (3 * n + 3) / 8; d.k_n = -(n + 1) / 8; break;
        default: throw WrongResidue("odd_case_data: n must be odd");
    }
    return d;
}

// Even-n bound on 2 P_win - 1 for n = 2, 6 (mod 8); the CHSH value is 4x this.
inline double even_bound(int n, int l) {
    if (n % 2 != 0 || (n % 8 != 2 && n % 8 != 6))
        throw WrongResidue("even_bound: closed form only for n = 2, 6 (mod 8)");
    if (l < 0 || l > (n - 2) / 4) throw OutOfRange("even_bound: l out of range");
    const double th = std::numbers::pi / n;
    const double r2 = 1.0 / std::cos(th);
    return 0.5 * r2 * (std::cos((2 * l + 1) * th) + std::cos(th) * std::sin((2 * l + 1) * th));
}

// The upper boundary of the odd polygon: positive y-coordinate at abscissa x,
// piecewise linear with segment index M where x in [r cos((2M+2)th), r cos(2M th)].
inline double boundary_f(const Theory& t, double x) {
    if (t.n % 2 == 0) throw WrongResidue("boundary_f: odd n required");
    if (x < -1.0 / t.r - 1e-12 || x > t.r + 1e-12) throw OutOfRange("boundary_f: x out of range");
    const int seg_max = (t.n - 1) / 2;
    int M = seg_max;
    for (int k = 0; k <= seg_max; ++k) {
        if (x >= t.r * std::cos((2 * k + 2) * t.theta) - 1e-12) {
            M = k;
            break;
        }
    }
    return -x / std::tan((2 * M + 1) * t.theta) + t.r * std::cos(t.theta) / std::sin((2 * M + 1) * t.theta);
}

struct BoundCoefficients {
    double beta = 0.0, beta_hat = 0.0;
    bool even_parity = true;  // even-k or odd-k branch
    int k = 0, M = 0;
};

inline BoundCoefficients beta_coefficients(const Theory& t, int k, int M) {
    if (t.n % 2 == 0) throw WrongResidue("beta_coefficients: odd n required");
    BoundCoefficients out;
    out.k = k;
    out.M = M;
    out.even_parity = (k % 2 == 0);
    const double th = t.theta, r = t.r, R = t.R;
    const double ck = std::cos(k * th), sk = std::sin(k * th);
    const double tanM = std::tan((2 * M + 1) * th), sinM = std::sin((2 * M + 1) * th);
    if (out.even_parity) {
        out.beta = R * r * (R * (r * r - 1.0) * (ck - 1.0) - sk / tanM);
        out.beta_hat = R * (2.0 * R * r * r * ck + sk / sinM) + R * R * (1.0 + r * r * r * r);
    } else {
        out.beta = R * r * (R * (r * r - 1.0) * (-ck - 1.0) + sk / tanM);
        out.beta_hat = R * (2.0 * R * r * r * ck + sk / sinM) + 2.0 * R * R * r * r;
    }
    return out;
}

namespace detail {

// I_n(k): the Ens-All bound ingredient; sign of the beta term flips between
// the n = 1,5 and n = 3,7 residue classes and between the k-parities.
inline double bound_I(const Theory& t, int k) {
    const OddCaseData d = odd_case_data(t.n);
    const BoundCoefficients bc = beta_coefficients(t, k, d.M0);
    const double half = t.r * std::sin(std::numbers::pi / (2.0 * t.n));
    double s = (d.residue == 1 || d.residue == 5) ? 1.0 : -1.0;
    if (!bc.even_parity) s = -s;
    return bc.beta * s * half + bc.beta_hat;
}

inline double bound_I_hat(const Theory& t, int k) {
    const OddCaseData d = odd_case_data(t.n);
    return beta_coefficients(t, k, d.M0).beta_hat;
}

}  // namespace detail

// G_n(k) = 4 I_n(k) - 2 for k = 0..(n-1)/2: the Ens-All CHSH bound table.
inline std::vector<double> g_table(const Theory& t) {
    std::vector<double> out;
    for (int k = 0; k <= (t.n - 1) / 2; ++k) out.push_back(4.0 * detail::bound_I(t, k) - 2.0);
    return out;
}

// H_n(k) = 4 I-hat_n(k) - 2: the maximally-entangled CHSH bound table.
inline std::vector<double> h_table(const Theory& t) {
    std::vector<double> out;
    for (int k = 0; k <= (t.n - 1) / 2; ++k) out.push_back(4.0 * detail::bound_I_hat(t, k) - 2.0);
    return out;
}

struct HOpt {
    int n_star = 0;
    int K_n = 0;
    double H = 0.0;
};

// Closed form of H_n(n_star) by residue class mod 8.
inline HOpt h_opt(int n) {
    const OddCaseData d = odd_case_data(n);
    const Theory t = build_theory(n);
    const double th = t.theta, r2 = t.r * t.r, R = t.R;
    const double q = std::numbers::pi / 4.0;
    double h = 0.0;
    switch (d.residue) {
        case 1:
            h = 2 * R * R * (1 + r2 * (2 * std::cos(q + 0.75 * th) + 6 * std::sin(q + 0.25 * th) + r2 - 2));
            break;
        case 3:
            h = 2 * R * R * (-1 + r2 * (2 * std::sin(q + 0.75 * th) + 6 * std::cos(q + 0.25 * th) + 2 - r2));
            break;
        case 5:
            h = 2 * R * R * (-1 + r2 * (2 * std::cos(q + 0.75 * th) + 6 * std::sin(q + 0.25 * th) + 2 - r2));
            break;
        case 7:
            h = 2 * R * R * (1 + r2 * (2 * std::sin(q + 0.75 * th) + 6 * std::cos(q + 0.25 * th) + r2 - 2));
            break;
    }
    return {d.n_star, d.K_n, h};
}

}  // namespace polygon_chsh
