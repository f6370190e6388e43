#pragma once

// Modified Bessel functions K0, K1 (kernel and gradient kernel) and
// integer-order Im, Km (circle oracle).  Dependency-free: power series for
// small arguments, a Steed/Lentz continued fraction for the scaled K on
// x > 2, and ratio recurrences for the orders.  Verified against a
// high-precision table in tests/data/bessel_reference.csv.

#include <cmath>
#include <cstdint>
#include <limits>

#include "obspec/errors.hpp"

namespace obspec::bessel {

inline constexpr double euler_gamma = 0.57721566490153286060651209008;

struct BesselAccuracy {
    double target_relative_error = 1e-13;  // on arguments in [1e-8, 700]
};

namespace detail {

// I0 by power series; safe (all terms positive) up to x ~ 18.
inline double i0_series(double x) {
    const double q = 0.25 * x * x;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * k);
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

inline double i1_series(double x) {
    const double q = 0.25 * x * x;
    double term = 0.5 * x, sum = term;
    for (int k = 1; k < 64; ++k) {
        term *= q / (static_cast<double>(k) * (k + 1));
        sum += term;
        if (term < sum * 1e-18) break;
    }
    return sum;
}

// e^-x I_nu(x) by the large-argument expansion, nu = 0 or 1.
inline double ie_asymptotic(int nu, double x) {
    const double mu4 = 4.0 * nu * nu;
    double term = 1.0, sum = 1.0;
    for (int k = 1; k < 40; ++k) {
        const double num = mu4 - (2.0 * k - 1.0) * (2.0 * k - 1.0);
        const double next = term * (-num) / (8.0 * k * x);
        if (std::abs(next) >= std::abs(term)) break;  // divergent tail
        term = next;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

// K0, K1 power series, x <= 2 (A&S 9.6.10/9.6.11 with harmonic numbers).
inline double k0_series(double x) {
    const double q = 0.25 * x * x;
    const double lg = std::log(0.5 * x) + euler_gamma;
    double term = 1.0, hk = 0.0;
    double sum = 0.0;  // sum of H_k q^k / (k!)^2
    for (int k = 1; k < 40; ++k) {
        term *= q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        sum += term * hk;
        if (term * hk < 1e-18 * (1.0 + sum)) break;
    }
    return -lg * i0_series(x) + sum;
}

inline double k1_series(double x) {
    const double q = 0.25 * x * x;
    // K1 = 1/x + ln(x/2) I1 - (x/4) sum_k [psi(k+1)+psi(k+2)] q^k/(k!(k+1)!)
    double term = 1.0, sum = 0.0;
    double psi_a = -euler_gamma, psi_b = 1.0 - euler_gamma;
    for (int k = 0; k < 40; ++k) {
        if (k > 0) {
            term *= q / (static_cast<double>(k) * (k + 1));
            psi_a += 1.0 / k;
            psi_b += 1.0 / (k + 1);
        }
        sum += term * (psi_a + psi_b);
        if (std::abs(term) * (std::abs(psi_a) + psi_b + 1.0) <
            1e-18 * (1.0 + std::abs(sum)))
            break;
    }
    return 1.0 / x + std::log(0.5 * x) * i1_series(x) - 0.25 * x * sum;
}

// Steed continued fraction for the scaled K_mu at mu = 0, x > 2.
// Produces s with e^x K0 = sqrt(pi/2x)/s and the correction h with
// K1 = K0 (x + 1/2 - h)/x.
inline void k_cf2(double x, double& s_out, double& h_out) {
    const double a1 = 0.25;
    double b = 2.0 * (1.0 + x);
    double d = 1.0 / b;
    double h = d, delh = d;
    double q1 = 0.0, q2 = 1.0;
    double q = a1, c = a1;
    double a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i < 40000; ++i) {
        a -= 2 * (i - 1);
        c = -a * c / i;
        const double qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh = (b * d - 1.0) * delh;
        h += delh;
        const double dels = q * delh;
        s += dels;
        if (std::abs(dels / s) < 1e-17) break;
    }
    s_out = s;
    h_out = a1 * h;
}

}  // namespace detail

// e^x K0(x); finite over the whole admissible range.
inline double k0e(double x) {
    if (!(x > 0.0)) throw NonPositiveArgument("k0: argument must be > 0");
    if (x <= 2.0) return detail::k0_series(x) * std::exp(x);
    double s, h;
    detail::k_cf2(x, s, h);
    return std::sqrt(M_PI / (2.0 * x)) / s;
}

inline double k1e(double x) {
    if (!(x > 0.0)) throw NonPositiveArgument("k1: argument must be > 0");
    if (x <= 2.0) return detail::k1_series(x) * std::exp(x);
    double s, h;
    detail::k_cf2(x, s, h);
    return std::sqrt(M_PI / (2.0 * x)) / s * (x + 0.5 - h) / x;
}

struct ScaledValue {
    double value = 0.0;
    bool scaled = false;  // true: value = e^x K(x)
};

inline ScaledValue k0(double x) {
    if (x > 700.0) return {k0e(x), true};
    return {k0e(x) * std::exp(-x), false};
}

inline ScaledValue k1(double x) {
    if (x > 700.0) return {k1e(x), true};
    return {k1e(x) * std::exp(-x), false};
}

// Raw kernel values; underflow to zero for huge arguments.
inline double k0_raw(double x) { return k0e(x) * std::exp(-x); }
inline double k1_raw(double x) { return k1e(x) * std::exp(-x); }

inline double i0(double x) {
    if (!(x > 0.0)) throw NonPositiveArgument("i0: argument must be > 0");
    if (x <= 18.0) return detail::i0_series(x);
    return detail::ie_asymptotic(0, x) * std::exp(x);
}

inline double i0e(double x) {
    if (!(x > 0.0)) throw NonPositiveArgument("i0: argument must be > 0");
    if (x <= 18.0) return detail::i0_series(x) * std::exp(-x);
    return detail::ie_asymptotic(0, x);
}

inline double i1e(double x) {
    if (!(x > 0.0)) throw NonPositiveArgument("i1: argument must be > 0");
    if (x <= 18.0) return detail::i1_series(x) * std::exp(-x);
    return detail::ie_asymptotic(1, x);
}

namespace detail {

inline constexpr int max_order = 256;

// I_j / I_{j-1} for j = 1..m by Miller's downward recurrence.
inline void i_ratios(int m, double x, double* r) {
    const int start = m + 32 + static_cast<int>(x);
    double pj1 = 0.0;            // p_{j+1}
    double pj = 1e-280;          // p_j
    // downward to j = m, recording nothing yet
    for (int j = start; j > 0; --j) {
        const double pjm1 = pj1 + (2.0 * j / x) * pj;
        pj1 = pj;
        pj = pjm1;
        if (j <= m) r[j] = pj1 / pj;  // I_j / I_{j-1}
        if (std::abs(pj) > 1e280) {
            pj *= 1e-280;
            pj1 *= 1e-280;
        }
    }
}

}  // namespace detail

struct ImKm {
    double i = 0.0;
    double k = 0.0;
};

// (I_m(x), K_m(x)).  The pair can overflow/underflow double range for
// extreme (m, x); the product path below stays finite.
inline ImKm im_km(int m, double x) {
    if (m < 0 || m > detail::max_order)
        throw OrderTooLarge("im_km: order outside [0, 256]");
    if (!(x > 0.0)) throw NonPositiveArgument("im_km: argument must be > 0");
    const double ex = std::exp(x);
    const double i0v = i0e(x) * ex;
    const double k0v = k0e(x) / ex;
    if (m == 0) return {i0v, k0v};
    double ratios[detail::max_order + 1];
    detail::i_ratios(m, x, ratios);
    double iv = i0v;
    double lniv = std::log(i0e(x)) + x;
    for (int j = 1; j <= m; ++j) {
        iv *= ratios[j];
        lniv += std::log(ratios[j]);
    }
    if (iv == 0.0) iv = std::exp(lniv);  // rebuild from logs on underflow
    double rho = k1e(x) / k0e(x);
    double kv = k0v * rho;
    double lnkv = std::log(k0e(x)) - x + std::log(rho);
    for (int j = 1; j < m; ++j) {
        rho = 2.0 * j / x + 1.0 / rho;
        kv *= rho;
        lnkv += std::log(rho);
    }
    if (std::isinf(kv)) kv = std::exp(lnkv);
    return {iv, kv};
}

// I_m(x) K_m(x) formed from ratio products; accurate and overflow-free.
inline double im_km_product(int m, double x) {
    if (m < 0 || m > detail::max_order)
        throw OrderTooLarge("im_km_product: order outside [0, 256]");
    if (!(x > 0.0))
        throw NonPositiveArgument("im_km_product: argument must be > 0");
    double p = i0e(x) * k0e(x);
    if (m == 0) return p;
    double ratios[detail::max_order + 1];
    detail::i_ratios(m, x, ratios);
    double rho = k1e(x) / k0e(x);
    p *= ratios[1] * rho;
    for (int j = 2; j <= m; ++j) {
        rho = 2.0 * (j - 1) / x + 1.0 / rho;
        p *= ratios[j] * rho;
    }
    return p;
}

// Entire remainder RK(z) = K0(z) + I0(z) ln z, used by the panel-diagonal
// log subtraction; series valid for the small z it is called with.
inline double k0_log_remainder(double z) {
    const double q = 0.25 * z * z;
    double term = 1.0, hk = 0.0, sum = 0.0;
    for (int k = 1; k < 48; ++k) {
        term *= q / (static_cast<double>(k) * k);
        hk += 1.0 / k;
        sum += term * hk;
        if (term * hk < 1e-18 * (1.0 + sum)) break;
    }
    return (std::log(2.0) - euler_gamma) * detail::i0_series(z) + sum;
}

}  // namespace obspec::bessel
