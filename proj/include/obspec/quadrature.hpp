#pragma once

// Quadrature building blocks: Gauss-Legendre rules, the trigonometric
// quadrature weights for the 2pi-periodic log kernel, and Legendre moments
// of ln|sigma - s| used for the singular self-panel integrals.

#include <cmath>
#include <map>
#include <mutex>
#include <vector>

namespace obspec::quad {

struct Rule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

inline Rule make_gauss_legendre(int p) {
    Rule r;
    r.x.resize(p);
    r.w.resize(p);
    for (int i = 0; i < p; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (p + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= p; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            pp = p * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.x[p - 1 - i] = x;
        r.w[p - 1 - i] = 2.0 / ((1.0 - x * x) * pp * pp);
    }
    return r;
}

inline const Rule& gauss_legendre(int p) {
    static std::map<int, Rule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, make_gauss_legendre(p)).first;
    return it->second;
}

// Weights R_j for int_0^{2pi} ln(4 sin^2((t_i - s)/2)) f(s) ds at the
// equispaced nodes t_j = 2 pi j / N, exact for trigonometric polynomials
// of degree < N/2.  N must be even; R depends on |i - j| only.
inline std::vector<double> make_kress_log_weights(int N) {
    const int n = N / 2;
    std::vector<double> R(N);
    for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int m = 1; m < n; ++m) s += std::cos(m * j * M_PI / n) / m;
        R[j] = -(2.0 * M_PI / n) * s - (M_PI / (n * n)) * ((j % 2) ? -1.0 : 1.0);
    }
    return R;
}

inline const std::vector<double>& kress_log_weights(int N) {
    static std::map<int, std::vector<double>> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(N);
    if (it == cache.end())
        it = cache.emplace(N, make_kress_log_weights(N)).first;
    return it->second;
}

// m_k(sigma) = int_{-1}^{1} P_k(s) ln|sigma - s| ds for |sigma| < 1,
// k = 0..kmax-1, via Legendre functions of the second kind:
//   m_0 = (1-s)ln(1-s) + (1+s)ln(1+s) - 2
//   m_k = 2 (Q_{k+1} - Q_{k-1}) / (2k+1), k >= 1.
inline void log_moments(double sigma, int kmax, double* m) {
    m[0] = (1.0 - sigma) * std::log1p(-sigma) +
           (1.0 + sigma) * std::log1p(sigma) - 2.0;
    if (kmax <= 1) return;
    const double q0 = std::atanh(sigma);
    std::vector<double> Q(kmax + 2);
    Q[0] = q0;
    Q[1] = sigma * q0 - 1.0;
    for (int k = 1; k + 1 < kmax + 2; ++k)
        Q[k + 1] = ((2.0 * k + 1.0) * sigma * Q[k] - k * Q[k - 1]) / (k + 1.0);
    for (int k = 1; k < kmax; ++k)
        m[k] = 2.0 * (Q[k + 1] - Q[k - 1]) / (2.0 * k + 1.0);
}

// Interpolatory weights v_j with sum_j v_j f(x_j) = int_{-1}^1 ln|sigma-s| f(s) ds
// exact for polynomials of degree < p, built on the p-point Gauss rule.
inline std::vector<double> log_weights_on_gauss(double sigma, int p) {
    const Rule& g = gauss_legendre(p);
    std::vector<double> mom(p);
    log_moments(sigma, p, mom.data());
    std::vector<double> v(p, 0.0);
    for (int j = 0; j < p; ++j) {
        double p0 = 1.0, p1 = g.x[j];
        double acc = mom[0] * 0.5;
        if (p > 1) acc += mom[1] * 1.5 * p1;
        for (int k = 2; k < p; ++k) {
            const double p2 =
                ((2.0 * k - 1.0) * g.x[j] * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
            acc += mom[k] * (k + 0.5) * p2;
        }
        v[j] = acc * g.w[j];
    }
    return v;
}

}  // namespace obspec::quad
