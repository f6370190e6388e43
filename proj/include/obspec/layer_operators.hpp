#pragma once

// Nystrom assembly of the single-layer boundary operator S(lambda) for
// lambda < 0, the Dirac Birman-Schwinger operator Theta, and off-curve
// evaluation of single-layer potentials.
//
// Matrices are assembled in the measure-weighted symmetric form
// A = D^{1/2} K D^{1/2} (D = diag of quadrature weights), which is
// isospectral to the plain Nystrom matrix K D and exactly symmetric.
//
// Quadrature:
//  * circle: trapezoidal rule with the trigonometric log-kernel weights.
//    For large kappa*R the log splitting is band-limited by a smooth
//    cutoff so the I0 factor never overflows; outside the band the kernel
//    itself is exponentially small and plain trapezoid applies.
//  * panel meshes: plain sampling for separated pairs, Legendre log-moment
//    subtraction on the self panel, adaptively refined Gauss rules for
//    near pairs (including opposite-arm pairs at a corner).

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "obspec/errors.hpp"
#include "obspec/geometry.hpp"
#include "obspec/parallel.hpp"
#include "obspec/quadrature.hpp"
#include "obspec/special_functions.hpp"

namespace obspec {

struct SpectralParameter {
    double lambda = -1.0;
    double kappa = 1.0;  // sqrt(-lambda)

    static SpectralParameter from_lambda(double lambda) {
        if (!(lambda < 0.0))
            throw NonNegativeLambda("spectral parameter requires lambda < 0");
        return {lambda, std::sqrt(-lambda)};
    }
};

struct SlpMatrix {
    Eigen::MatrixXd entries;
    SpectralParameter parameter;
    uint64_t mesh_id = 0;

    int size() const { return static_cast<int>(entries.rows()); }
};

struct ThetaMatrix {
    Eigen::MatrixXd entries;
    double energy = 0.0;  // shifted Dirac energy E = lambda + c^2/2
    double c = 0.0;
    uint64_t mesh_id = 0;
};

namespace detail {

// The log splitting is restricted to kernel arguments z = kappa*d below
// chi_zero_z.  Keeping the band tight bounds the I0 factor in the
// correction weights (I0(6) ~ 67); the remaining smooth K0 tail is handled
// by the plain trapezoid rule, which resolves it whenever the mesh
// resolves the kernel width at all.
inline constexpr double chi_one_z = 3.0;
inline constexpr double chi_zero_z = 6.0;
inline constexpr double kernel_cut_z = 36.0;   // beyond this K0 ~ 2e-17

// C^5 step from 1 to 0 on [0,1].
inline double smoothstep11(double u) {
    if (u <= 0.0) return 1.0;
    if (u >= 1.0) return 0.0;
    const double v = 1.0 - u;
    const double v3 = v * v * v;
    return v3 * v3 *
           (462.0 +
            v * (-1980.0 +
                 v * (3465.0 + v * (-3080.0 + v * (1386.0 - 252.0 * v)))));
}

inline double kernel_k0(double z) {
    return z > 745.0 ? 0.0 : bessel::k0e(z) * std::exp(-z);
}

inline Eigen::MatrixXd assemble_circle(const CurveMesh& mesh, double kappa) {
    const int N = mesh.size();
    const double R = mesh.descriptor.radius;
    const double w = 2.0 * M_PI * R / N;
    const auto& Rw = quad::kress_log_weights(N);
    const double kR = kappa * R;
    const double delta1 = chi_one_z / kR;   // chi = 1 below this angle
    const double delta0 = chi_zero_z / kR;  // chi = 0 above

    Eigen::MatrixXd A(N, N);
    const double diag =
        w * ((N / (2.0 * M_PI)) * Rw[0] * (-1.0 / (4.0 * M_PI)) -
             (std::log(0.5 * kappa * R) + bessel::euler_gamma) / (2.0 * M_PI));

    // row 0 is enough: kernel depends on the index difference only
    std::vector<double> row(N);
    row[0] = diag;
    for (int j = 1; j < N; ++j) {
        const double delta = 2.0 * M_PI * j / N;
        const double deltaw = std::min(delta, 2.0 * M_PI - delta);
        const double d = 2.0 * R * std::abs(std::sin(0.5 * delta));
        const double z = kappa * d;
        const double chi = smoothstep11((deltaw - delta1) / (delta0 - delta1));
        double kt = kernel_k0(z) / (2.0 * M_PI);
        if (chi > 0.0) {
            const double i0 = bessel::i0(z);
            const double lnterm =
                std::log(4.0 * std::sin(0.5 * delta) * std::sin(0.5 * delta));
            const double m1 = -chi * i0 / (4.0 * M_PI);
            kt += (N / (2.0 * M_PI)) * Rw[j] * m1 + (-m1) * lnterm;
        }
        row[j] = w * kt;
    }
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) A(i, j) = row[std::abs(i - j)];
    return A;
}

// Eigenvalues of the (symmetric circulant) circle matrix, descending,
// computed from its first row; identical spectrum to the dense solve.
inline Eigen::VectorXd circle_spectrum(const CurveMesh& mesh, double kappa,
                                       Eigen::MatrixXd* full = nullptr) {
    const Eigen::MatrixXd A = assemble_circle(mesh, kappa);
    const int N = mesh.size();
    std::vector<double> ct(N);
    for (int k = 0; k < N; ++k) ct[k] = std::cos(2.0 * M_PI * k / N);
    Eigen::VectorXd ev(N);
    for (int m = 0; m < N; ++m) {
        double s = 0.0;
        long idx = 0;
        for (int j = 0; j < N; ++j) {
            s += A(0, j) * ct[idx];
            idx += m;
            if (idx >= N) idx -= N;
        }
        ev[m] = s;
    }
    std::sort(ev.data(), ev.data() + N, std::greater<double>());
    if (full) *full = A;
    return ev;
}

struct PanelGeom {
    double length = 0.0;
    Vec2 lo, hi;  // node bounding box
};

inline double bbox_distance(const Vec2& p, const PanelGeom& g) {
    const double dx = std::max({g.lo.x() - p.x(), 0.0, p.x() - g.hi.x()});
    const double dy = std::max({g.lo.y() - p.y(), 0.0, p.y() - g.hi.y()});
    return std::hypot(dx, dy);
}

// Barycentric Lagrange basis on the panel-order Gauss nodes.
struct PanelBasis {
    std::vector<double> nodes, bw;

    explicit PanelBasis(int p) {
        nodes = quad::gauss_legendre(p).x;
        bw.assign(p, 1.0);
        for (int j = 0; j < p; ++j)
            for (int k = 0; k < p; ++k)
                if (k != j) bw[j] /= (nodes[j] - nodes[k]);
    }

    void eval(double u, double* out) const {
        const int p = static_cast<int>(nodes.size());
        for (int j = 0; j < p; ++j) {
            if (std::abs(u - nodes[j]) < 1e-14) {
                for (int k = 0; k < p; ++k) out[k] = (k == j) ? 1.0 : 0.0;
                return;
            }
        }
        double denom = 0.0;
        for (int j = 0; j < p; ++j) {
            out[j] = bw[j] / (u - nodes[j]);
            denom += out[j];
        }
        for (int j = 0; j < p; ++j) out[j] /= denom;
    }
};

inline const PanelBasis& panel_basis(int p) {
    static std::map<int, PanelBasis> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(p);
    if (it == cache.end()) it = cache.emplace(p, PanelBasis(p)).first;
    return it->second;
}

// int_P k(x_i, y(t)) l_j(t) |y'(t)| dt for all basis functions l_j of the
// panel, via the parameter-log subtraction with exact Legendre moments.
// Valid when the target lies on the panel and kappa*len is moderate.
inline void self_panel_log(const CurveMesh& mesh, const Panel& P, double ui,
                           double kappa, double* out) {
    const int p = mesh.panel_order;
    const Piece& pc = mesh.pieces[P.piece];
    const double half = 0.5 * (P.b - P.a);
    const double mid = 0.5 * (P.b + P.a);
    const Vec2 xi = pc.point(mid + half * ui);

    const int pf = 2 * p;  // oversampled smooth-part rule
    const auto& fine = quad::gauss_legendre(pf);
    const auto logw = quad::log_weights_on_gauss(ui, pf);
    const auto& basis = panel_basis(p);

    std::vector<double> lj(p);
    std::fill(out, out + p, 0.0);
    const double speed_i = pc.velocity(mid + half * ui).norm();
    for (int m = 0; m < pf; ++m) {
        const double u = fine.x[m];
        const double t = mid + half * u;
        const Vec2 y = pc.point(t);
        const double speed = pc.velocity(t).norm();
        const double d = (y - xi).norm();
        const double du = std::abs(u - ui);
        const double G = du < 1e-13 ? half * speed_i : d / du;
        const double z = kappa * d;
        const double i0 = bessel::i0(std::max(z, 1e-300));
        // smooth part: K0 + I0 ln d = RK(z) - I0 ln kappa, then subtract
        // the parameter log I0 ln G handled here, I0 ln|u-ui| by moments
        const double smooth =
            bessel::k0_log_remainder(z) - i0 * std::log(kappa) - i0 * std::log(G);
        basis.eval(u, lj.data());
        const double common = half * speed / (2.0 * M_PI);
        for (int j = 0; j < p; ++j) {
            out[j] += fine.w[m] * smooth * common * lj[j];
            out[j] += logw[m] * (-i0) * common * lj[j];
        }
    }
}

// Adaptive panel integration of the same block; handles targets on or near
// the panel at any kappa by geometric refinement toward the nearest point.
inline void panel_adaptive(const CurveMesh& mesh, const Panel& P,
                           const Vec2& xi, double kappa, double* out) {
    const int p = mesh.panel_order;
    const Piece& pc = mesh.pieces[P.piece];
    const double half = 0.5 * (P.b - P.a);
    const double mid = 0.5 * (P.b + P.a);
    const auto& basis = panel_basis(p);
    std::fill(out, out + p, 0.0);

    // locate the parameter of closest approach by sampling + golden section
    double tstar = P.a, dbest = std::numeric_limits<double>::max();
    for (int k = 0; k <= 24; ++k) {
        const double t = P.a + (P.b - P.a) * k / 24.0;
        const double d = (pc.point(t) - xi).norm();
        if (d < dbest) {
            dbest = d;
            tstar = t;
        }
    }
    {
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double a = std::max(P.a, tstar - (P.b - P.a) / 24.0);
        double b = std::min(P.b, tstar + (P.b - P.a) / 24.0);
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = (pc.point(c1) - xi).norm(), f2 = (pc.point(c2) - xi).norm();
        for (int it = 0; it < 60; ++it) {
            if (f1 < f2) {
                b = c2;
                c2 = c1;
                f2 = f1;
                c1 = b - gr * (b - a);
                f1 = (pc.point(c1) - xi).norm();
            } else {
                a = c1;
                c1 = c2;
                f1 = f2;
                c2 = a + gr * (b - a);
                f2 = (pc.point(c2) - xi).norm();
            }
        }
        tstar = 0.5 * (a + b);
        dbest = (pc.point(tstar) - xi).norm();
    }

    const double dpar = dbest / std::max(pc.velocity(tstar).norm(), 1e-300);
    const auto& leaf_rule = quad::gauss_legendre(12);
    std::vector<double> lj(p);
    auto leaf = [&](double a, double b) {
        if (a > b) std::swap(a, b);
        const double lh = 0.5 * (b - a), lm = 0.5 * (b + a);
        for (int m = 0; m < 12; ++m) {
            const double t = lm + lh * leaf_rule.x[m];
            const Vec2 y = pc.point(t);
            const double speed = pc.velocity(t).norm();
            const double z = kappa * (y - xi).norm();
            const double k0 = kernel_k0(std::max(z, 1e-300)) / (2.0 * M_PI);
            basis.eval((t - mid) / half, lj.data());
            for (int j = 0; j < p; ++j)
                out[j] += leaf_rule.w[m] * lh * k0 * speed * lj[j];
        }
    };
    auto refine_side = [&](double from, double to) {
        // integrate [from, to] with from the singular end
        const double len = std::abs(to - from);
        if (len < 1e-300) return;
        const double sgn = to > from ? 1.0 : -1.0;
        const double floor_len = std::max(1e-14 * len, 0.5 * dpar);
        double hi = len;
        while (hi > floor_len) {
            const double lo = std::max(0.5 * hi, floor_len);
            leaf(from + sgn * lo, from + sgn * hi);
            hi = lo;
        }
        if (dpar > 0.25 * floor_len) leaf(from, from + sgn * hi);
    };
    refine_side(tstar, P.b);
    refine_side(tstar, P.a);
}

inline Eigen::MatrixXd assemble_panel_mesh(const CurveMesh& mesh, double kappa) {
    const int N = mesh.size();
    const int p = mesh.panel_order;
    Eigen::MatrixXd A(N, N);

    std::vector<PanelGeom> geo(mesh.panels.size());
    for (size_t q = 0; q < mesh.panels.size(); ++q) {
        const Panel& P = mesh.panels[q];
        PanelGeom g;
        g.lo = Vec2(std::numeric_limits<double>::max(),
                    std::numeric_limits<double>::max());
        g.hi = -g.lo;
        for (int j = 0; j < P.count; ++j) {
            g.length += mesh.weights[P.first + j];
            g.lo = g.lo.cwiseMin(mesh.nodes[P.first + j]);
            g.hi = g.hi.cwiseMax(mesh.nodes[P.first + j]);
        }
        geo[q] = g;
    }

    detail::parallel_for(0, N, [&](int i) {
        const Vec2& x = mesh.nodes[i];
        const double swi = std::sqrt(mesh.weights[i]);
        for (int j = 0; j < N; ++j) {
            const double d = (x - mesh.nodes[j]).norm();
            A(i, j) = i == j ? 0.0
                             : swi * std::sqrt(mesh.weights[j]) *
                                   kernel_k0(kappa * d) / (2.0 * M_PI);
        }
    });

    // self and near corrections
    std::vector<double> block(p);
    for (int i = 0; i < N; ++i) {
        const Vec2& x = mesh.nodes[i];
        const int own = mesh.panel_map[i];
        for (size_t q = 0; q < mesh.panels.size(); ++q) {
            const Panel& P = mesh.panels[q];
            const bool self = static_cast<int>(q) == own;
            const double dist = bbox_distance(x, geo[q]);
            if (!self && dist > 1.5 * geo[q].length) continue;
            if (!self && kappa * dist > kernel_cut_z) continue;
            if (self && kappa * geo[q].length <= 4.0) {
                const double half = 0.5 * (P.b - P.a);
                const double ui = (mesh.param[i] - 0.5 * (P.b + P.a)) / half;
                self_panel_log(mesh, P, ui, kappa, block.data());
            } else {
                panel_adaptive(mesh, P, x, kappa, block.data());
            }
            const double swi = std::sqrt(mesh.weights[i]);
            for (int j = 0; j < P.count; ++j)
                A(i, P.first + j) =
                    swi * block[j] / std::sqrt(mesh.weights[P.first + j]);
        }
    }

    // exact symmetry
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
            const double v = 0.5 * (A(i, j) + A(j, i));
            A(i, j) = v;
            A(j, i) = v;
        }
    return A;
}

}  // namespace detail

inline SlpMatrix assemble_slp(const CurveMesh& mesh, SpectralParameter lam) {
    if (!(lam.lambda < 0.0))
        throw NonNegativeLambda("assemble_slp: lambda must be < 0");
    if (mesh.size() < 8) throw MeshTooSmall("assemble_slp: need >= 8 nodes");
    SlpMatrix out;
    out.parameter = lam;
    out.mesh_id = mesh.hash();
    out.entries = mesh.descriptor.kind == CurveKind::Circle
                      ? detail::assemble_circle(mesh, lam.kappa)
                      : detail::assemble_panel_mesh(mesh, lam.kappa);
    return out;
}

inline SlpMatrix assemble_slp(const CurveMesh& mesh, double lambda) {
    return assemble_slp(mesh, SpectralParameter::from_lambda(lambda));
}

// Theta(E) = (1/c)(E/c - c/2) S(E^2/c^2 - c^2/4); defined inside the gap
// |E| < c^2/2 where the effective Laplacian parameter is negative.
inline ThetaMatrix assemble_theta(const CurveMesh& mesh, double E, double c) {
    if (!(c > 0.0)) throw OutsideGap("assemble_theta: need c > 0");
    const double mu_eff = E * E / (c * c) - 0.25 * c * c;
    if (!(mu_eff < 0.0))
        throw OutsideGap("assemble_theta: |E| >= c^2/2 (outside the gap)");
    SlpMatrix s = assemble_slp(mesh, mu_eff);
    ThetaMatrix th;
    th.energy = E;
    th.c = c;
    th.mesh_id = s.mesh_id;
    th.entries = ((E / c - 0.5 * c) / c) * s.entries;
    return th;
}

struct PotentialField {
    std::vector<std::complex<double>> slp;       // S(lambda) g
    std::vector<std::complex<double>> psi_star;  // -2 dbar S(lambda) g
};

inline PotentialField eval_potential(const CurveMesh& mesh,
                                     const Eigen::VectorXd& density,
                                     SpectralParameter lam,
                                     const std::vector<Vec2>& points) {
    const double hmin = mesh.min_panel_length();
    const double kappa = lam.kappa;
    PotentialField f;
    f.slp.resize(points.size());
    f.psi_star.resize(points.size());
    for (size_t q = 0; q < points.size(); ++q) {
        const Vec2& x = points[q];
        double dmin = std::numeric_limits<double>::max();
        for (const auto& y : mesh.nodes) dmin = std::min(dmin, (x - y).norm());
        if (dmin < hmin)
            throw PointTooCloseToCurve("eval_potential: point within one panel");
        std::complex<double> s(0.0, 0.0), psi(0.0, 0.0);
        for (int j = 0; j < mesh.size(); ++j) {
            const Vec2 dx = x - mesh.nodes[j];
            const double r = dx.norm();
            const double gw = density[j] * mesh.weights[j];
            s += detail::kernel_k0(kappa * r) / (2.0 * M_PI) * gw;
            // grad_x Phi = -(kappa/2pi) K1(kappa r) dx / r;
            // psi* = -(d/dx1 - i d/dx2) S
            const double k1 =
                kappa * r > 745.0 ? 0.0 : bessel::k1e(kappa * r) * std::exp(-kappa * r);
            const double g1 = kappa / (2.0 * M_PI) * k1 / r;
            psi += std::complex<double>(g1 * dx.x(), -g1 * dx.y()) * gw;
        }
        f.slp[q] = s;
        f.psi_star[q] = psi;
    }
    return f;
}

}  // namespace obspec
