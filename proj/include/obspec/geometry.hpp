#pragma once

// Curve descriptors and quadrature meshes: the circle (equispaced
// trapezoidal nodes), the teardrop-shaped corner loop, and truncated broken
// lines.  All outputs are immutable after construction.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "obspec/errors.hpp"
#include "obspec/quadrature.hpp"

namespace obspec {

using Vec2 = Eigen::Vector2d;

enum class CurveKind { Circle, CornerLoop, BrokenLine };

struct CurveDescriptor {
    CurveKind kind = CurveKind::Circle;
    double radius = 0.0;      // Circle
    double half_angle = 0.0;  // CornerLoop / BrokenLine opening half-angle
    double scale = 0.0;       // CornerLoop straight-part radius r
    double truncation = 0.0;  // BrokenLine arm length L
    bool closed = true;
    std::vector<double> corners;  // parameter values with a tangent jump
};

// One smooth parametric segment of the curve.
struct Piece {
    std::function<Vec2(double)> point;
    std::function<Vec2(double)> velocity;  // d point / d parameter
    double t0 = 0.0, t1 = 0.0;
};

struct Panel {
    int piece = 0;
    double a = 0.0, b = 0.0;  // parameter subinterval of the piece
    int first = 0, count = 0; // node index range
};

struct CurveMesh {
    std::vector<Vec2> nodes;
    std::vector<double> weights;   // positive arclength quadrature weights
    std::vector<Vec2> normals;     // unit, pointing into the exterior
    std::vector<int> panel_map;    // panel index per node
    std::vector<double> param;     // per-node parameter within its piece
    double grading_exponent = 1.0;
    CurveDescriptor descriptor;
    std::vector<Piece> pieces;
    std::vector<Panel> panels;     // empty for the circle (global rule)
    int panel_order = 8;

    int size() const { return static_cast<int>(nodes.size()); }

    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }

    double min_panel_length() const {
        if (panels.empty())
            return weights.empty() ? 0.0 : weights.front();
        double m = std::numeric_limits<double>::max();
        for (const auto& p : panels) {
            double len = 0.0;
            for (int j = 0; j < p.count; ++j) len += weights[p.first + j];
            m = std::min(m, len);
        }
        return m;
    }

    uint64_t hash() const {
        uint64_t h = 1469598103934665603ull;
        auto mix = [&h](const void* data, size_t nbytes) {
            const unsigned char* b = static_cast<const unsigned char*>(data);
            for (size_t i = 0; i < nbytes; ++i) {
                h ^= b[i];
                h *= 1099511628211ull;
            }
        };
        for (const auto& p : nodes) mix(p.data(), 2 * sizeof(double));
        mix(weights.data(), weights.size() * sizeof(double));
        int kind = static_cast<int>(descriptor.kind);
        mix(&kind, sizeof(kind));
        return h;
    }
};

namespace detail {

inline Vec2 outward_normal(const Vec2& velocity) {
    const double s = velocity.norm();
    return Vec2(velocity.y() / s, -velocity.x() / s);
}

// Append composite Gauss panels over the given breakpoints of one piece.
inline void add_panels(CurveMesh& mesh, int piece,
                       const std::vector<double>& breaks) {
    const auto& rule = quad::gauss_legendre(mesh.panel_order);
    const Piece& pc = mesh.pieces[piece];
    for (size_t k = 0; k + 1 < breaks.size(); ++k) {
        Panel p;
        p.piece = piece;
        p.a = breaks[k];
        p.b = breaks[k + 1];
        p.first = mesh.size();
        p.count = mesh.panel_order;
        const double half = 0.5 * (p.b - p.a);
        const double mid = 0.5 * (p.b + p.a);
        for (int j = 0; j < mesh.panel_order; ++j) {
            const double t = mid + half * rule.x[j];
            const Vec2 v = pc.velocity(t);
            mesh.nodes.push_back(pc.point(t));
            mesh.weights.push_back(rule.w[j] * half * v.norm());
            mesh.normals.push_back(outward_normal(v));
            mesh.panel_map.push_back(static_cast<int>(mesh.panels.size()));
            mesh.param.push_back(t);
        }
        mesh.panels.push_back(p);
    }
}

inline std::vector<double> graded_breaks(double len, int npanels, double q,
                                         bool toward_start) {
    std::vector<double> b(npanels + 1);
    for (int k = 0; k <= npanels; ++k) {
        const double u = static_cast<double>(k) / npanels;
        b[k] = toward_start ? len * std::pow(u, q)
                            : len * (1.0 - std::pow(1.0 - u, q));
    }
    return b;
}

inline std::vector<double> uniform_breaks(double len, int npanels) {
    std::vector<double> b(npanels + 1);
    for (int k = 0; k <= npanels; ++k) b[k] = len * k / npanels;
    return b;
}

// Even-polynomial fillet profile with fourth-order contact to |t| at t=1;
// second derivative is proportional to (1-t^2)^3.
inline double fillet_profile(double t) {
    const double t2 = t * t;
    return (35.0 + t2 * (140.0 + t2 * (-70.0 + t2 * (28.0 - 5.0 * t2)))) /
           128.0;
}

inline double fillet_profile_deriv(double t) {
    const double t2 = t * t;
    return t * (280.0 + t2 * (-280.0 + t2 * (168.0 - 40.0 * t2))) / 128.0;
}

}  // namespace detail

inline CurveMesh build_circle(double radius, int n_nodes) {
    if (!(radius > 0.0)) throw NonPositiveRadius("build_circle: radius <= 0");
    if (n_nodes < 8 || n_nodes % 2 != 0)
        throw TooFewNodes("build_circle: need n_nodes >= 8 and even");
    CurveMesh mesh;
    mesh.descriptor = {CurveKind::Circle, radius, 0.0, 0.0, 0.0, true, {}};
    Piece pc;
    pc.t0 = 0.0;
    pc.t1 = 2.0 * M_PI;
    pc.point = [radius](double t) {
        return Vec2(radius * std::cos(t), radius * std::sin(t));
    };
    pc.velocity = [radius](double t) {
        return Vec2(-radius * std::sin(t), radius * std::cos(t));
    };
    mesh.pieces.push_back(pc);
    const double w = 2.0 * M_PI * radius / n_nodes;
    for (int j = 0; j < n_nodes; ++j) {
        const double t = 2.0 * M_PI * j / n_nodes;
        mesh.nodes.emplace_back(radius * std::cos(t), radius * std::sin(t));
        mesh.weights.push_back(w);
        mesh.normals.emplace_back(std::cos(t), std::sin(t));
        mesh.panel_map.push_back(0);
        mesh.param.push_back(t);
    }
    return mesh;
}

inline CurveMesh build_broken_line(double theta, double L, int n_nodes,
                                   double q) {
    if (!(theta > 0.0 && theta < 0.5 * M_PI))
        throw AngleOutOfRange("build_broken_line: theta outside (0, pi/2)");
    if (!(L > 0.0)) throw NonPositiveLength("build_broken_line: L <= 0");
    if (!(q >= 1.0)) throw BadGrading("build_broken_line: grading q < 1");
    CurveMesh mesh;
    mesh.grading_exponent = q;
    mesh.descriptor =
        {CurveKind::BrokenLine, 0.0, theta, 0.0, L, false, {0.0}};
    const double c = std::cos(theta), s = std::sin(theta);
    for (int arm = 0; arm < 2; ++arm) {
        const double sy = arm == 0 ? -s : s;
        Piece pc;
        pc.t0 = 0.0;
        pc.t1 = L;
        pc.point = [c, sy](double t) { return Vec2(t * c, t * sy); };
        pc.velocity = [c, sy](double) { return Vec2(c, sy); };
        mesh.pieces.push_back(pc);
    }
    const int per_arm = std::max(2, n_nodes / (2 * mesh.panel_order));
    for (int arm = 0; arm < 2; ++arm)
        detail::add_panels(mesh, arm, detail::graded_breaks(L, per_arm, q, true));
    return mesh;
}

// Closed "teardrop": the exact wedge of half-angle theta near the origin,
// straight out to leg length Lg, closed by a vertical far side, with the two
// far corners replaced by fillets that meet the straight parts with
// fourth-order contact.  Satisfies: curve == wedge inside B_{2r}(0),
// C^4-smooth away from the origin.
inline CurveMesh build_corner_loop(double theta, double r, int n_nodes,
                                   double q) {
    if (!(theta > 0.0 && theta < 0.5 * M_PI))
        throw AngleOutOfRange("build_corner_loop: theta outside (0, pi/2)");
    if (!(r > 0.0)) throw NonPositiveRadius("build_corner_loop: r <= 0");
    if (!(q >= 1.0)) throw BadGrading("build_corner_loop: grading q < 1");
    CurveMesh mesh;
    mesh.grading_exponent = q;
    mesh.descriptor =
        {CurveKind::CornerLoop, 0.0, theta, r, 0.0, true, {0.0}};

    const double ct = std::cos(theta), st = std::sin(theta);
    const double leg =
        r * std::max({5.0, 2.0 / st, 2.5 / ct});  // keeps far side outside B_2r
    const double psi = 0.25 * M_PI - 0.5 * theta;  // fillet half-opening
    const double slope = 1.0 / std::tan(psi);
    const double reach = r;             // edge length consumed by a fillet
    const double x0 = reach * std::sin(psi);

    const Vec2 eA(ct, -st);  // lower edge direction (traversal leaves O here)
    const Vec2 eB(ct, st);
    const Vec2 A = leg * eA, B = leg * eB;
    const Vec2 u1 = -eA;           // A -> O
    const Vec2 u2(0.0, 1.0);       // A -> B
    Vec2 ebis = (u1 + u2).normalized();
    Vec2 eprp(ebis.y(), -ebis.x());
    if (u1.dot(eprp) > 0.0) eprp = -eprp;

    Piece ray_lo;
    ray_lo.t0 = 0.0;
    ray_lo.t1 = leg - reach;
    ray_lo.point = [eA](double t) { return Vec2(t * eA); };
    ray_lo.velocity = [eA](double) { return eA; };

    Piece filletA;
    filletA.t0 = -x0;
    filletA.t1 = x0;
    filletA.point = [A, eprp, ebis, slope, x0](double x) {
        return Vec2(A + x * eprp +
                    slope * x0 * detail::fillet_profile(x / x0) * ebis);
    };
    filletA.velocity = [eprp, ebis, slope, x0](double x) {
        return Vec2(eprp + slope * detail::fillet_profile_deriv(x / x0) * ebis);
    };

    const double ylo = -leg * st + reach;
    Piece side;
    side.t0 = 0.0;
    side.t1 = 2.0 * (leg * st - reach);
    side.point = [leg, ct, ylo](double t) { return Vec2(leg * ct, ylo + t); };
    side.velocity = [](double) { return Vec2(0.0, 1.0); };

    Piece filletB;  // mirror image of filletA, reversed parameter
    filletB.t0 = -x0;
    filletB.t1 = x0;
    filletB.point = [fA = filletA.point](double x) {
        const Vec2 p = fA(-x);
        return Vec2(p.x(), -p.y());
    };
    filletB.velocity = [vA = filletA.velocity](double x) {
        const Vec2 v = vA(-x);
        return Vec2(-v.x(), v.y());
    };

    Piece ray_hi;
    ray_hi.t0 = 0.0;
    ray_hi.t1 = leg - reach;
    ray_hi.point = [eB, leg, reach](double t) {
        return Vec2((leg - reach - t) * eB);
    };
    ray_hi.velocity = [eB](double) { return Vec2(-eB); };

    mesh.pieces = {ray_lo, filletA, side, filletB, ray_hi};

    // panel budget split by length, grading on the two straight legs
    const double len_ray = leg - reach;
    const double len_fil = 2.2 * x0;  // fillet arc estimate, only for budgeting
    const double len_side = side.t1;
    const double total = 2.0 * len_ray + 2.0 * len_fil + len_side;
    const int panels_total = std::max(10, n_nodes / mesh.panel_order);
    auto share = [&](double len) {
        return std::max(2, static_cast<int>(std::lround(panels_total * len / total)));
    };
    // fillets turn by pi/2 + theta over a short arc; panel them by turn angle
    const int fil_panels =
        std::max({6, share(len_fil),
                  static_cast<int>(std::ceil(12.0 * (0.5 * M_PI + theta) / M_PI))});
    detail::add_panels(mesh, 0, detail::graded_breaks(len_ray, share(len_ray), q, true));
    {
        auto b = detail::uniform_breaks(2.0 * x0, fil_panels);
        for (double& v : b) v -= x0;
        detail::add_panels(mesh, 1, b);
    }
    detail::add_panels(mesh, 2, detail::uniform_breaks(len_side, share(len_side)));
    {
        auto b = detail::uniform_breaks(2.0 * x0, fil_panels);
        for (double& v : b) v -= x0;
        detail::add_panels(mesh, 3, b);
    }
    detail::add_panels(mesh, 4,
                       detail::graded_breaks(len_ray, share(len_ray), q, false));
    return mesh;
}

// Exact dilation by s > 0: nodes and weights scale linearly.
inline CurveMesh scale_mesh(const CurveMesh& mesh, double s) {
    CurveMesh out = mesh;
    for (auto& p : out.nodes) p *= s;
    for (auto& w : out.weights) w *= s;
    out.descriptor.radius *= s;
    out.descriptor.scale *= s;
    out.descriptor.truncation *= s;
    for (auto& c : out.descriptor.corners) c *= s;
    out.pieces.clear();
    for (const auto& pc : mesh.pieces) {
        Piece q2;
        q2.t0 = pc.t0 * s;
        q2.t1 = pc.t1 * s;
        q2.point = [s, f = pc.point](double t) { return Vec2(s * f(t / s)); };
        q2.velocity = [s, f = pc.velocity](double t) { return Vec2(f(t / s)); };
        out.pieces.push_back(q2);
    }
    for (auto& p : out.panels) {
        p.a *= s;
        p.b *= s;
    }
    for (auto& t : out.param) t *= s;
    return out;
}

}  // namespace obspec
