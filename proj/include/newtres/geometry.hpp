#pragma once
/**
 * @file geometry.hpp
 * @brief Exact 2D primitives for billiard tracing: vectors, rays, boundary
 *        arcs (line segments and parabola pieces), intersection and specular
 *        reflection.
 *
 * Conventions:
 *   - All quantities are dimensionless, expressed in opening units.
 *   - Arcs are directed. The interior-side unit normal is the right-hand
 *     normal of the traversal direction, so a chain walked with the cavity
 *     region on its right carries normals that point into the region.
 *   - Parabola pieces are graphs x = a*y^2 + b*y + c over a y-interval,
 *     traversed from y_start to y_end (y_start != y_end).
 *
 * Numerical policy (shared with the billiard):
 *   - Grazing hits with |d.n| < kGrazingTol are discarded.
 *   - A hit within kParamTol of an arc endpoint (in the arc parameter)
 *     still counts as a hit on that arc.
 *   - Quadratics are solved with the cancellation-safe root form: the
 *     larger-magnitude root via -(B + sign(B)*sqrt(D))/2, the other via
 *     Vieta's product rule.
 */

#include <cassert>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <variant>

namespace newtres {

/// Grazing threshold: candidate hits with |d.n| below this are ignored.
inline constexpr double kGrazingTol = 1e-10;
/// Endpoint inclusion tolerance, measured in the arc parameter.
inline constexpr double kParamTol = 1e-12;
/// Unit-norm tolerance used by invariant checks.
inline constexpr double kUnitTol = 1e-12;

/// 2D vector with double components (also used for points).
struct Vec2 {
    double x{0.0};
    double y{0.0};

    constexpr Vec2() = default;
    constexpr Vec2(double X, double Y) : x(X), y(Y) {}

    constexpr Vec2 operator+(const Vec2& r) const { return {x + r.x, y + r.y}; }
    constexpr Vec2 operator-(const Vec2& r) const { return {x - r.x, y - r.y}; }
    constexpr Vec2 operator-() const { return {-x, -y}; }
    constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
    friend constexpr Vec2 operator*(double s, const Vec2& v) { return {v.x * s, v.y * s}; }

    constexpr double dot(const Vec2& r) const { return x * r.x + y * r.y; }
    /// z-component of the 3D cross product; positive when r is anticlockwise from *this.
    constexpr double cross(const Vec2& r) const { return x * r.y - y * r.x; }
    double norm() const { return std::hypot(x, y); }
    constexpr double norm2() const { return x * x + y * y; }

    Vec2 normalized() const {
        double n = norm();
        return (n > 0.0) ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
    }

    constexpr bool operator==(const Vec2&) const = default;
};

/// Half-line origin + t*direction, t >= 0. direction is unit length.
struct Ray {
    Vec2 origin;
    Vec2 direction;
};

/// Directed straight segment from p0 to p1 (p0 != p1).
struct SegmentArc {
    Vec2 p0;
    Vec2 p1;
};

/// Directed parabola piece x = a*y^2 + b*y + c, traversed y_start -> y_end.
/// a may be zero (the piece degenerates to a straight graph).
struct ParabolaArc {
    double a{0.0};
    double b{0.0};
    double c{0.0};
    double y_start{0.0};
    double y_end{0.0};

    double x_at(double y) const { return (a * y + b) * y + c; }
    double slope_at(double y) const { return 2.0 * a * y + b; }
    Vec2 point_at(double y) const { return {x_at(y), y}; }
};

using Arc = std::variant<SegmentArc, ParabolaArc>;

/// First point of the arc in traversal order.
inline Vec2 arc_start(const Arc& arc) {
    if (const auto* s = std::get_if<SegmentArc>(&arc)) return s->p0;
    const auto& p = std::get<ParabolaArc>(arc);
    return p.point_at(p.y_start);
}

/// Last point of the arc in traversal order.
inline Vec2 arc_end(const Arc& arc) {
    if (const auto* s = std::get_if<SegmentArc>(&arc)) return s->p1;
    const auto& p = std::get<ParabolaArc>(arc);
    return p.point_at(p.y_end);
}

/// Interior-side unit normal of a segment (right-hand normal of p0 -> p1).
inline Vec2 segment_normal(const SegmentArc& s) {
    Vec2 t = s.p1 - s.p0;
    return Vec2{t.y, -t.x}.normalized();
}

/// Interior-side unit normal of a parabola piece at ordinate y.
inline Vec2 parabola_normal_at(const ParabolaArc& p, double y) {
    double sgn = (p.y_end >= p.y_start) ? 1.0 : -1.0;
    // Right-hand normal of the traversal tangent sgn*(x'(y), 1).
    return Vec2{sgn, -sgn * p.slope_at(y)}.normalized();
}

/// Interior-side unit normal evaluated near a point on the arc.
/// Segments have a constant normal; parabola pieces use near.y as parameter.
inline Vec2 arc_normal_near(const Arc& arc, const Vec2& near) {
    if (const auto* s = std::get_if<SegmentArc>(&arc)) return segment_normal(*s);
    return parabola_normal_at(std::get<ParabolaArc>(arc), near.y);
}

/// Specular reflection of unit direction d about unit normal n:
/// d - 2(d.n)n. The normal component is negated, the tangential kept.
inline Vec2 reflect(const Vec2& d, const Vec2& n) {
    assert(std::abs(d.norm() - 1.0) < 1e-9 && std::abs(n.norm() - 1.0) < 1e-9);
    return d - (2.0 * d.dot(n)) * n;
}

/// Result of a ray/arc intersection query.
struct Hit {
    double t{0.0};   ///< ray parameter at the hit, strictly greater than t_min
    Vec2 point;      ///< hit location
    Vec2 normal;     ///< interior-side unit normal at the hit
};

namespace detail {

/// Solves A t^2 + B t + C = 0. Writes up to two real roots in ascending
/// order. Cancellation-safe: larger-magnitude root from the q-form, the
/// other from Vieta.
inline int solve_quadratic(double A, double B, double C, double roots[2]) {
    if (A == 0.0) {
        if (B == 0.0) return 0;
        roots[0] = -C / B;
        return 1;
    }
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) return 0;
    double s = (B >= 0.0) ? 1.0 : -1.0;
    double q = -0.5 * (B + s * std::sqrt(disc));
    double r0, r1;
    if (q != 0.0) {
        r0 = q / A;
        r1 = C / q;
    } else {
        r0 = r1 = 0.0;  // B == 0 and disc == 0
    }
    if (r0 > r1) std::swap(r0, r1);
    roots[0] = r0;
    roots[1] = r1;
    return 2;
}

inline std::optional<Hit> intersect_segment(const Ray& ray, const SegmentArc& seg, double t_min) {
    Vec2 e = seg.p1 - seg.p0;
    double elen = e.norm();
    if (elen == 0.0) return std::nullopt;
    double denom = ray.direction.cross(e);
    // |denom|/|e| equals |d.n|, so the parallel test doubles as the grazing test.
    if (std::abs(denom) < kGrazingTol * elen) return std::nullopt;
    Vec2 w = seg.p0 - ray.origin;
    double t = w.cross(e) / denom;
    double s = w.cross(ray.direction) / denom;
    if (!(t > t_min)) return std::nullopt;
    if (s < -kParamTol || s > 1.0 + kParamTol) return std::nullopt;
    return Hit{t, ray.origin + t * ray.direction, segment_normal(seg)};
}

inline std::optional<Hit> intersect_parabola(const Ray& ray, const ParabolaArc& par, double t_min) {
    const Vec2 o = ray.origin;
    const Vec2 d = ray.direction;
    // Substitute the ray into x = a y^2 + b y + c.
    double A = par.a * d.y * d.y;
    double B = 2.0 * par.a * o.y * d.y + par.b * d.y - d.x;
    double C = (par.a * o.y + par.b) * o.y + par.c - o.x;
    double roots[2];
    int nr = solve_quadratic(A, B, C, roots);
    double y_lo = std::min(par.y_start, par.y_end) - kParamTol;
    double y_hi = std::max(par.y_start, par.y_end) + kParamTol;
    for (int i = 0; i < nr; ++i) {
        double t = roots[i];
        if (!(t > t_min) || !std::isfinite(t)) continue;
        double y = o.y + t * d.y;
        if (!(y >= y_lo && y <= y_hi)) continue;
        Vec2 n = parabola_normal_at(par, y);
        if (std::abs(d.dot(n)) < kGrazingTol) continue;
        return Hit{t, {o.x + t * d.x, y}, n};
    }
    return std::nullopt;
}

}  // namespace detail

/// Nearest intersection of the ray with the arc at parameter t > t_min,
/// or nullopt. Grazing and out-of-range candidates are skipped; hits within
/// kParamTol of an arc endpoint count as on the arc.
inline std::optional<Hit> intersect(const Ray& ray, const Arc& arc, double t_min) {
    if (const auto* s = std::get_if<SegmentArc>(&arc))
        return detail::intersect_segment(ray, *s, t_min);
    return detail::intersect_parabola(ray, std::get<ParabolaArc>(arc), t_min);
}

}  // namespace newtres
