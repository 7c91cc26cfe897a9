#pragma once
/**
 * @file cavity.hpp
 * @brief Normalized cavity shapes: ordered arc chains spanning the unit
 *        opening [-1/2, 1/2] x {0}, plus the constructors for every family
 *        studied here (flat, triangle, rectangle, double parabola, piecewise
 *        linear graphs) and a structural validator.
 *
 * A cavity chain starts at (-1/2, 0), ends at (1/2, 0), and lies in the
 * closed upper half-plane. The opening itself is never part of the chain;
 * the billiard treats it as an implicit exit gate. Chains are walked with
 * the cavity region on the right, so interior normals come straight from
 * the traversal direction (see geometry.hpp).
 */

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "newtres/geometry.hpp"

namespace newtres {

/// Chain continuity / endpoint tolerance for shape invariants.
inline constexpr double kChainTol = 1e-12;

/// A normalized cavity: directed arc chain over the unit opening.
struct CavityShape {
    std::vector<Arc> arcs;
    std::string name;
    /// Constructor parameters, in declaration order (e.g. {"h", ...}).
    std::vector<std::pair<std::string, double>> parameters;
};

/// Flat cavity: the opening segment itself. Resistance exactly 1.
inline CavityShape make_flat() {
    CavityShape s;
    s.arcs.push_back(SegmentArc{{-0.5, 0.0}, {0.5, 0.0}});
    s.name = "flat";
    return s;
}

/// Right isosceles triangle with the right angle at the apex (0, 1/2).
inline CavityShape make_triangle() {
    CavityShape s;
    s.arcs.push_back(SegmentArc{{-0.5, 0.0}, {0.0, 0.5}});
    s.arcs.push_back(SegmentArc{{0.0, 0.5}, {0.5, 0.0}});
    s.name = "triangle";
    return s;
}

/// U-shaped rectangular indentation of the given depth.
inline CavityShape make_rectangle(double depth) {
    if (!(depth > 0.0)) throw std::invalid_argument("make_rectangle: depth must be positive");
    CavityShape s;
    s.arcs.push_back(SegmentArc{{-0.5, 0.0}, {-0.5, depth}});
    s.arcs.push_back(SegmentArc{{-0.5, depth}, {0.5, depth}});
    s.arcs.push_back(SegmentArc{{0.5, depth}, {0.5, 0.0}});
    s.name = "rectangle";
    s.parameters = {{"depth", depth}};
    return s;
}

/**
 * Double Parabola: two mirror-image parabola pieces x = -g(y) and x = g(y)
 * with g(y) = alpha*y^2 + beta*y + 1/2, alpha = (-beta*h - 1/2)/h^2, meeting
 * at the apex (0, h). g(0) = 1/2 and g(h) = 0 hold by construction.
 *
 * Admissibility: g > 0 on (0, h). With g(0) > 0 and g(h) = 0 this reduces
 * to beta >= -1/h (for beta > -1/(2h) the arc is concave and the chord
 * argument applies; at beta = -1/(2h) it degenerates to a straight wall;
 * below that the second root of g is h^2/(-2*beta*h - 1) * (1/h) = 1/(2*alpha*h),
 * which stays outside (0, h) exactly when beta >= -1/h).
 */
inline CavityShape make_double_parabola(double h, double beta) {
    if (!(h > 0.0)) throw std::invalid_argument("make_double_parabola: h must be positive");
    if (!std::isfinite(beta)) throw std::invalid_argument("make_double_parabola: beta must be finite");
    if (beta < -1.0 / h)
        throw std::invalid_argument("make_double_parabola: wall pinches shut inside (0, h)");
    double alpha = (-beta * h - 0.5) / (h * h);
    CavityShape s;
    // Left wall x = -g(y), walked opening -> apex.
    s.arcs.push_back(ParabolaArc{-alpha, -beta, -0.5, 0.0, h});
    // Right wall x = g(y), walked apex -> opening.
    s.arcs.push_back(ParabolaArc{alpha, beta, 0.5, h, 0.0});
    s.name = "double-parabola";
    s.parameters = {{"h", h}, {"beta", beta}};
    return s;
}

/**
 * Piecewise-linear graph cavity through the given points. Points must have
 * strictly increasing x covering [-1/2, 1/2], nonnegative y, and both
 * endpoints on the opening line.
 */
inline CavityShape make_graph_cavity(const std::vector<Vec2>& f_points) {
    if (f_points.size() < 2)
        throw std::invalid_argument("make_graph_cavity: need at least two points");
    if (std::abs(f_points.front().x + 0.5) > kChainTol ||
        std::abs(f_points.back().x - 0.5) > kChainTol)
        throw std::invalid_argument("make_graph_cavity: x must run from -1/2 to 1/2");
    if (std::abs(f_points.front().y) > kChainTol || std::abs(f_points.back().y) > kChainTol)
        throw std::invalid_argument("make_graph_cavity: endpoints must lie on the opening line");
    for (std::size_t i = 0; i < f_points.size(); ++i) {
        if (f_points[i].y < 0.0)
            throw std::invalid_argument("make_graph_cavity: y must be nonnegative");
        if (i > 0 && !(f_points[i].x > f_points[i - 1].x))
            throw std::invalid_argument("make_graph_cavity: x must be strictly increasing");
    }
    CavityShape s;
    for (std::size_t i = 0; i + 1 < f_points.size(); ++i)
        s.arcs.push_back(SegmentArc{f_points[i], f_points[i + 1]});
    s.name = "graph";
    return s;
}

namespace detail {

/// Lowest y reached by an arc (parabola pieces are graphs over y, so their
/// y-extent is exactly the parameter range).
inline double arc_min_y(const Arc& arc) {
    if (const auto* seg = std::get_if<SegmentArc>(&arc)) return std::min(seg->p0.y, seg->p1.y);
    const auto& par = std::get<ParabolaArc>(arc);
    return std::min(par.y_start, par.y_end);
}

inline bool arc_degenerate(const Arc& arc) {
    if (const auto* seg = std::get_if<SegmentArc>(&arc))
        return (seg->p1 - seg->p0).norm() <= kChainTol;
    const auto& par = std::get<ParabolaArc>(arc);
    return std::abs(par.y_end - par.y_start) <= kChainTol;
}

/// All intersection points of two arcs, solved exactly (each pairing reduces
/// to a linear or quadratic equation in one parameter).
inline std::vector<Vec2> arc_pair_intersections(const Arc& a, const Arc& b) {
    std::vector<Vec2> out;
    auto in01 = [](double s) { return s >= -kParamTol && s <= 1.0 + kParamTol; };
    auto in_range = [](double y, double lo, double hi) {
        return y >= std::min(lo, hi) - kParamTol && y <= std::max(lo, hi) + kParamTol;
    };
    if (const auto* s1 = std::get_if<SegmentArc>(&a)) {
        if (const auto* s2 = std::get_if<SegmentArc>(&b)) {
            Vec2 d1 = s1->p1 - s1->p0;
            Vec2 d2 = s2->p1 - s2->p0;
            double denom = d1.cross(d2);
            Vec2 w = s2->p0 - s1->p0;
            if (std::abs(denom) < 1e-14 * std::max(1.0, d1.norm() * d2.norm())) {
                // Parallel: overlap only if collinear; report shared endpoints.
                if (std::abs(d1.cross(w)) > 1e-12) return out;
                for (const Vec2& p : {s2->p0, s2->p1}) {
                    double u = (p - s1->p0).dot(d1) / d1.norm2();
                    if (in01(u)) out.push_back(p);
                }
                for (const Vec2& p : {s1->p0, s1->p1}) {
                    double u = (p - s2->p0).dot(d2) / d2.norm2();
                    if (in01(u)) out.push_back(p);
                }
                return out;
            }
            double u = w.cross(d2) / denom;
            double v = w.cross(d1) / denom;
            if (in01(u) && in01(v)) out.push_back(s1->p0 + d1 * u);
            return out;
        }
        const auto& par = std::get<ParabolaArc>(b);
        Vec2 o = s1->p0;
        Vec2 d = s1->p1 - s1->p0;
        // o.x + u*d.x = x_at(o.y + u*d.y): quadratic in u.
        double A = par.a * d.y * d.y;
        double B = 2.0 * par.a * o.y * d.y + par.b * d.y - d.x;
        double C = (par.a * o.y + par.b) * o.y + par.c - o.x;
        double roots[2];
        int nr = detail::solve_quadratic(A, B, C, roots);
        for (int i = 0; i < nr; ++i) {
            double u = roots[i];
            double y = o.y + u * d.y;
            if (in01(u) && in_range(y, par.y_start, par.y_end)) out.push_back({o.x + u * d.x, y});
        }
        return out;
    }
    if (std::holds_alternative<SegmentArc>(b)) {
        out = arc_pair_intersections(b, a);
        return out;
    }
    const auto& p1 = std::get<ParabolaArc>(a);
    const auto& p2 = std::get<ParabolaArc>(b);
    double roots[2];
    int nr = detail::solve_quadratic(p1.a - p2.a, p1.b - p2.b, p1.c - p2.c, roots);
    for (int i = 0; i < nr; ++i) {
        double y = roots[i];
        if (in_range(y, p1.y_start, p1.y_end) && in_range(y, p2.y_start, p2.y_end))
            out.push_back({p1.x_at(y), y});
    }
    return out;
}

}  // namespace detail

/**
 * Structural validation. Returns the (deduplicated) list of violated
 * invariants; empty means the shape is well formed. Violation labels:
 * "opening-endpoints", "chain-discontinuity", "below-opening",
 * "self-intersection", "degenerate-arc".
 */
inline std::vector<std::string> validate(const CavityShape& shape) {
    std::vector<std::string> violations;
    auto add = [&](const char* v) {
        for (const auto& existing : violations)
            if (existing == v) return;
        violations.emplace_back(v);
    };
    if (shape.arcs.empty()) {
        add("opening-endpoints");
        return violations;
    }
    Vec2 start = arc_start(shape.arcs.front());
    Vec2 end = arc_end(shape.arcs.back());
    if ((start - Vec2{-0.5, 0.0}).norm() > kChainTol || (end - Vec2{0.5, 0.0}).norm() > kChainTol)
        add("opening-endpoints");
    for (std::size_t i = 0; i + 1 < shape.arcs.size(); ++i)
        if ((arc_end(shape.arcs[i]) - arc_start(shape.arcs[i + 1])).norm() > kChainTol)
            add("chain-discontinuity");
    for (const Arc& arc : shape.arcs) {
        if (detail::arc_min_y(arc) < -kChainTol) add("below-opening");
        if (detail::arc_degenerate(arc)) add("degenerate-arc");
    }
    // Simplicity: nonadjacent arcs may not meet at all; adjacent arcs may
    // meet only at their shared endpoint.
    const double kTouchTol = 1e-9;
    for (std::size_t i = 0; i < shape.arcs.size(); ++i) {
        for (std::size_t j = i + 1; j < shape.arcs.size(); ++j) {
            auto pts = detail::arc_pair_intersections(shape.arcs[i], shape.arcs[j]);
            bool adjacent = (j == i + 1);
            Vec2 joint = adjacent ? arc_start(shape.arcs[j]) : Vec2{};
            for (const Vec2& p : pts) {
                if (adjacent && (p - joint).norm() < kTouchTol) continue;
                add("self-intersection");
            }
        }
    }
    return violations;
}

}  // namespace newtres
