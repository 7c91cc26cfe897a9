#pragma once
/**
 * @file svg.hpp
 * @brief SVG 1.1 figure output: cavity outlines, traced trajectories, and
 *        the path primitives shared with the body renderer.
 *
 * Parabola pieces are emitted as quadratic Bezier segments, which represent
 * them exactly: the control point is the intersection of the end tangents.
 * All figures use a fixed mapping (unit opening = 500 px) and fixed styling
 * so repeated renders are byte-identical.
 */

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "newtres/billiard.hpp"
#include "newtres/cavity.hpp"
#include "newtres/geometry.hpp"

namespace newtres {

/// Pixels per opening unit in standalone figures.
inline constexpr double kSvgScale = 500.0;

namespace svg_detail {

inline std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.3f", v + 0.0);  // +0.0 folds -0 into 0
    return buf;
}

/// Affine frame: p -> origin + p.x * ex + p.y * ey.
struct Frame {
    Vec2 origin{0.0, 0.0};
    Vec2 ex{1.0, 0.0};
    Vec2 ey{0.0, 1.0};

    Vec2 map(const Vec2& p) const { return origin + ex * p.x + ey * p.y; }
};

inline void append_point(std::string& d, const Vec2& p) {
    d += num(p.x);
    d += ' ';
    d += num(p.y);
}

/**
 * Path data for an arc chain under an affine frame. When with_move is set
 * the path starts with an absolute move to the chain start; otherwise the
 * caller is already positioned there.
 */
inline std::string chain_path(const std::vector<Arc>& arcs, const Frame& f,
                              bool with_move = true) {
    std::string d;
    if (arcs.empty()) return d;
    if (with_move) {
        d += "M ";
        append_point(d, f.map(arc_start(arcs.front())));
    }
    for (const Arc& arc : arcs) {
        if (const auto* seg = std::get_if<SegmentArc>(&arc)) {
            d += " L ";
            append_point(d, f.map(seg->p1));
        } else {
            const auto& par = std::get<ParabolaArc>(arc);
            double y0 = par.y_start;
            double y1 = par.y_end;
            // End tangents of x = a y^2 + b y + c meet at y = (y0 + y1)/2,
            // x = a y0 y1 + b (y0 + y1)/2 + c: the exact Bezier control.
            Vec2 ctrl{par.a * y0 * y1 + par.b * 0.5 * (y0 + y1) + par.c, 0.5 * (y0 + y1)};
            d += " Q ";
            append_point(d, f.map(ctrl));
            d += ' ';
            append_point(d, f.map(par.point_at(y1)));
        }
    }
    return d;
}

/// Bounding box of a chain in shape coordinates (includes the opening).
struct Box {
    double xmin = -0.5, xmax = 0.5, ymin = 0.0, ymax = 0.0;

    void grow(const Vec2& p) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
};

inline Box chain_box(const std::vector<Arc>& arcs) {
    Box b;
    for (const Arc& arc : arcs) {
        b.grow(arc_start(arc));
        b.grow(arc_end(arc));
        if (const auto* par = std::get_if<ParabolaArc>(&arc)) {
            if (par->a != 0.0) {
                double yv = -par->b / (2.0 * par->a);
                double lo = std::min(par->y_start, par->y_end);
                double hi = std::max(par->y_start, par->y_end);
                if (yv > lo && yv < hi) b.grow(par->point_at(yv));
            }
        }
    }
    return b;
}

/// Frame mapping shape coordinates to pixels: opening = 500 px, y up.
inline Frame figure_frame(const Box& b, double pad) {
    Frame f;
    f.ex = {kSvgScale, 0.0};
    f.ey = {0.0, -kSvgScale};
    f.origin = {pad - b.xmin * kSvgScale, pad + b.ymax * kSvgScale};
    return f;
}

inline std::string svg_open(double width, double height) {
    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"";
    s += num(width);
    s += "\" height=\"";
    s += num(height);
    s += "\" viewBox=\"0 0 ";
    s += num(width);
    s += ' ';
    s += num(height);
    s += "\">\n";
    return s;
}

}  // namespace svg_detail

/// Standalone figure of one cavity: filled chain plus the dashed opening.
inline std::string render_shape_svg(const CavityShape& shape) {
    using namespace svg_detail;
    const double pad = 40.0;
    Box b = chain_box(shape.arcs);
    double width = (b.xmax - b.xmin) * kSvgScale + 2 * pad;
    double height = (b.ymax - b.ymin) * kSvgScale + 2 * pad;
    Frame f = figure_frame(b, pad);
    std::string s = svg_open(width, height);
    std::string outline = chain_path(shape.arcs, f);
    s += "  <path d=\"" + outline + "\" fill=\"#e8f0f7\" stroke=\"#123\" stroke-width=\"2\"/>\n";
    s += "  <line x1=\"" + num(f.map({-0.5, 0.0}).x) + "\" y1=\"" + num(f.map({-0.5, 0.0}).y) +
         "\" x2=\"" + num(f.map({0.5, 0.0}).x) + "\" y2=\"" + num(f.map({0.5, 0.0}).y) +
         "\" stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    s += "</svg>\n";
    return s;
}

/**
 * Figure of one traced particle: cavity outline, the reflected polyline,
 * and entry/exit arrows outside the opening.
 */
inline std::string render_trajectory_svg(const CavityShape& shape, const Trajectory& traj) {
    using namespace svg_detail;
    const double pad = 40.0;
    const double stub = 0.18;  // arrow length outside the opening, opening units
    Box b = chain_box(shape.arcs);
    b.ymin = std::min(b.ymin, -stub - 0.05);
    double width = (b.xmax - b.xmin) * kSvgScale + 2 * pad;
    double height = (b.ymax - b.ymin) * kSvgScale + 2 * pad;
    Frame f = figure_frame(b, pad);
    std::string s = svg_open(width, height);
    s += "  <defs><marker id=\"tip\" viewBox=\"0 0 10 10\" refX=\"8\" refY=\"5\" "
         "markerWidth=\"7\" markerHeight=\"7\" orient=\"auto-start-reverse\">"
         "<path d=\"M 0 0 L 10 5 L 0 10 z\" fill=\"#a22\"/></marker></defs>\n";
    s += "  <path d=\"" + chain_path(shape.arcs, f) +
         "\" fill=\"#e8f0f7\" stroke=\"#123\" stroke-width=\"2\"/>\n";
    s += "  <line x1=\"" + num(f.map({-0.5, 0.0}).x) + "\" y1=\"" + num(f.map({-0.5, 0.0}).y) +
         "\" x2=\"" + num(f.map({0.5, 0.0}).x) + "\" y2=\"" + num(f.map({0.5, 0.0}).y) +
         "\" stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    if (!traj.points.empty()) {
        std::string pl = "  <polyline points=\"";
        for (std::size_t i = 0; i < traj.points.size(); ++i) {
            if (i) pl += ' ';
            Vec2 q = f.map(traj.points[i]);
            pl += num(q.x) + "," + num(q.y);
        }
        pl += "\" fill=\"none\" stroke=\"#a22\" stroke-width=\"1.5\"/>\n";
        s += pl;
        // Entry arrow: incoming velocity v = (-sin phi, cos phi).
        Vec2 v_in{-std::sin(traj.entry.phi), std::cos(traj.entry.phi)};
        Vec2 p_in = traj.points.front();
        Vec2 tail = f.map(p_in - v_in * stub);
        Vec2 head = f.map(p_in);
        s += "  <line x1=\"" + num(tail.x) + "\" y1=\"" + num(tail.y) + "\" x2=\"" + num(head.x) +
             "\" y2=\"" + num(head.y) +
             "\" stroke=\"#a22\" stroke-width=\"1.5\" marker-end=\"url(#tip)\"/>\n";
        if (traj.status == TrajectoryStatus::exited) {
            Vec2 v_out{std::sin(traj.exit_phi), -std::cos(traj.exit_phi)};
            Vec2 p_out = traj.points.back();
            Vec2 t2 = f.map(p_out);
            Vec2 h2 = f.map(p_out + v_out * stub);
            s += "  <line x1=\"" + num(t2.x) + "\" y1=\"" + num(t2.y) + "\" x2=\"" + num(h2.x) +
                 "\" y2=\"" + num(h2.y) +
                 "\" stroke=\"#a22\" stroke-width=\"1.5\" marker-end=\"url(#tip)\"/>\n";
        }
    }
    s += "</svg>\n";
    return s;
}

}  // namespace newtres
