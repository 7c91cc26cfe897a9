#pragma once
/**
 * @file body.hpp
 * @brief Composition of a rough rotating disc from boundary cavities: the
 *        perimeter-ratio correction, the weighted resistance of the full
 *        body, the mixed-fractions form, and the rosette SVG rendering.
 *
 * A body of radius r carries n congruent cavities, each spanning a chord of
 * the circumscribed circle subtending arc eps = 2*pi*r/n. Only eps/r = 2*pi/n
 * enters the normalized resistance, so the value is independent of r.
 */

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "newtres/cavity.hpp"
#include "newtres/svg.hpp"

namespace newtres {

struct BodySpec {
    double r = 1.0;
    int n_cavities = 42;
    CavityShape cavity;
    /// Fraction L0/L of the boundary kept smooth (resistance 1).
    double convex_fraction = 0.0;
};

struct BodyResistance {
    double value = 0.0;
    double perimeter_ratio = 0.0;
    double cavity_value = 0.0;
    /// Small-cavity approximation cavity_R * (1 - (eps/r)^2 / 24), convex
    /// fraction zero.
    double approx_value = 0.0;
};

/// Inscribed-polygon perimeter correction sin(pi/n)/(pi/n).
inline double perimeter_ratio(int n) {
    if (n < 3) throw std::invalid_argument("perimeter_ratio: n must be at least 3");
    double u = std::numbers::pi / n;
    return std::sin(u) / u;
}

namespace detail {

inline void check_body_spec(const BodySpec& spec) {
    if (!(spec.r > 0.0)) throw std::invalid_argument("body: radius must be positive");
    if (spec.n_cavities < 3)
        throw std::invalid_argument("body: n_cavities must be at least 3");
    if (spec.convex_fraction < 0.0 || spec.convex_fraction > 1.0)
        throw std::invalid_argument("body: convex_fraction must lie in [0, 1]");
}

}  // namespace detail

/// Resistance of the full body given the (precomputed) cavity resistance.
inline BodyResistance body_resistance(const BodySpec& spec, double cavity_R) {
    detail::check_body_spec(spec);
    if (!(cavity_R > 0.0 && cavity_R <= 1.5))
        throw std::invalid_argument("body_resistance: cavity_R must lie in (0, 1.5]");
    BodyResistance out;
    out.perimeter_ratio = perimeter_ratio(spec.n_cavities);
    out.cavity_value = cavity_R;
    double weighted = spec.convex_fraction * 1.0 + (1.0 - spec.convex_fraction) * cavity_R;
    out.value = out.perimeter_ratio * weighted;
    double eps_over_r = 2.0 * std::numbers::pi / spec.n_cavities;
    out.approx_value = cavity_R * (1.0 - eps_over_r * eps_over_r / 24.0);
    return out;
}

/// Weighted mean over boundary parts: perimeter_ratio * sum f_i * R_i.
inline double body_resistance_mixed(const std::vector<std::pair<double, double>>& parts,
                                    double ratio) {
    double fsum = 0.0;
    double acc = 0.0;
    for (const auto& [fraction, R] : parts) {
        if (fraction < 0.0)
            throw std::invalid_argument("body_resistance_mixed: fractions must be nonnegative");
        if (!(R > 0.0 && R <= 1.5))
            throw std::invalid_argument("body_resistance_mixed: each R must lie in (0, 1.5]");
        fsum += fraction;
        acc += fraction * R;
    }
    if (std::abs(fsum - 1.0) > 1e-12)
        throw std::invalid_argument("body_resistance_mixed: fractions must sum to 1");
    return ratio * acc;
}

/**
 * Rosette figure: the circumscribed circle (dashed) and one closed outline
 * made of n copies of the cavity chain, each scaled to its chord
 * L = 2 r sin(pi/n) and rotated so the cavity hollows point inward.
 */
inline std::string render_body_svg(const BodySpec& spec) {
    using namespace svg_detail;
    detail::check_body_spec(spec);
    if (spec.cavity.arcs.empty())
        throw std::invalid_argument("render_body_svg: cavity shape is empty");
    const int n = spec.n_cavities;
    const double r = spec.r;
    // Deepest cavity point, for the canvas margin.
    Box cb = chain_box(spec.cavity.arcs);
    double chord = 2.0 * r * std::sin(std::numbers::pi / n);
    double reach = std::max(1.0, cb.ymax + 0.5) * chord;
    double extent = r + reach;
    const double view = 1000.0;
    double scale = (view - 80.0) / (2.0 * extent);
    Vec2 center{view / 2.0, view / 2.0};

    std::string s = svg_open(view, view);
    s += "  <circle cx=\"" + num(center.x) + "\" cy=\"" + num(center.y) + "\" r=\"" +
         num(r * scale) +
         "\" fill=\"none\" stroke=\"#888\" stroke-width=\"1\" stroke-dasharray=\"6 4\"/>\n";
    std::string d;
    for (int k = 0; k < n; ++k) {
        double a0 = 2.0 * std::numbers::pi * k / n;
        double a1 = 2.0 * std::numbers::pi * (k + 1) / n;
        Vec2 p0{r * std::cos(a0), r * std::sin(a0)};
        Vec2 p1{r * std::cos(a1), r * std::sin(a1)};
        Vec2 e = p1 - p0;  // chord vector, length = 2 r sin(pi/n)
        Vec2 inward{-e.y, e.x};  // left of the CCW chord: toward the center
        Frame f;
        // Shape frame on this chord, then into pixels (y flipped).
        Vec2 mid = (p0 + p1) * 0.5;
        f.origin = {center.x + mid.x * scale, center.y - mid.y * scale};
        f.ex = {e.x * scale, -e.y * scale};
        f.ey = {inward.x * scale, -inward.y * scale};
        d += chain_path(spec.cavity.arcs, f, k == 0);
    }
    d += " Z";
    s += "  <path d=\"" + d + "\" fill=\"#e8f0f7\" stroke=\"#123\" stroke-width=\"1.5\"/>\n";
    s += "</svg>\n";
    return s;
}

}  // namespace newtres
