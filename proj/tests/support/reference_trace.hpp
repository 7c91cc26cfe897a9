#pragma once
// Independent long-double re-trace used as a cross-check oracle. Shares no
// code with the library tracer: naive quadratic formula plus Newton polish
// instead of the deflated/stable solver, its own gate logic, and tighter
// tolerances. Corner disambiguation is deliberately absent; callers skip
// samples the library marks as perturbed.

#include <cmath>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "newtres/cavity.hpp"

namespace reftrace {

struct LVec {
    long double x, y;
};

struct RefResult {
    bool exited = false;
    int reflections = 0;
    long double exit_x = 0.0L;
    long double exit_phi = 0.0L;
};

namespace detail {

struct SegData {
    LVec p0, p1;
};
struct ParData {
    long double a, b, c, y_lo, y_hi;
    int sign;  // +1 when traversed with increasing y
};
using ArcData = std::variant<SegData, ParData>;

inline LVec normal_of(const SegData& s) {
    long double tx = s.p1.x - s.p0.x;
    long double ty = s.p1.y - s.p0.y;
    long double n = std::sqrt(tx * tx + ty * ty);
    return {ty / n, -tx / n};
}

inline LVec normal_at(const ParData& p, long double y) {
    long double slope = 2.0L * p.a * y + p.b;
    long double sgn = p.sign >= 0 ? 1.0L : -1.0L;
    long double nx = sgn;
    long double ny = -sgn * slope;
    long double n = std::sqrt(nx * nx + ny * ny);
    return {nx / n, ny / n};
}

struct Event {
    long double t;
    LVec point;
    LVec normal;
    std::size_t idx;
};

inline std::optional<Event> hit_arc(const ArcData& arc, const LVec& o, const LVec& d,
                                    long double t_min, bool same_arc, std::size_t idx) {
    constexpr long double kGraze = 1e-14L;
    if (const auto* s = std::get_if<SegData>(&arc)) {
        if (same_arc) return std::nullopt;
        long double ex = s->p1.x - s->p0.x;
        long double ey = s->p1.y - s->p0.y;
        long double denom = d.x * ey - d.y * ex;
        if (std::abs(denom) < 1e-18L) return std::nullopt;
        long double wx = s->p0.x - o.x;
        long double wy = s->p0.y - o.y;
        long double t = (wx * ey - wy * ex) / denom;
        long double u = (wx * d.y - wy * d.x) / denom;
        if (!(t > t_min) || u < -1e-15L || u > 1.0L + 1e-15L) return std::nullopt;
        LVec n = normal_of(*s);
        if (std::abs(d.x * n.x + d.y * n.y) < kGraze) return std::nullopt;
        return Event{t, {o.x + t * d.x, o.y + t * d.y}, n, idx};
    }
    const auto& p = std::get<ParData>(arc);
    long double A = p.a * d.y * d.y;
    long double B = 2.0L * p.a * o.y * d.y + p.b * d.y - d.x;
    long double C = (p.a * o.y + p.b) * o.y + p.c - o.x;
    if (same_arc) C = 0.0L;  // origin lies on the curve by construction
    long double roots[2];
    int nr = 0;
    if (A == 0.0L) {
        if (B != 0.0L) roots[nr++] = -C / B;
    } else {
        long double disc = B * B - 4.0L * A * C;
        if (disc >= 0.0L) {
            long double sq = std::sqrt(disc);
            roots[nr++] = (-B - sq) / (2.0L * A);
            roots[nr++] = (-B + sq) / (2.0L * A);
            if (roots[0] > roots[1]) std::swap(roots[0], roots[1]);
        }
    }
    for (int i = 0; i < nr; ++i) {
        long double t = roots[i];
        // Newton polish on f(t) = x(t) - x_arc(y(t)).
        for (int it = 0; it < 3; ++it) {
            long double y = o.y + t * d.y;
            long double f = o.x + t * d.x - ((p.a * y + p.b) * y + p.c);
            long double fp = d.x - (2.0L * p.a * y + p.b) * d.y;
            if (fp != 0.0L) t -= f / fp;
        }
        if (same_arc && std::abs(t) <= t_min) continue;
        if (!(t > t_min)) continue;
        long double y = o.y + t * d.y;
        if (y < p.y_lo - 1e-15L || y > p.y_hi + 1e-15L) continue;
        LVec n = normal_at(p, y);
        if (std::abs(d.x * n.x + d.y * n.y) < kGraze) continue;
        return Event{t, {o.x + t * d.x, y}, n, idx};
    }
    return std::nullopt;
}

}  // namespace detail

/// Re-trace a particle through the shape entirely in long double.
inline RefResult retrace(const newtres::CavityShape& shape, long double x0, long double phi,
                         int cap = 1000) {
    std::vector<detail::ArcData> arcs;
    for (const auto& a : shape.arcs) {
        if (const auto* s = std::get_if<newtres::SegmentArc>(&a)) {
            arcs.push_back(detail::SegData{{(long double)s->p0.x, (long double)s->p0.y},
                                           {(long double)s->p1.x, (long double)s->p1.y}});
        } else {
            const auto& p = std::get<newtres::ParabolaArc>(a);
            arcs.push_back(detail::ParData{(long double)p.a, (long double)p.b, (long double)p.c,
                                           std::min((long double)p.y_start, (long double)p.y_end),
                                           std::max((long double)p.y_start, (long double)p.y_end),
                                           p.y_end >= p.y_start ? +1 : -1});
        }
    }
    RefResult res;
    LVec p{x0, 0.0L};
    LVec d{-std::sin(phi), std::cos(phi)};
    long double t_min = -1e-18L;
    std::ptrdiff_t last = -1;
    for (int leg = 0; leg < cap + 1; ++leg) {
        std::optional<detail::Event> best;
        for (std::size_t i = 0; i < arcs.size(); ++i) {
            auto ev = detail::hit_arc(arcs[i], p, d, t_min,
                                      static_cast<std::ptrdiff_t>(i) == last, i);
            if (ev && (!best || ev->t < best->t)) best = ev;
        }
        if (d.y < 0.0L) {
            long double t_gate = -p.y / d.y;
            if (t_gate >= 0.0L && (!best || t_gate <= best->t + 1e-15L)) {
                long double xg = p.x + t_gate * d.x;
                if (std::abs(xg) <= 0.5L + 1e-12L) {
                    res.exited = true;
                    res.exit_x = xg;
                    res.exit_phi = std::atan2(d.x, -d.y);
                    return res;
                }
                return res;  // crossed below outside the gate
            }
        }
        if (!best) return res;
        long double dn = d.x * best->normal.x + d.y * best->normal.y;
        if (dn >= 0.0L) return res;
        p = best->point;
        d = {d.x - 2.0L * dn * best->normal.x, d.y - 2.0L * dn * best->normal.y};
        ++res.reflections;
        last = static_cast<std::ptrdiff_t>(best->idx);
        t_min = 1e-14L;
    }
    res.reflections = -1;  // cap exceeded
    return res;
}

}  // namespace reftrace
