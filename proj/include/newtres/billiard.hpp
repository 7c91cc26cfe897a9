#pragma once
/**
 * @file billiard.hpp
 * @brief Deterministic billiard tracing inside a cavity: entry on the unit
 *        opening, specular reflections on the arc chain, exit back through
 *        the opening. Computes the exit-angle map phi+(x, phi).
 *
 * Angle convention (fixed for the whole artifact): a particle entering at
 * (x, 0) with angle phi carries velocity v = (-sin phi, cos phi); the exit
 * crossing has velocity v+ = (sin phi+, -cos phi+). Both angles are measured
 * anticlockwise-positive from the outward normal (0, -1) of the hull.
 *
 * The opening is a virtual gate, not a wall: every leg with downward
 * velocity is tested against y = 0, and the particle exits iff that crossing
 * precedes all wall hits and lands inside [-1/2, 1/2].
 */

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <vector>

#include "newtres/cavity.hpp"
#include "newtres/errors.hpp"
#include "newtres/geometry.hpp"

namespace newtres {

/// Default reflection cap; genuine trajectories are short, the cap only
/// guards against numerical cycling.
inline constexpr int kDefaultMaxReflections = 1000;
/// Hit-to-joint distance that triggers the corner policy.
inline constexpr double kCornerTol = 1e-12;
/// Entry abscissa nudge used to resolve ambiguous corner hits.
inline constexpr double kEntryPerturb = 1e-9;
/// Minimum ray advance between successive wall events.
inline constexpr double kLegTol = 1e-10;
/// Slack on the opening half-width (and on gate/wall ties) at exit tests.
inline constexpr double kGateSlack = 1e-9;

/// Entry on the opening: abscissa in (-1/2, 1/2), angle in (-pi/2, pi/2).
struct EntryState {
    double x{0.0};
    double phi{0.0};
};

enum class TrajectoryStatus { exited, trapped, geometry_error };

inline const char* to_string(TrajectoryStatus s) {
    switch (s) {
        case TrajectoryStatus::exited:
            return "exited";
        case TrajectoryStatus::trapped:
            return "trapped";
        default:
            return "geometry-error";
    }
}

/// One traced particle. points holds the entry point, every reflection
/// point, and the exit point, with coincident consecutive points collapsed
/// (a wall hit at the entry point itself adds no new vertex).
struct Trajectory {
    EntryState entry{};
    std::vector<Vec2> points;
    double exit_phi = std::numeric_limits<double>::quiet_NaN();
    int reflections = 0;
    TrajectoryStatus status = TrajectoryStatus::geometry_error;
    bool perturbed = false;
};

namespace detail {

struct WallEvent {
    double t;
    Vec2 point;
    Vec2 normal;
    std::size_t arc_idx;
};

/**
 * Re-intersection with the parabola piece the ray origin already lies on.
 * The origin satisfies the arc equation, so the quadratic's constant term
 * is exactly zero and the surviving root is -B/A (deflation); solving the
 * full quadratic here would hand back roundoff roots of size sqrt(eps).
 * Straight walls cannot be re-hit by the leg that leaves them.
 */
inline std::optional<Hit> reintersect_same_arc(const Ray& ray, const Arc& arc) {
    const auto* par = std::get_if<ParabolaArc>(&arc);
    if (!par || par->a == 0.0) return std::nullopt;
    const Vec2 o = ray.origin;
    const Vec2 d = ray.direction;
    double A = par->a * d.y * d.y;
    if (A == 0.0) return std::nullopt;  // horizontal leg meets the graph once
    double B = 2.0 * par->a * o.y * d.y + par->b * d.y - d.x;
    double t = -B / A;
    if (!(t > kParamTol) || !std::isfinite(t)) return std::nullopt;
    double y = o.y + t * d.y;
    double y_lo = std::min(par->y_start, par->y_end) - kParamTol;
    double y_hi = std::max(par->y_start, par->y_end) + kParamTol;
    if (!(y >= y_lo && y <= y_hi)) return std::nullopt;
    Vec2 n = parabola_normal_at(*par, y);
    if (std::abs(d.dot(n)) < kGrazingTol) return std::nullopt;
    return Hit{t, {o.x + t * d.x, y}, n};
}

inline std::optional<WallEvent> nearest_wall_event(const CavityShape& shape, const Ray& ray,
                                                   double t_min, std::ptrdiff_t last_arc) {
    std::optional<WallEvent> best;
    for (std::size_t i = 0; i < shape.arcs.size(); ++i) {
        std::optional<Hit> h;
        if (static_cast<std::ptrdiff_t>(i) == last_arc)
            h = reintersect_same_arc(ray, shape.arcs[i]);
        else
            h = intersect(ray, shape.arcs[i], t_min);
        if (h && (!best || h->t < best->t)) best = WallEvent{h->t, h->point, h->normal, i};
    }
    return best;
}

inline void push_point(Trajectory& out, const Vec2& p) {
    if (out.points.empty() || (p - out.points.back()).norm() > 0.0) out.points.push_back(p);
}

/**
 * One tracing attempt. Returns false only when an ambiguous corner hit was
 * encountered (both adjacent walls face the ray, or neither does); the
 * caller then retries with a perturbed entry abscissa.
 */
inline bool single_trace(const CavityShape& shape, double x0, double phi, int cap,
                         Trajectory& out) {
    Vec2 p{x0, 0.0};
    Vec2 d{-std::sin(phi), std::cos(phi)};
    out.points.clear();
    out.points.push_back(p);
    out.reflections = 0;
    out.exit_phi = std::numeric_limits<double>::quiet_NaN();
    // The first leg admits t = 0: the entry point may lie on a wall (flat
    // cavity); afterwards each event must advance the ray.
    double t_min = -kParamTol;
    std::ptrdiff_t last_arc = -1;
    for (;;) {
        Ray ray{p, d};
        auto ev = nearest_wall_event(shape, ray, t_min, last_arc);
        if (d.y < 0.0) {
            double t_gate = -p.y / d.y;
            if (t_gate > -kGateSlack) {
                t_gate = std::max(t_gate, 0.0);
                if (!ev || t_gate <= ev->t + kParamTol) {
                    double x_gate = p.x + t_gate * d.x;
                    if (std::abs(x_gate) <= 0.5 + kGateSlack) {
                        push_point(out, {x_gate, 0.0});
                        double phi_out = std::atan2(d.x, -d.y);
                        out.exit_phi = std::clamp(phi_out, -std::numbers::pi / 2.0,
                                                  std::numbers::pi / 2.0);
                        out.status = TrajectoryStatus::exited;
                        return true;
                    }
                    // Downward crossing outside the opening: broken chain.
                    out.status = TrajectoryStatus::geometry_error;
                    return true;
                }
            }
        }
        if (!ev) {
            out.status = TrajectoryStatus::geometry_error;
            return true;
        }
        Vec2 n = ev->normal;
        // Corner policy: a hit at a joint of two arcs reflects off the wall
        // that actually faces the ray; ambiguity is resolved by the caller.
        const std::size_t n_arcs = shape.arcs.size();
        std::ptrdiff_t neighbor = -1;
        if (ev->arc_idx > 0 &&
            (ev->point - arc_start(shape.arcs[ev->arc_idx])).norm() < kCornerTol)
            neighbor = static_cast<std::ptrdiff_t>(ev->arc_idx) - 1;
        else if (ev->arc_idx + 1 < n_arcs &&
                 (ev->point - arc_end(shape.arcs[ev->arc_idx])).norm() < kCornerTol)
            neighbor = static_cast<std::ptrdiff_t>(ev->arc_idx) + 1;
        if (neighbor >= 0) {
            Vec2 n2 = arc_normal_near(shape.arcs[static_cast<std::size_t>(neighbor)], ev->point);
            bool q1 = d.dot(n) < 0.0;
            bool q2 = d.dot(n2) < 0.0;
            if (q1 == q2) return false;  // ambiguous: caller perturbs the entry
            if (q2) n = n2;
        } else if (!(d.dot(n) < 0.0)) {
            return false;  // back-side graze at a chain end: perturb
        }
        if (out.reflections >= cap) {
            out.status = TrajectoryStatus::trapped;
            return true;
        }
        p = ev->point;
        push_point(out, p);
        d = reflect(d, n);
        ++out.reflections;
        last_arc = static_cast<std::ptrdiff_t>(ev->arc_idx);
        t_min = kLegTol;
    }
}

}  // namespace detail

/**
 * Trace one particle. Corner-ambiguous entries are retried with the
 * abscissa nudged by +1e-9 (inward when the nudge would leave the opening)
 * and the result marked perturbed.
 */
inline Trajectory trace(const CavityShape& shape, EntryState entry,
                        int max_reflections = kDefaultMaxReflections) {
    if (!(entry.x > -0.5 && entry.x < 0.5))
        throw std::invalid_argument("trace: entry x must lie in (-1/2, 1/2)");
    if (!(entry.phi > -std::numbers::pi / 2.0 && entry.phi < std::numbers::pi / 2.0))
        throw std::invalid_argument("trace: entry phi must lie in (-pi/2, pi/2)");
    if (max_reflections < 1)
        throw std::invalid_argument("trace: max_reflections must be at least 1");
    constexpr int kMaxAttempts = 8;
    Trajectory out;
    for (int attempt = 0; attempt <= kMaxAttempts; ++attempt) {
        double x_eff = entry.x + attempt * kEntryPerturb;
        if (x_eff >= 0.5) x_eff = entry.x - attempt * kEntryPerturb;
        out = Trajectory{};
        out.entry = entry;
        out.perturbed = attempt > 0;
        if (detail::single_trace(shape, x_eff, entry.phi, max_reflections, out)) return out;
    }
    out = Trajectory{};
    out.entry = entry;
    out.perturbed = true;
    out.status = TrajectoryStatus::geometry_error;
    return out;
}

/// Exit-angle map phi+(x, phi). Trapped and broken-geometry outcomes throw.
inline double exit_angle(const CavityShape& shape, double x, double phi) {
    Trajectory t = trace(shape, EntryState{x, phi});
    if (t.status == TrajectoryStatus::trapped)
        throw TrappedError("exit_angle: trajectory exceeded the reflection cap");
    if (t.status == TrajectoryStatus::geometry_error)
        throw GeometryError("exit_angle: ray escaped the chain without exiting");
    return t.exit_phi;
}

/// Aggregate reflection statistics over the open midpoint grid.
struct StatsTable {
    int grid_nx{0};
    int grid_nphi{0};
    std::map<int, long long> histogram;  // reflection count -> exited cells
    int min_reflections{0};
    int max_reflections{0};
    /// max |phi - phi+| over exited cells with at least 4 reflections.
    double max_gap_ge4{0.0};
    long long trapped{0};
    long long errors{0};
};

inline StatsTable reflection_stats(const CavityShape& shape, int grid_nx, int grid_nphi,
                                   int max_reflections = kDefaultMaxReflections) {
    if (grid_nx < 2 || grid_nphi < 2)
        throw std::invalid_argument("reflection_stats: grid sizes must be at least 2");
    StatsTable st;
    st.grid_nx = grid_nx;
    st.grid_nphi = grid_nphi;
    int lo = std::numeric_limits<int>::max();
    int hi = 0;
    for (int i = 0; i < grid_nx; ++i) {
        double x = -0.5 + (i + 0.5) / grid_nx;
        for (int j = 0; j < grid_nphi; ++j) {
            double phi = -std::numbers::pi / 2.0 + (j + 0.5) * std::numbers::pi / grid_nphi;
            Trajectory t = trace(shape, EntryState{x, phi}, max_reflections);
            if (t.status == TrajectoryStatus::trapped) {
                ++st.trapped;
                continue;
            }
            if (t.status == TrajectoryStatus::geometry_error) {
                ++st.errors;
                continue;
            }
            ++st.histogram[t.reflections];
            lo = std::min(lo, t.reflections);
            hi = std::max(hi, t.reflections);
            if (t.reflections >= 4)
                st.max_gap_ge4 = std::max(st.max_gap_ge4, std::abs(phi - t.exit_phi));
        }
    }
    st.min_reflections = st.histogram.empty() ? 0 : lo;
    st.max_reflections = hi;
    return st;
}

}  // namespace newtres
