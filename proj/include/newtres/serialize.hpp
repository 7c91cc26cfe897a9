#pragma once
/**
 * @file serialize.hpp
 * @brief JSON views of every report type plus the shape document format
 *        consumed by the CLI (`--shape file:PATH`) and emitted by the
 *        optimizers.
 *
 * Shape documents look like
 *
 *     {"name": "double-parabola",
 *      "parameters": {"h": 1.4142, "beta": 0},
 *      "arcs": [{"kind": "parabola-piece", "orientation": "x-of-y",
 *                "a": -0.25, "b": 0, "c": 0.5, "range": [1.4142, 0]},
 *               {"kind": "line-segment", "p0": [-0.5, 0], "p1": [0.5, 0]}]}
 *
 * A parabola piece is the graph x = a*y^2 + b*y + c over `range`, stored in
 * traversal order (the range may run downward); the cavity interior lies to
 * the right of traversal, so the order also fixes the interior side. Angles
 * serialize in radians with a `_deg` convenience copy; non-finite values
 * (the exit angle of a trapped trajectory) serialize as null.
 */

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "newtres/billiard.hpp"
#include "newtres/body.hpp"
#include "newtres/cavity.hpp"
#include "newtres/geometry.hpp"
#include "newtres/optimize.hpp"
#include "newtres/resistance.hpp"

namespace newtres {

/// All documents use insertion-ordered objects so output is reproducible.
using json = nlohmann::ordered_json;

namespace detail {

inline double degrees(double radians) { return radians * 180.0 / std::numbers::pi; }

inline json vec2_to_json(const Vec2& v) { return json::array({v.x, v.y}); }

/// An angle field: radians, or null when the value is absent (NaN).
inline json angle_or_null(double radians) {
    if (!std::isfinite(radians)) return nullptr;
    return radians;
}

inline double require_number(const json& j, const char* what) {
    if (!j.is_number()) throw std::invalid_argument(std::string("shape document: ") + what +
                                                    " must be a number");
    double v = j.get<double>();
    if (!std::isfinite(v))
        throw std::invalid_argument(std::string("shape document: ") + what + " must be finite");
    return v;
}

inline Vec2 require_vec2(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 2)
        throw std::invalid_argument(std::string("shape document: ") + what +
                                    " must be an [x, y] pair");
    return {require_number(j[0], what), require_number(j[1], what)};
}

}  // namespace detail

inline json arc_to_json(const Arc& arc) {
    json j = json::object();
    if (const auto* seg = std::get_if<SegmentArc>(&arc)) {
        j["kind"] = "line-segment";
        j["p0"] = detail::vec2_to_json(seg->p0);
        j["p1"] = detail::vec2_to_json(seg->p1);
        return j;
    }
    const auto& par = std::get<ParabolaArc>(arc);
    j["kind"] = "parabola-piece";
    j["orientation"] = "x-of-y";
    j["a"] = par.a;
    j["b"] = par.b;
    j["c"] = par.c;
    j["range"] = json::array({par.y_start, par.y_end});
    return j;
}

inline Arc arc_from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string())
        throw std::invalid_argument("shape document: every arc needs a \"kind\" string");
    const std::string kind = j["kind"].get<std::string>();
    if (kind == "line-segment") {
        if (!j.contains("p0") || !j.contains("p1"))
            throw std::invalid_argument("shape document: line-segment needs p0 and p1");
        return SegmentArc{detail::require_vec2(j["p0"], "p0"),
                          detail::require_vec2(j["p1"], "p1")};
    }
    if (kind == "parabola-piece") {
        if (j.contains("orientation") &&
            (!j["orientation"].is_string() || j["orientation"].get<std::string>() != "x-of-y"))
            throw std::invalid_argument(
                "shape document: parabola-piece orientation must be \"x-of-y\"");
        for (const char* key : {"a", "b", "c", "range"})
            if (!j.contains(key))
                throw std::invalid_argument(std::string("shape document: parabola-piece needs ") +
                                            key);
        if (!j["range"].is_array() || j["range"].size() != 2)
            throw std::invalid_argument(
                "shape document: parabola-piece range must be [y_start, y_end]");
        return ParabolaArc{detail::require_number(j["a"], "a"), detail::require_number(j["b"], "b"),
                           detail::require_number(j["c"], "c"),
                           detail::require_number(j["range"][0], "range"),
                           detail::require_number(j["range"][1], "range")};
    }
    throw std::invalid_argument("shape document: unknown arc kind \"" + kind + "\"");
}

inline json shape_to_json(const CavityShape& shape) {
    json j = json::object();
    j["name"] = shape.name;
    json params = json::object();
    for (const auto& [name, value] : shape.parameters) params[name] = value;
    j["parameters"] = std::move(params);
    json arcs = json::array();
    for (const Arc& arc : shape.arcs) arcs.push_back(arc_to_json(arc));
    j["arcs"] = std::move(arcs);
    return j;
}

/**
 * Parse and validate a shape document. Throws std::invalid_argument on any
 * structural problem or violated shape invariant, so a bad file is rejected
 * before any computation runs.
 */
inline CavityShape shape_from_json(const json& j) {
    if (!j.is_object() || !j.contains("arcs") || !j["arcs"].is_array())
        throw std::invalid_argument("shape document: top level must be {name?, parameters?, arcs}");
    CavityShape shape;
    if (j.contains("name")) {
        if (!j["name"].is_string())
            throw std::invalid_argument("shape document: name must be a string");
        shape.name = j["name"].get<std::string>();
    }
    if (j.contains("parameters")) {
        if (!j["parameters"].is_object())
            throw std::invalid_argument("shape document: parameters must be an object");
        for (const auto& [key, value] : j["parameters"].items())
            shape.parameters.emplace_back(key, detail::require_number(value, key.c_str()));
    }
    for (const json& arc : j["arcs"]) shape.arcs.push_back(arc_from_json(arc));
    auto violations = validate(shape);
    if (!violations.empty()) {
        std::string msg = "shape document: invalid shape (";
        for (std::size_t i = 0; i < violations.size(); ++i) {
            if (i > 0) msg += ", ";
            msg += violations[i];
        }
        msg += ')';
        throw std::invalid_argument(msg);
    }
    return shape;
}

/// Parse a shape from JSON text (as read from a file).
inline CavityShape shape_from_json_text(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("shape document: not valid JSON");
    return shape_from_json(j);
}

inline json resistance_to_json(const ResistanceResult& r) {
    json j = json::object();
    j["value"] = r.value;
    j["n_x"] = r.n_x;
    j["n_phi"] = r.n_phi;
    j["trapped"] = r.trapped;
    if (r.convergence_gap) j["convergence_gap"] = *r.convergence_gap;
    return j;
}

inline json trajectory_to_json(const Trajectory& t) {
    json j = json::object();
    json entry = json::object();
    entry["x"] = t.entry.x;
    entry["phi"] = t.entry.phi;
    entry["phi_deg"] = detail::degrees(t.entry.phi);
    j["entry"] = std::move(entry);
    json pts = json::array();
    for (const Vec2& p : t.points) pts.push_back(detail::vec2_to_json(p));
    j["points"] = std::move(pts);
    j["reflections"] = t.reflections;
    j["exit_phi"] = detail::angle_or_null(t.exit_phi);
    j["exit_phi_deg"] =
        std::isfinite(t.exit_phi) ? json(detail::degrees(t.exit_phi)) : json(nullptr);
    j["status"] = to_string(t.status);
    j["perturbed"] = t.perturbed;
    return j;
}

inline json stats_to_json(const StatsTable& st) {
    json j = json::object();
    j["grid_nx"] = st.grid_nx;
    j["grid_nphi"] = st.grid_nphi;
    json hist = json::object();
    for (const auto& [count, cells] : st.histogram) hist[std::to_string(count)] = cells;
    j["histogram"] = std::move(hist);
    j["min_reflections"] = st.min_reflections;
    j["max_reflections"] = st.max_reflections;
    j["max_gap_ge4"] = st.max_gap_ge4;
    j["trapped"] = st.trapped;
    j["errors"] = st.errors;
    return j;
}

inline json body_to_json(const BodySpec& spec, const BodyResistance& r) {
    json j = json::object();
    j["n"] = spec.n_cavities;
    j["r"] = spec.r;
    j["convex_fraction"] = spec.convex_fraction;
    j["eps_over_r"] = 2.0 * std::numbers::pi / spec.n_cavities;
    j["perimeter_ratio"] = r.perimeter_ratio;
    j["cavity_value"] = r.cavity_value;
    j["value"] = r.value;
    j["approx_value"] = r.approx_value;
    return j;
}

inline json optimization_to_json(const OptimizationResult& r, bool include_history = false) {
    json j = json::object();
    j["method"] = r.method;
    j["seed"] = r.seed;
    j["best_point"] = r.best_point;
    j["best_value"] = r.best_value;
    j["evaluations"] = r.evaluations;
    j["converged"] = r.converged;
    if (include_history) {
        json hist = json::array();
        for (const auto& [point, value] : r.history) {
            json row = json::object();
            row["point"] = point;
            row["value"] = value;
            hist.push_back(std::move(row));
        }
        j["history"] = std::move(hist);
    } else {
        j["history_length"] = r.history.size();
    }
    return j;
}

}  // namespace newtres
