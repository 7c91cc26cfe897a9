/**
 * @file newtres_cli.cpp
 * @brief Command-line front end: every library capability behind one binary
 *        with reproducible, file-based outputs.
 *
 * Subcommands: resistance, trace, sweep, optimize, body, stats, render.
 * Reports are JSON on stdout (duplicated to --out when given), sweeps are
 * CSV files, figures are SVG. Angles are degrees at this boundary and
 * radians inside; JSON carries radians plus a _deg convenience copy.
 *
 * Exit codes: 0 success, 2 usage/validation error, 3 computation failure
 * (trapped trajectory, invalid geometry, tolerance not met).
 */

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "newtres/newtres.hpp"

namespace {

using namespace newtres;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitComputation = 3;

constexpr double kDegree = std::numbers::pi / 180.0;

/// Shape selection shared by every subcommand.
struct ShapeFlags {
    std::string shape = "double-parabola";
    double h = std::numbers::sqrt2;
    double beta = 0.0;
    double depth = 1.0;
};

void add_shape_flags(CLI::App* cmd, ShapeFlags& f) {
    // The short help alias -h would shadow the --h parameter.
    cmd->set_help_flag("--help", "print this help and exit");
    cmd->add_option("--shape", f.shape,
                    "flat | triangle | rectangle | double-parabola | file:PATH.json")
        ->capture_default_str();
    cmd->add_option("--h", f.h, "Double Parabola depth h > 0")->capture_default_str();
    cmd->add_option("--beta", f.beta, "Double Parabola slope coefficient")
        ->capture_default_str();
    cmd->add_option("--depth", f.depth, "rectangle depth > 0")->capture_default_str();
}

CavityShape make_shape(const ShapeFlags& f) {
    if (f.shape == "flat") return make_flat();
    if (f.shape == "triangle") return make_triangle();
    if (f.shape == "rectangle") return make_rectangle(f.depth);
    if (f.shape == "double-parabola") return make_double_parabola(f.h, f.beta);
    if (f.shape.rfind("file:", 0) == 0) {
        std::string path = f.shape.substr(5);
        std::ifstream in(path);
        if (!in) throw std::invalid_argument("cannot open shape file: " + path);
        std::ostringstream text;
        text << in.rdbuf();
        return shape_from_json_text(text.str());
    }
    throw std::invalid_argument("unknown shape \"" + f.shape + "\"");
}

/// Quadrature controls shared by resistance-evaluating subcommands.
struct QuadFlags {
    int n = 1000;
    double max_trapped_fraction = 0.0;
    int max_reflections = kDefaultMaxReflections;
    int threads = 0;
};

void add_quad_flags(CLI::App* cmd, QuadFlags& q, const char* n_name = "--n") {
    cmd->add_option(n_name, q.n, "quadrature subdivisions per axis")->capture_default_str();
    cmd->add_option("--max-trapped-fraction", q.max_trapped_fraction,
                    "tolerated fraction of trapped cells")
        ->capture_default_str();
    cmd->add_option("--max-reflections", q.max_reflections, "reflection cap per trajectory")
        ->capture_default_str();
    cmd->add_option("--threads", q.threads, "worker threads (0 = hardware)")
        ->capture_default_str();
}

QuadratureSpec to_spec(const QuadFlags& q) {
    QuadratureSpec spec;
    spec.n_x = spec.n_phi = q.n;
    spec.max_trapped_fraction = q.max_trapped_fraction;
    spec.max_reflections = q.max_reflections;
    spec.threads = q.threads;
    return spec;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ComputationError("cannot write output file: " + path);
    out << content;
    if (!out) throw ComputationError("write failed: " + path);
}

/// Print a report to stdout and mirror the same bytes to --out when given.
void emit(const json& report, const std::string& out_path) {
    std::string text = report.dump(2) + "\n";
    std::fputs(text.c_str(), stdout);
    if (!out_path.empty()) write_file(out_path, text);
}

// --- resistance ------------------------------------------------------------

struct ResistanceArgs {
    ShapeFlags shape;
    QuadFlags quad;
    double tol = 0.0;  // > 0 switches to grid-doubling mode
    int n_start = 250;
    std::string out;
};

int cmd_resistance(const ResistanceArgs& a) {
    CavityShape shape = make_shape(a.shape);
    QuadratureSpec spec = to_spec(a.quad);
    ResistanceResult r = (a.tol > 0.0) ? cavity_resistance_converged(shape, a.tol, a.n_start, spec)
                                       : cavity_resistance(shape, spec);
    json report = resistance_to_json(r);
    report["shape"] = shape_to_json(shape);
    emit(report, a.out);
    return kExitOk;
}

// --- trace -------------------------------------------------------------------

struct TraceArgs {
    ShapeFlags shape;
    double x = 0.0;
    double phi_deg = 0.0;
    int max_reflections = kDefaultMaxReflections;
    std::string out;
    std::string svg;
};

int cmd_trace(const TraceArgs& a) {
    if (!(a.x > -0.5 && a.x < 0.5))
        throw std::invalid_argument("trace: --x must lie in (-1/2, 1/2)");
    if (!(a.phi_deg > -90.0 && a.phi_deg < 90.0))
        throw std::invalid_argument("trace: --phi-deg must lie in (-90, 90)");
    CavityShape shape = make_shape(a.shape);
    Trajectory t = trace(shape, {a.x, a.phi_deg * kDegree}, a.max_reflections);
    emit(trajectory_to_json(t), a.out);
    if (!a.svg.empty()) write_file(a.svg, render_trajectory_svg(shape, t));
    if (t.status != TrajectoryStatus::exited) {
        std::fprintf(stderr, "trace: trajectory %s\n", to_string(t.status));
        return kExitComputation;
    }
    return kExitOk;
}

// --- sweep -------------------------------------------------------------------

struct SweepArgs {
    ShapeFlags shape;  // fixes the non-swept coordinate
    QuadFlags quad{.n = 500};
    std::vector<double> h_range;
    std::vector<double> beta_range;
    int h_steps = 21;
    int beta_steps = 21;
    std::string out;
};

/// R(h, beta) over the Double Parabola family; invalid or uncertifiable
/// parameters become NaN rows so external plotters can mask them.
Objective sweep_objective(const SweepArgs& a, bool sweep_h, bool sweep_beta) {
    QuadratureSpec spec = to_spec(a.quad);
    double fixed_h = a.shape.h;
    double fixed_beta = a.shape.beta;
    return [spec, sweep_h, sweep_beta, fixed_h, fixed_beta](const std::vector<double>& p) {
        std::size_t i = 0;
        double h = sweep_h ? p[i++] : fixed_h;
        double beta = sweep_beta ? p[i] : fixed_beta;
        try {
            return cavity_resistance(make_double_parabola(h, beta), spec).value;
        } catch (const std::invalid_argument&) {
            return std::numeric_limits<double>::quiet_NaN();
        } catch (const TrappedError&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };
}

int cmd_sweep(const SweepArgs& a) {
    bool sweep_h = !a.h_range.empty();
    bool sweep_beta = !a.beta_range.empty();
    if (!sweep_h && !sweep_beta)
        throw std::invalid_argument("sweep: give --h-range and/or --beta-range");
    ParamDomain domain;
    std::vector<int> resolution;
    if (sweep_h) {
        domain.names.push_back("h");
        domain.lower.push_back(a.h_range[0]);
        domain.upper.push_back(a.h_range[1]);
        resolution.push_back(a.h_steps);
    }
    if (sweep_beta) {
        domain.names.push_back("beta");
        domain.lower.push_back(a.beta_range[0]);
        domain.upper.push_back(a.beta_range[1]);
        resolution.push_back(a.beta_steps);
    }
    auto rows = sweep_grid(sweep_objective(a, sweep_h, sweep_beta), domain, resolution);
    write_file(a.out, sweep_csv(rows, domain));

    const SweepRow* best = nullptr;
    for (const auto& row : rows)
        if (std::isfinite(row.value) && (!best || row.value > best->value)) best = &row;
    json report = json::object();
    report["rows"] = rows.size();
    report["csv"] = a.out;
    if (best) {
        json argmax = json::object();
        for (std::size_t i = 0; i < domain.names.size(); ++i)
            argmax[domain.names[i]] = best->point[i];
        report["argmax"] = std::move(argmax);
        report["max_value"] = best->value;
    }
    emit(report, "");
    return kExitOk;
}

// --- optimize ----------------------------------------------------------------

struct OptimizeArgs {
    std::string method = "nelder-mead";
    std::vector<double> h_range{0.5, 3.0};
    std::vector<double> beta_range{-1.0, 1.0};
    std::vector<double> start;  // default: box midpoint
    QuadFlags quad{.n = 500};
    OptimizeOptions options{.seed_lattice = {9, 7}};
    std::vector<int> lattice{9, 7};
    std::string out;
};

int cmd_optimize(const OptimizeArgs& a) {
    ParamDomain domain{{"h", "beta"},
                       {a.h_range[0], a.beta_range[0]},
                       {a.h_range[1], a.beta_range[1]}};
    std::vector<double> start = a.start;
    if (start.empty())
        start = {0.5 * (domain.lower[0] + domain.upper[0]),
                 0.5 * (domain.lower[1] + domain.upper[1])};
    OptimizeOptions options = a.options;
    // --lattice 0 0 disables the coarse-scan seeding.
    options.seed_lattice = (a.lattice.size() == 2 && a.lattice[0] >= 2 && a.lattice[1] >= 2)
                               ? a.lattice
                               : std::vector<int>{};
    Objective objective = resistance_objective(to_spec(a.quad));
    OptimizationResult r;
    if (a.method == "nelder-mead")
        r = nelder_mead(objective, domain, start, options);
    else if (a.method == "pattern")
        r = pattern_search(objective, domain, start, options);
    else if (a.method == "genetic")
        r = genetic_search(objective, domain, options);
    else
        throw std::invalid_argument("optimize: --method must be nelder-mead, pattern or genetic");

    json summary = optimization_to_json(r);
    json named = json::object();
    for (std::size_t i = 0; i < domain.names.size(); ++i)
        named[domain.names[i]] = r.best_point[i];
    summary["best"] = std::move(named);
    std::fputs((summary.dump(2) + "\n").c_str(), stdout);
    if (!a.out.empty()) write_file(a.out, optimization_to_json(r, true).dump(2) + "\n");
    return kExitOk;
}

// --- body ----------------------------------------------------------------------

struct BodyArgs {
    ShapeFlags shape;
    QuadFlags quad;
    int n_cavities = 42;
    double convex_fraction = 0.0;
    double tol = 0.0;
    int n_start = 250;
    std::string out;
    std::string svg;
};

int cmd_body(const BodyArgs& a) {
    BodySpec spec;
    spec.n_cavities = a.n_cavities;
    spec.convex_fraction = a.convex_fraction;
    spec.cavity = make_shape(a.shape);
    QuadratureSpec quad = to_spec(a.quad);
    ResistanceResult cavity = (a.tol > 0.0)
                                  ? cavity_resistance_converged(spec.cavity, a.tol, a.n_start, quad)
                                  : cavity_resistance(spec.cavity, quad);
    BodyResistance r = body_resistance(spec, cavity.value);
    json report = body_to_json(spec, r);
    report["cavity_quadrature"] = resistance_to_json(cavity);
    emit(report, a.out);
    if (!a.svg.empty()) write_file(a.svg, render_body_svg(spec));
    return kExitOk;
}

// --- stats ---------------------------------------------------------------------

struct StatsArgs {
    ShapeFlags shape;
    int grid = 200;
    int max_reflections = kDefaultMaxReflections;
    std::string out;
};

int cmd_stats(const StatsArgs& a) {
    CavityShape shape = make_shape(a.shape);
    StatsTable st = reflection_stats(shape, a.grid, a.grid, a.max_reflections);
    json report = stats_to_json(st);
    report["shape"] = shape.name;
    emit(report, a.out);
    return kExitOk;
}

// --- render --------------------------------------------------------------------

struct RenderArgs {
    ShapeFlags shape;
    int n_cavities = 0;  // 0 draws the bare cavity chain
    std::string out;
};

int cmd_render(const RenderArgs& a) {
    CavityShape shape = make_shape(a.shape);
    std::string svg;
    if (a.n_cavities > 0) {
        BodySpec spec;
        spec.n_cavities = a.n_cavities;
        spec.cavity = shape;
        svg = render_body_svg(spec);
    } else {
        svg = render_shape_svg(shape);
    }
    if (a.out.empty())
        std::fputs(svg.c_str(), stdout);
    else
        write_file(a.out, svg);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Normalized Newtonian resistance of rough rotating bodies"};
    app.set_help_flag("--help", "print this help and exit");
    app.require_subcommand(1);

    ResistanceArgs res;
    CLI::App* c_res = app.add_subcommand("resistance", "cavity resistance by exact billiards");
    add_shape_flags(c_res, res.shape);
    add_quad_flags(c_res, res.quad);
    c_res->add_option("--tol", res.tol, "refine by grid doubling until |R_N - R_2N| < tol");
    c_res->add_option("--n-start", res.n_start, "first grid for --tol mode")
        ->capture_default_str();
    c_res->add_option("--out", res.out, "also write the JSON report here");

    TraceArgs tra;
    CLI::App* c_tra = app.add_subcommand("trace", "single trajectory through a cavity");
    add_shape_flags(c_tra, tra.shape);
    c_tra->add_option("--x", tra.x, "entry abscissa in (-1/2, 1/2)")->required();
    c_tra->add_option("--phi-deg", tra.phi_deg, "entry angle in degrees, (-90, 90)")->required();
    c_tra->add_option("--max-reflections", tra.max_reflections, "reflection cap")
        ->capture_default_str();
    c_tra->add_option("--out", tra.out, "also write the JSON report here");
    c_tra->add_option("--svg", tra.svg, "write an SVG figure of the trajectory");

    SweepArgs swp;
    CLI::App* c_swp = app.add_subcommand("sweep", "R over a Double Parabola parameter grid");
    add_shape_flags(c_swp, swp.shape);
    add_quad_flags(c_swp, swp.quad);
    c_swp->add_option("--h-range", swp.h_range, "h interval LO HI")->expected(2);
    c_swp->add_option("--beta-range", swp.beta_range, "beta interval LO HI")->expected(2);
    c_swp->add_option("--h-steps", swp.h_steps, "grid points along h")->capture_default_str();
    c_swp->add_option("--beta-steps", swp.beta_steps, "grid points along beta")
        ->capture_default_str();
    c_swp->add_option("--out", swp.out, "CSV output path")->required();

    OptimizeArgs opt;
    CLI::App* c_opt = app.add_subcommand("optimize", "maximize R over (h, beta)");
    c_opt->add_option("--method", opt.method, "nelder-mead | pattern | genetic")
        ->capture_default_str();
    c_opt->add_option("--h-range", opt.h_range, "h box LO HI")->expected(2);
    c_opt->add_option("--beta-range", opt.beta_range, "beta box LO HI")->expected(2);
    c_opt->add_option("--start", opt.start, "start point H BETA (default: box midpoint)")
        ->expected(2);
    add_quad_flags(c_opt, opt.quad);
    c_opt->add_option("--budget", opt.options.max_evaluations, "objective evaluation budget")
        ->capture_default_str();
    c_opt->add_option("--seed", opt.options.seed, "random seed (genetic)")
        ->capture_default_str();
    c_opt->add_option("--population", opt.options.population, "population size (genetic)")
        ->capture_default_str();
    c_opt->add_option("--generations", opt.options.generations, "generations (genetic)")
        ->capture_default_str();
    c_opt->add_option("--lattice", opt.lattice,
                      "coarse-scan seeding grid NH NBETA (0 0 disables)")
        ->expected(2);
    c_opt->add_option("--restarts", opt.options.lattice_restarts,
                      "local restarts from coarse-scan seeds")
        ->capture_default_str();
    c_opt->add_option("--out", opt.out, "write the full evaluation history here");

    BodyArgs bod;
    CLI::App* c_bod = app.add_subcommand("body", "resistance of the full rough body");
    add_shape_flags(c_bod, bod.shape);
    add_quad_flags(c_bod, bod.quad, "--quad-n");
    c_bod->add_option("--n", bod.n_cavities, "number of boundary cavities")
        ->capture_default_str();
    c_bod->add_option("--convex-fraction", bod.convex_fraction,
                      "boundary fraction kept smooth")
        ->capture_default_str();
    c_bod->add_option("--tol", bod.tol, "refine cavity R by grid doubling to this tol");
    c_bod->add_option("--n-start", bod.n_start, "first grid for --tol mode")
        ->capture_default_str();
    c_bod->add_option("--out", bod.out, "also write the JSON report here");
    c_bod->add_option("--svg", bod.svg, "write the rosette figure here");

    StatsArgs sta;
    CLI::App* c_sta = app.add_subcommand("stats", "reflection-count statistics on a grid");
    add_shape_flags(c_sta, sta.shape);
    c_sta->add_option("--grid", sta.grid, "grid points per axis")->capture_default_str();
    c_sta->add_option("--max-reflections", sta.max_reflections, "reflection cap")
        ->capture_default_str();
    c_sta->add_option("--out", sta.out, "also write the JSON report here");

    RenderArgs ren;
    CLI::App* c_ren = app.add_subcommand("render", "SVG figure of a cavity or full body");
    add_shape_flags(c_ren, ren.shape);
    c_ren->add_option("--n", ren.n_cavities, "cavities around the body (0: bare chain)")
        ->capture_default_str();
    c_ren->add_option("--out", ren.out, "SVG output path (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*c_res) return cmd_resistance(res);
        if (*c_tra) return cmd_trace(tra);
        if (*c_swp) return cmd_sweep(swp);
        if (*c_opt) return cmd_optimize(opt);
        if (*c_bod) return cmd_body(bod);
        if (*c_sta) return cmd_stats(sta);
        if (*c_ren) return cmd_render(ren);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const ComputationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitComputation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitComputation;
    }
    return kExitUsage;
}
