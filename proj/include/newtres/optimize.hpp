#pragma once
/**
 * @file optimize.hpp
 * @brief Derivative-free maximization of cavity resistance over
 *        shape-parameter boxes: Nelder-Mead simplex, coordinate pattern
 *        search, a real-coded genetic algorithm, and full-factorial sweeps.
 *
 * All methods maximize. Out-of-box (and constructor-rejected) points score
 * kWorstValue instead of erroring, which keeps direct search robust at the
 * feasibility boundary. Random draws go through fixed bit-to-double
 * transforms over mt19937_64, so a seed pins the whole search on any
 * platform.
 */

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "newtres/cavity.hpp"
#include "newtres/resistance.hpp"

namespace newtres {

/// Score of infeasible parameters; no genuine resistance comes close.
inline constexpr double kWorstValue = -1e300;

using Objective = std::function<double(const std::vector<double>&)>;

struct ParamDomain {
    std::vector<std::string> names;
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t size() const { return names.size(); }

    bool contains(const std::vector<double>& p) const {
        if (p.size() != lower.size()) return false;
        for (std::size_t i = 0; i < p.size(); ++i)
            if (p[i] < lower[i] || p[i] > upper[i]) return false;
        return true;
    }
};

struct OptimizeOptions {
    int max_evaluations = 2000;
    /// Stop when the simplex diameter / poll step falls below this.
    double tol_x = 1e-6;
    /// Stop when the simplex value spread falls below this.
    double tol_f = 1e-10;
    /// Initial Nelder-Mead step, as a fraction of each box width.
    double initial_step = 0.05;
    /// Initial pattern-search poll step, as a fraction of each box width.
    double pattern_step = 0.25;
    int population = 24;
    int generations = 40;
    /// Probability that a crossover (rather than a copy) produces a child.
    double crossover_rate = 0.9;
    /// Per-coordinate mutation probability.
    double mutation_rate = 0.3;
    /// Mutation standard deviation, as a fraction of each box width.
    double mutation_sigma = 0.2;
    /// Per-generation geometric decay of the mutation scale (1 = none);
    /// large early kicks explore, small late ones refine.
    double mutation_decay = 0.92;
    std::uint64_t seed = 0;
    /// Deterministic globalization: when nonempty, a coarse inclusive
    /// lattice with this resolution per axis is evaluated first.
    /// nelder_mead and pattern_search then restart their local iteration
    /// from the best lattice cells; genetic_search injects those cells into
    /// its initial population. Empty keeps the classic behavior. Useful on
    /// multimodal terrain, where a lone descent parks on a local optimum
    /// and a random population herds to the widest basin.
    std::vector<int> seed_lattice = {};
    /// Number of spatially separated best lattice cells used as extra starts.
    int lattice_restarts = 4;
};

struct OptimizationResult {
    std::vector<double> best_point;
    double best_value = kWorstValue;
    long long evaluations = 0;
    std::vector<std::pair<std::vector<double>, double>> history;
    std::string method;
    std::uint64_t seed = 0;
    /// False when the evaluation budget ran out before the stop rule.
    bool converged = false;
};

namespace detail {

inline void check_domain(const ParamDomain& d) {
    if (d.names.empty() || d.names.size() != d.lower.size() ||
        d.names.size() != d.upper.size())
        throw std::invalid_argument("optimize: domain arrays must be nonempty and same-sized");
    for (std::size_t i = 0; i < d.names.size(); ++i)
        if (!(d.lower[i] < d.upper[i]))
            throw std::invalid_argument("optimize: domain requires lower < upper per axis");
}

/// Deterministic draws: fixed transforms over the raw mt19937_64 stream
/// (library distributions are implementation-defined).
struct Rng {
    std::mt19937_64 gen;
    double spare = 0.0;
    bool has_spare = false;

    explicit Rng(std::uint64_t seed) : gen(seed) {}

    double uniform() { return static_cast<double>(gen() >> 11) * 0x1.0p-53; }  // [0, 1)

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    double gaussian() {
        if (has_spare) {
            has_spare = false;
            return spare;
        }
        double u1 = 1.0 - uniform();  // (0, 1]
        double u2 = uniform();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * 3.14159265358979323846 * u2;
        spare = radius * std::sin(angle);
        has_spare = true;
        return radius * std::cos(angle);
    }
};

/// Shared evaluation bookkeeping: penalizes out-of-box points without
/// spending budget, records genuine evaluations, tracks the running best.
struct Evaluator {
    const Objective& fn;
    const ParamDomain& domain;
    OptimizationResult& result;
    int budget;

    bool exhausted() const { return result.evaluations >= budget; }

    double operator()(const std::vector<double>& p) {
        if (!domain.contains(p)) return kWorstValue;
        double v = fn(p);
        ++result.evaluations;
        result.history.emplace_back(p, v);
        if (v > result.best_value) {
            result.best_value = v;
            result.best_point = p;
        }
        return v;
    }
};

}  // namespace detail

/// Memoize an objective on parameters quantized to a 1e-12 grid, so search
/// methods never re-trace an already-visited point.
inline Objective make_cached(Objective fn) {
    auto memo = std::make_shared<std::map<std::vector<long long>, double>>();
    return [fn = std::move(fn), memo](const std::vector<double>& p) {
        std::vector<long long> key(p.size());
        for (std::size_t i = 0; i < p.size(); ++i)
            key[i] = std::llround(p[i] * 1e12);
        auto it = memo->find(key);
        if (it != memo->end()) return it->second;
        double v = fn(p);
        memo->emplace(std::move(key), v);
        return v;
    };
}

/// Cavity resistance of make_double_parabola(h, beta) as an objective over
/// (h, beta). Pinched parameters score kWorstValue, and so do shapes whose
/// quadrature traps at the reflection cap: their value cannot be certified,
/// which for a search just means "avoid".
inline Objective resistance_objective(const QuadratureSpec& quadrature) {
    return make_cached([quadrature](const std::vector<double>& p) {
        if (p.size() != 2) throw std::invalid_argument("resistance_objective: expected (h, beta)");
        CavityShape shape;
        try {
            shape = make_double_parabola(p[0], p[1]);
        } catch (const std::invalid_argument&) {
            return kWorstValue;
        }
        try {
            return cavity_resistance(shape, quadrature).value;
        } catch (const TrappedError&) {
            return kWorstValue;
        }
    });
}

namespace detail {

/// One classic simplex descent; true when stopped by tolerance, false when
/// the evaluation budget ran out.
inline bool nelder_mead_core(Evaluator& eval, const ParamDomain& domain,
                             const std::vector<double>& start, const OptimizeOptions& options) {
    const std::size_t dim = domain.size();

    // Initial simplex: start plus one step along each axis, flipped when the
    // step would leave the box.
    std::vector<std::vector<double>> simplex{start};
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> v = start;
        double h = options.initial_step * (domain.upper[i] - domain.lower[i]);
        v[i] = (v[i] + h <= domain.upper[i]) ? v[i] + h : v[i] - h;
        simplex.push_back(v);
    }
    std::vector<double> value(simplex.size());
    for (std::size_t i = 0; i < simplex.size(); ++i) value[i] = eval(simplex[i]);

    auto order = [&]() {
        std::vector<std::size_t> idx(simplex.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return value[a] > value[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> v2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            v2.push_back(value[i]);
        }
        simplex.swap(s2);
        value.swap(v2);
    };

    while (!eval.exhausted()) {
        order();
        double diameter = 0.0;
        for (std::size_t i = 1; i < simplex.size(); ++i)
            for (std::size_t k = 0; k < dim; ++k)
                diameter = std::max(diameter, std::abs(simplex[i][k] - simplex[0][k]));
        double spread = std::abs(value.front() - value.back());
        if (diameter < options.tol_x || spread < options.tol_f) return true;
        // Centroid of all but the worst vertex.
        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i + 1 < simplex.size(); ++i)
            for (std::size_t k = 0; k < dim; ++k) centroid[k] += simplex[i][k];
        for (double& c : centroid) c /= static_cast<double>(simplex.size() - 1);
        auto blend = [&](double coef) {
            std::vector<double> p(dim);
            for (std::size_t k = 0; k < dim; ++k)
                p[k] = centroid[k] + coef * (centroid[k] - simplex.back()[k]);
            return p;
        };
        std::vector<double> reflected = blend(1.0);
        double f_r = eval(reflected);
        if (f_r > value.front()) {
            std::vector<double> expanded = blend(2.0);
            double f_e = eval(expanded);
            if (f_e > f_r) {
                simplex.back() = expanded;
                value.back() = f_e;
            } else {
                simplex.back() = reflected;
                value.back() = f_r;
            }
            continue;
        }
        if (f_r > value[value.size() - 2]) {
            simplex.back() = reflected;
            value.back() = f_r;
            continue;
        }
        std::vector<double> contracted = blend(-0.5);
        double f_c = eval(contracted);
        if (f_c > value.back()) {
            simplex.back() = contracted;
            value.back() = f_c;
            continue;
        }
        // Shrink toward the best vertex.
        for (std::size_t i = 1; i < simplex.size(); ++i) {
            for (std::size_t k = 0; k < dim; ++k)
                simplex[i][k] = simplex[0][k] + 0.5 * (simplex[i][k] - simplex[0][k]);
            value[i] = eval(simplex[i]);
            if (eval.exhausted()) break;
        }
    }
    return false;
}

/// One coordinate-polling descent with step halving on failed polls; true
/// when stopped by tolerance, false when the budget ran out.
inline bool pattern_search_core(Evaluator& eval, const ParamDomain& domain,
                                const std::vector<double>& start,
                                const OptimizeOptions& options) {
    const std::size_t dim = domain.size();
    std::vector<double> step(dim);
    for (std::size_t i = 0; i < dim; ++i)
        step[i] = options.pattern_step * (domain.upper[i] - domain.lower[i]);
    std::vector<double> center = start;
    double f_center = eval(center);

    while (!eval.exhausted()) {
        if (*std::max_element(step.begin(), step.end()) < options.tol_x) return true;
        // Poll both directions on every axis; move to the best improvement.
        std::vector<double> best_poll;
        double f_best = f_center;
        for (std::size_t i = 0; i < dim && !eval.exhausted(); ++i) {
            for (double dir : {+1.0, -1.0}) {
                std::vector<double> p = center;
                p[i] += dir * step[i];
                double f = eval(p);
                if (f > f_best) {
                    f_best = f;
                    best_poll = p;
                }
                if (eval.exhausted()) break;
            }
        }
        if (!best_poll.empty()) {
            center = best_poll;
            f_center = f_best;
        } else {
            for (double& s : step) s *= 0.5;
        }
    }
    return false;
}

/// Evaluate the coarse inclusive lattice, best cells first. Lattice
/// evaluations are genuine objective calls and appear in the history like
/// any other.
inline std::vector<std::pair<double, std::vector<double>>> lattice_scores(
    Evaluator& eval, const ParamDomain& domain, const std::vector<int>& resolution,
    const char* method) {
    if (resolution.size() != domain.size())
        throw std::invalid_argument(std::string(method) +
                                    ": seed_lattice needs one resolution per axis");
    for (int r : resolution)
        if (r < 2)
            throw std::invalid_argument(std::string(method) +
                                        ": seed_lattice resolution must be at least 2");
    const std::size_t dim = domain.size();
    long long cells = 1;
    for (int r : resolution) cells *= r;
    std::vector<std::pair<double, std::vector<double>>> scored;
    scored.reserve(static_cast<std::size_t>(cells));
    std::vector<int> idx(dim, 0);
    for (long long c = 0; c < cells && !eval.exhausted(); ++c) {
        std::vector<double> p(dim);
        for (std::size_t k = 0; k < dim; ++k)
            p[k] = domain.lower[k] +
                   idx[k] * (domain.upper[k] - domain.lower[k]) / (resolution[k] - 1);
        scored.emplace_back(eval(p), std::move(p));
        for (std::size_t k = dim; k-- > 0;) {
            if (++idx[k] < resolution[k]) break;
            idx[k] = 0;
        }
    }
    std::stable_sort(scored.begin(), scored.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    return scored;
}

/// Pick up to `count` of the best finite cells, skipping candidates adjacent
/// to an already-picked one so the picks probe distinct basins.
inline std::vector<std::pair<double, std::vector<double>>> pick_separated(
    const std::vector<std::pair<double, std::vector<double>>>& scored, const ParamDomain& domain,
    const std::vector<int>& resolution, int count) {
    std::vector<std::pair<double, std::vector<double>>> picks;
    for (const auto& [v, p] : scored) {
        if (static_cast<int>(picks.size()) >= count || v <= kWorstValue) break;
        bool near_used = false;
        for (const auto& [uv, u] : picks) {
            bool within_all = true;
            for (std::size_t k = 0; k < domain.size(); ++k) {
                double cell = (domain.upper[k] - domain.lower[k]) / (resolution[k] - 1);
                if (std::abs(p[k] - u[k]) > 1.25 * cell) {
                    within_all = false;
                    break;
                }
            }
            if (within_all) {
                near_used = true;
                break;
            }
        }
        if (!near_used) picks.emplace_back(v, p);
    }
    return picks;
}

/// Shared driver for the two descent methods: one run from the user's start
/// and, when seed_lattice is set, further runs from the best lattice cells.
template <class Core>
OptimizationResult run_descents(const Objective& objective, const ParamDomain& domain,
                                const std::vector<double>& start, const OptimizeOptions& options,
                                const char* method, Core core) {
    check_domain(domain);
    if (!domain.contains(start))
        throw std::invalid_argument(std::string(method) + ": start must lie inside the domain");
    OptimizationResult result;
    result.method = method;
    result.seed = options.seed;
    Evaluator eval{objective, domain, result, options.max_evaluations};

    bool all_converged = core(eval, start);
    if (!options.seed_lattice.empty()) {
        auto scored = lattice_scores(eval, domain, options.seed_lattice, method);
        auto seeds = pick_separated(scored, domain, options.seed_lattice,
                                    options.lattice_restarts);
        for (const auto& [v, p] : seeds) {
            if (eval.exhausted()) break;
            all_converged = core(eval, p) && all_converged;
        }
    }
    result.converged = all_converged && !eval.exhausted();
    return result;
}

}  // namespace detail

/// Nelder-Mead simplex maximization with box penalties; optional
/// lattice-seeded restarts for multimodal terrain.
inline OptimizationResult nelder_mead(const Objective& objective, const ParamDomain& domain,
                                      const std::vector<double>& start,
                                      const OptimizeOptions& options = {}) {
    return detail::run_descents(objective, domain, start, options, "nelder-mead",
                                [&](detail::Evaluator& ev, const std::vector<double>& s) {
                                    return detail::nelder_mead_core(ev, domain, s, options);
                                });
}

/// Coordinate-aligned polling with step halving; optional lattice-seeded
/// restarts for multimodal terrain.
inline OptimizationResult pattern_search(const Objective& objective, const ParamDomain& domain,
                                         const std::vector<double>& start,
                                         const OptimizeOptions& options = {}) {
    return detail::run_descents(objective, domain, start, options, "pattern-search",
                                [&](detail::Evaluator& ev, const std::vector<double>& s) {
                                    return detail::pattern_search_core(ev, domain, s, options);
                                });
}

/// Real-coded genetic algorithm: tournament selection, blend crossover,
/// Gaussian mutation scaled to box width, elitism of one.
inline OptimizationResult genetic_search(const Objective& objective, const ParamDomain& domain,
                                         const OptimizeOptions& options = {}) {
    detail::check_domain(domain);
    if (options.population < 4)
        throw std::invalid_argument("genetic_search: population must be at least 4");
    const std::size_t dim = domain.size();
    OptimizationResult result;
    result.method = "genetic";
    result.seed = options.seed;
    detail::Evaluator eval{objective, domain, result, options.max_evaluations};
    detail::Rng rng(options.seed);

    auto clamp_into_box = [&](std::vector<double>& p) {
        for (std::size_t k = 0; k < dim; ++k)
            p[k] = std::clamp(p[k], domain.lower[k], domain.upper[k]);
    };

    const int pop_size = options.population;
    std::vector<std::vector<double>> population(static_cast<std::size_t>(pop_size));
    std::vector<double> fitness(static_cast<std::size_t>(pop_size), kWorstValue);
    for (auto& ind : population) {
        ind.resize(dim);
        for (std::size_t k = 0; k < dim; ++k)
            ind[k] = rng.uniform(domain.lower[k], domain.upper[k]);
    }
    // Informed initialization: replace a quarter of the random population
    // with the best separated cells of the coarse lattice, reusing their
    // already-recorded scores.
    std::size_t preseeded = 0;
    if (!options.seed_lattice.empty()) {
        auto scored = detail::lattice_scores(eval, domain, options.seed_lattice, "genetic");
        auto seeds = detail::pick_separated(scored, domain, options.seed_lattice,
                                            std::max(1, pop_size / 4));
        for (const auto& [v, p] : seeds) {
            population[preseeded] = p;
            fitness[preseeded] = v;
            ++preseeded;
        }
    }
    for (std::size_t i = preseeded; i < population.size() && !eval.exhausted(); ++i)
        fitness[i] = eval(population[i]);

    auto tournament = [&]() -> const std::vector<double>& {
        std::size_t best = static_cast<std::size_t>(rng.uniform() * pop_size);
        for (int round = 1; round < 3; ++round) {
            std::size_t c = static_cast<std::size_t>(rng.uniform() * pop_size);
            if (fitness[c] > fitness[best]) best = c;
        }
        return population[best];
    };

    bool ran_out = eval.exhausted();
    double sigma_scale = 1.0;
    for (int gen = 0; gen < options.generations && !ran_out; ++gen) {
        std::size_t elite = 0;
        for (std::size_t i = 1; i < population.size(); ++i)
            if (fitness[i] > fitness[elite]) elite = i;
        std::vector<std::vector<double>> next{population[elite]};
        std::vector<double> next_fit{fitness[elite]};
        while (next.size() < population.size()) {
            std::vector<double> child(dim);
            const auto& p1 = tournament();
            const auto& p2 = tournament();
            if (rng.uniform() < options.crossover_rate) {
                for (std::size_t k = 0; k < dim; ++k) {
                    double u = rng.uniform(-0.25, 1.25);  // blend beyond the parents
                    child[k] = p1[k] + u * (p2[k] - p1[k]);
                }
            } else {
                child = p1;
            }
            for (std::size_t k = 0; k < dim; ++k)
                if (rng.uniform() < options.mutation_rate)
                    child[k] += sigma_scale * options.mutation_sigma *
                                (domain.upper[k] - domain.lower[k]) * rng.gaussian();
            clamp_into_box(child);
            if (eval.exhausted()) {
                ran_out = true;
                break;
            }
            next_fit.push_back(eval(child));
            next.push_back(std::move(child));
        }
        if (next.size() == population.size()) {
            population.swap(next);
            fitness.swap(next_fit);
        }
        sigma_scale *= options.mutation_decay;
    }
    result.converged = !ran_out;
    return result;
}

struct SweepRow {
    std::vector<double> point;
    double value;
};

/// Full-factorial evaluation on the inclusive uniform grid; the first axis
/// varies slowest.
inline std::vector<SweepRow> sweep_grid(const Objective& objective, const ParamDomain& domain,
                                        const std::vector<int>& resolution) {
    detail::check_domain(domain);
    if (resolution.size() != domain.size())
        throw std::invalid_argument("sweep_grid: one resolution per axis required");
    long long total = 1;
    for (int rpt : resolution) {
        if (rpt < 2) throw std::invalid_argument("sweep_grid: resolution must be at least 2");
        total *= rpt;
    }
    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(total));
    const std::size_t dim = domain.size();
    std::vector<int> idx(dim, 0);
    for (long long count = 0; count < total; ++count) {
        std::vector<double> p(dim);
        for (std::size_t k = 0; k < dim; ++k)
            p[k] = domain.lower[k] +
                   idx[k] * (domain.upper[k] - domain.lower[k]) / (resolution[k] - 1);
        rows.push_back(SweepRow{p, objective(p)});
        for (std::size_t k = dim; k-- > 0;) {
            if (++idx[k] < resolution[k]) break;
            idx[k] = 0;
        }
    }
    return rows;
}

/// CSV with a header row and 15 significant digits per field.
inline std::string sweep_csv(const std::vector<SweepRow>& rows, const ParamDomain& domain,
                             const std::string& value_name = "R") {
    std::string out;
    for (const auto& name : domain.names) {
        out += name;
        out += ',';
    }
    out += value_name;
    out += '\n';
    char buf[40];
    for (const auto& row : rows) {
        for (double c : row.point) {
            std::snprintf(buf, sizeof buf, "%.15g", c);
            out += buf;
            out += ',';
        }
        std::snprintf(buf, sizeof buf, "%.15g", row.value);
        out += buf;
        out += '\n';
    }
    return out;
}

}  // namespace newtres
