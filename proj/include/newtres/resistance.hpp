#pragma once
/**
 * @file resistance.hpp
 * @brief Numerical evaluation of the normalized cavity resistance
 *
 *   R = (3/8) * integral over [-1/2,1/2] x [-pi/2,pi/2] of
 *       (1 + cos(phi+(x, phi) - phi)) * cos(phi) dphi dx,
 *
 * by a composite open midpoint rule. Midpoints never sample the degenerate
 * boundary entries x = +-1/2 or phi = +-pi/2.
 *
 * Determinism contract: cells are accumulated in fixed row-major chunks and
 * the chunk sums are combined with a fixed pairwise reduction tree, so runs
 * with different thread counts agree bitwise.
 */

#include <atomic>
#include <cassert>
#include <cmath>
#include <cstddef>
#include <exception>
#include <mutex>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "newtres/billiard.hpp"
#include "newtres/cavity.hpp"
#include "newtres/errors.hpp"

namespace newtres {

/// Refinement budget: cavity_resistance_converged never exceeds this n.
inline constexpr int kMaxConvergedN = 8192;
/// Cells per work unit; the unit of the deterministic reduction.
inline constexpr int kQuadratureChunk = 8192;

enum class QuadratureRule { open_midpoint };

inline const char* to_string(QuadratureRule) { return "open-midpoint"; }

struct QuadratureSpec {
    int n_x = 1000;
    int n_phi = 1000;
    QuadratureRule rule = QuadratureRule::open_midpoint;
    /// Trapped cells beyond this fraction of the grid reject the result.
    double max_trapped_fraction = 0.0;
    /// Reflection cap handed to the tracer (deep cavities need more than
    /// the default: a box of depth d costs about 2*d*tan|phi| reflections).
    int max_reflections = kDefaultMaxReflections;
    /// Parallelism width; 0 means hardware concurrency.
    int threads = 0;
};

struct ResistanceResult {
    double value = 0.0;
    int n_x = 0;
    int n_phi = 0;
    long long trapped = 0;
    std::optional<double> convergence_gap;
};

namespace detail {

inline double pairwise_sum(const double* v, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += v[i];
        return s;
    }
    std::size_t h = n / 2;
    return pairwise_sum(v, h) + pairwise_sum(v + h, n - h);
}

}  // namespace detail

inline ResistanceResult cavity_resistance(const CavityShape& shape, const QuadratureSpec& spec) {
    if (spec.n_x < 2 || spec.n_phi < 2)
        throw std::invalid_argument("cavity_resistance: n_x and n_phi must be at least 2");
    if (spec.max_trapped_fraction < 0.0 || spec.max_trapped_fraction > 1.0)
        throw std::invalid_argument("cavity_resistance: max_trapped_fraction must lie in [0, 1]");
    if (spec.max_reflections < 1)
        throw std::invalid_argument("cavity_resistance: max_reflections must be at least 1");

    const long long n_cells = static_cast<long long>(spec.n_x) * spec.n_phi;
    const long long n_chunks = (n_cells + kQuadratureChunk - 1) / kQuadratureChunk;
    std::vector<double> chunk_sum(static_cast<std::size_t>(n_chunks), 0.0);
    std::vector<long long> chunk_trapped(static_cast<std::size_t>(n_chunks), 0);

    std::atomic<long long> next_chunk{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&]() {
        try {
            for (;;) {
                if (failed.load(std::memory_order_relaxed)) return;
                long long c = next_chunk.fetch_add(1, std::memory_order_relaxed);
                if (c >= n_chunks) return;
                long long begin = c * kQuadratureChunk;
                long long end = std::min(n_cells, begin + kQuadratureChunk);
                double sum = 0.0;
                long long trapped = 0;
                for (long long idx = begin; idx < end; ++idx) {
                    int i = static_cast<int>(idx / spec.n_phi);
                    int j = static_cast<int>(idx % spec.n_phi);
                    double x = -0.5 + (i + 0.5) / spec.n_x;
                    double phi =
                        -std::numbers::pi / 2.0 + (j + 0.5) * std::numbers::pi / spec.n_phi;
                    Trajectory t = trace(shape, EntryState{x, phi}, spec.max_reflections);
                    if (t.status == TrajectoryStatus::trapped) {
                        ++trapped;
                        continue;
                    }
                    if (t.status == TrajectoryStatus::geometry_error)
                        throw GeometryError("cavity_resistance: ray escaped the chain");
                    double cphi = std::cos(phi);
                    double w = (1.0 + std::cos(t.exit_phi - phi)) * cphi;
                    assert(w >= -1e-12 && w <= 2.0 * cphi + 1e-12);
                    sum += w;
                }
                chunk_sum[static_cast<std::size_t>(c)] = sum;
                chunk_trapped[static_cast<std::size_t>(c)] = trapped;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
            failed.store(true, std::memory_order_relaxed);
        }
    };

    int width = spec.threads > 0 ? spec.threads
                                 : std::max(1u, std::thread::hardware_concurrency());
    width = static_cast<int>(std::min<long long>(width, n_chunks));
    if (width <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(width));
        for (int w = 0; w < width; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    long long trapped = 0;
    for (long long t : chunk_trapped) trapped += t;
    if (trapped > 0) {
        double fraction = static_cast<double>(trapped) / static_cast<double>(n_cells);
        if (fraction > spec.max_trapped_fraction || trapped == n_cells)
            throw TrappedError("cavity_resistance: trapped fraction " + std::to_string(fraction) +
                               " exceeds the allowed " +
                               std::to_string(spec.max_trapped_fraction));
    }

    double sum = detail::pairwise_sum(chunk_sum.data(), chunk_sum.size());
    double cell_measure = (1.0 / spec.n_x) * (std::numbers::pi / spec.n_phi);
    double value = 0.375 * cell_measure * sum;
    // Trapped cells are excluded and the remaining measure rescaled.
    if (trapped > 0)
        value *= static_cast<double>(n_cells) / static_cast<double>(n_cells - trapped);
    assert(value > 0.0 && value <= 1.5 + 1e-9);

    ResistanceResult res;
    res.value = value;
    res.n_x = spec.n_x;
    res.n_phi = spec.n_phi;
    res.trapped = trapped;
    return res;
}

/**
 * Grid refinement: doubles n_x = n_phi from n_start until two successive
 * values differ by less than tol, then returns the finer result with the
 * gap recorded. Throws ConvergenceError when the n cap is hit first.
 */
inline ResistanceResult cavity_resistance_converged(const CavityShape& shape, double tol,
                                                    int n_start,
                                                    const QuadratureSpec& base = {}) {
    if (!(tol > 0.0)) throw std::invalid_argument("cavity_resistance_converged: tol must be > 0");
    if (n_start < 2)
        throw std::invalid_argument("cavity_resistance_converged: n_start must be at least 2");
    if (n_start > kMaxConvergedN)
        throw std::invalid_argument("cavity_resistance_converged: n_start exceeds the n cap");
    QuadratureSpec spec = base;
    spec.n_x = spec.n_phi = n_start;
    ResistanceResult prev = cavity_resistance(shape, spec);
    for (;;) {
        long long next = 2LL * spec.n_x;
        if (next > kMaxConvergedN)
            throw ConvergenceError(
                "cavity_resistance_converged: tolerance not met within the n cap");
        spec.n_x = spec.n_phi = static_cast<int>(next);
        ResistanceResult fine = cavity_resistance(shape, spec);
        double gap = std::abs(fine.value - prev.value);
        if (gap < tol) {
            fine.convergence_gap = gap;
            return fine;
        }
        prev = fine;
    }
}

}  // namespace newtres
