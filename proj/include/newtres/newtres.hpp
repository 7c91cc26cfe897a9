#pragma once
/**
 * @file newtres.hpp
 * @brief Umbrella header: the whole library in one include.
 *
 * Modules, in dependency order:
 *   - errors.hpp      error taxonomy (validation vs computation failures)
 *   - geometry.hpp    vectors, arcs, reflection, ray-arc intersection
 *   - cavity.hpp      normalized cavity shapes and their constructors
 *   - billiard.hpp    exact trajectory tracing and reflection statistics
 *   - resistance.hpp  quadrature of the resistance functional
 *   - svg.hpp         shape and trajectory figures
 *   - body.hpp        full rotating body composed of boundary cavities
 *   - optimize.hpp    derivative-free maximization and parameter sweeps
 *   - serialize.hpp   JSON views of shapes and reports
 */

#include "newtres/errors.hpp"
#include "newtres/geometry.hpp"
#include "newtres/cavity.hpp"
#include "newtres/billiard.hpp"
#include "newtres/resistance.hpp"
#include "newtres/svg.hpp"
#include "newtres/body.hpp"
#include "newtres/optimize.hpp"
#include "newtres/serialize.hpp"
