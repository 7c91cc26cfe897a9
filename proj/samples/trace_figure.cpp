// Traces a fan of particles through the optimal Double Parabola and writes
// one SVG figure per trajectory, plus a bare shape figure. Demonstrates the
// cavity constructors, the tracer, and the SVG renderers.

#include <cstdio>
#include <fstream>
#include <numbers>

#include "newtres/newtres.hpp"

using namespace newtres;

int main() {
    CavityShape dp = make_double_parabola(std::numbers::sqrt2, 0.0);

    std::ofstream("double_parabola.svg") << render_shape_svg(dp);
    std::printf("wrote double_parabola.svg\n");

    struct {
        double x;
        double phi_deg;
        const char* file;
    } runs[] = {
        {0.45, 75.0, "traj_steep.svg"},
        {0.30, 40.0, "traj_mid.svg"},
        {0.48, 5.0, "traj_shallow.svg"},
        {-0.20, -10.0, "traj_left.svg"},
    };
    for (const auto& run : runs) {
        double phi = run.phi_deg * std::numbers::pi / 180.0;
        Trajectory t = trace(dp, {run.x, phi});
        std::ofstream(run.file) << render_trajectory_svg(dp, t);
        std::printf("x=%+.2f phi=%+6.1f deg -> %d reflections, exit %+7.2f deg (%s)\n", run.x,
                    run.phi_deg, t.reflections, t.exit_phi * 180.0 / std::numbers::pi,
                    run.file);
    }
    return 0;
}
