// loop.hpp — periodic families of Lagrangian planes and unitaries over the
// torus parameter t, with adaptive working grids.

#pragma once

#include "hillflow/symplectic.hpp"

#include <functional>
#include <vector>

namespace hillflow {

/// Periodic map t -> Lagrangian plane, t wrapped into [0, 1). The grid is the
/// adaptive sample set; the callable is the ground truth between samples.
struct PlaneLoop {
    std::function<LagrangianFrame(double)> at_raw;
    std::vector<double> grid;

    LagrangianFrame at(double t) const { return at_raw(wrap_unit(t)); }

    static PlaneLoop constant(const LagrangianFrame& frame, int samples = 8);
    static PlaneLoop of(std::function<LagrangianFrame(double)> fn, int samples = 64);

    /// Robin loop [sin(pi t); cos(pi t)] channel-replicated to dimension n.
    static PlaneLoop robin(int n = 1, int samples = 64);

    /// Refine the grid until consecutive samples satisfy
    /// plane_distance < 0.2; throws if the floor spacing is reached first.
    void refine(const Tolerances& tol = {}, double floor = 1e-6);
};

/// Periodic map t -> unitary matrix.
struct UnitaryLoop {
    std::function<Mat(double)> at_raw;
    std::vector<double> grid;

    Mat at(double t) const { return at_raw(wrap_unit(t)); }

    static UnitaryLoop of(std::function<Mat(double)> fn, int samples = 64);

    /// Piecewise-geodesic interpolation through equispaced samples on [0, 1)
    /// (closing back to the first sample).
    static UnitaryLoop from_samples(const std::vector<Mat>& samples);
};

/// Boundary-unitary loop of a plane loop.
UnitaryLoop unitary_loop_of(const PlaneLoop& planes, const Tolerances& tol = {});

/// Memoize a frame family on exact t values (loops get re-evaluated heavily
/// during crossing refinement; every evaluation may hide a Floquet solve).
std::function<LagrangianFrame(double)> memoized(std::function<LagrangianFrame(double)> fn);

} // namespace hillflow
