// potential.hpp — t-periodic families of matrix-valued potentials V(t, x),
// eventually periodic in x on each side, plus the built-in family library.

#pragma once

#include "hillflow/types.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hillflow {

/// V(t, x): T^1 x R -> hermitian n x n matrices. The t-dependence must be
/// piecewise C^1; x-dependence is exactly periodic beyond +-x_match.
struct HermitianPotentialFamily {
    int n = 1;
    std::function<Mat(double t, double x)> evaluate;
    double left_period = 1.0;
    double right_period = 1.0;
    double x_match = 0.0;
    std::string label;

    Mat at(double t, double x) const { return evaluate(wrap_unit(t), x); }

    /// Sampled sanity checks: hermiticity, t-periodicity, and eventual
    /// x-periodicity at the declared periods.
    void validate(const Tolerances& tol = {}, int samples = 7) const;
};

// Built-in families. Every experiment in the acceptance suite is expressible
// with these; `shift_rate` must be an integer for t-periodicity.

/// Constant potential level * I (period 1 by convention).
HermitianPotentialFamily flat_potential(int n, double level);

/// Scalar Mathieu channel 2 cos(2 pi x), t-independent.
HermitianPotentialFamily mathieu_potential();

/// Dislocation family base(x - shift_rate * t) of a given family's x-profile
/// at t = 0. `base` must be t-independent.
HermitianPotentialFamily dislocation_potential(const HermitianPotentialFamily& base,
                                               int shift_rate);

/// Scalar square well -depth on |x| <= half_width, zero outside.
HermitianPotentialFamily square_well_potential(double depth, double half_width);

/// Diagonal n-channel potential from scalar channel families.
HermitianPotentialFamily diagonal_potential(const std::vector<HermitianPotentialFamily>& channels);

/// Tabulated scalar profile on one x-period (equispaced samples, periodic
/// linear interpolation, t-independent).
HermitianPotentialFamily tabulated_potential(const std::vector<double>& samples, double period);

} // namespace hillflow
