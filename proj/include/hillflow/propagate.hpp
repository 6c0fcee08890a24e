// propagate.hpp — Magnus integration of the first-order system for Hill's
// operators at fixed energy, monodromy matrices, gap classification, and the
// decaying-solution Lagrangian planes l+-(E).

#pragma once

#include "hillflow/potential.hpp"
#include "hillflow/symplectic.hpp"

namespace hillflow {

/// Complex-symplectic propagator of Psi' = [[0, I], [V - E, 0]] Psi over
/// [a, b] at fixed (t, E).
struct TransferMatrix {
    Mat T;
    double a = 0, b = 0;
    double energy = 0;

    double symplecticity_residual() const;
};

enum class GapClass { InGap, EssentialSpectrum, Undecided };

/// Floquet probe of one energy: per-side classification and the worst
/// distance of the multipliers from the unit circle (min |log|lambda||).
struct EnergyProbe {
    double energy = 0;
    GapClass left = GapClass::Undecided;
    GapClass right = GapClass::Undecided;
    double circle_margin = 0;

    bool in_gap() const { return left == GapClass::InGap && right == GapClass::InGap; }
};

struct MagnusOptions {
    int steps_per_period = 64;
    int max_doublings = 6; // refinement attempts when symplecticity fails
};

/// 4th-order Magnus propagator: two-point Gauss quadrature of the coefficient
/// matrix per step, one matrix exponential per step.
TransferMatrix transfer_matrix(const HermitianPotentialFamily& v, double t, double energy,
                               double a, double b, int steps, const Tolerances& tol = {});

enum class Side { Left, Right };

/// Transfer matrix over exactly one asymptotic period on the requested side,
/// with automatic step refinement until the symplecticity bound holds.
TransferMatrix monodromy(const HermitianPotentialFamily& v, double t, double energy, Side side,
                         const MagnusOptions& opts = {}, const Tolerances& tol = {});

/// Gap classification over a t-grid: in-gap iff every sampled monodromy on
/// both sides keeps all multipliers off the unit circle by the guard band.
EnergyProbe classify_energy(const HermitianPotentialFamily& v, double energy,
                            const std::vector<double>& t_grid, const MagnusOptions& opts = {},
                            const Tolerances& tol = {});

/// Largest stable multiplier modulus over the t-grid (both sides); the decay
/// rate that controls edge-domain truncation.
double stable_multiplier_radius(const HermitianPotentialFamily& v, double energy,
                                const std::vector<double>& t_grid,
                                const MagnusOptions& opts = {}, const Tolerances& tol = {});

/// Cauchy-data plane at x = 0 of solutions decaying at +infinity: the stable
/// invariant subspace of the right monodromy, propagated back to the cut.
LagrangianFrame ell_plus(const HermitianPotentialFamily& v, double t, double energy,
                         const MagnusOptions& opts = {}, const Tolerances& tol = {});

/// Mirror construction at -infinity (unstable subspace of the left monodromy).
LagrangianFrame ell_minus(const HermitianPotentialFamily& v, double t, double energy,
                          const MagnusOptions& opts = {}, const Tolerances& tol = {});

/// dim Ker(h_t - E) = dim(l+(E) cap l-(E)).
int bulk_kernel_dimension(const HermitianPotentialFamily& v, double t, double energy,
                          const MagnusOptions& opts = {}, const Tolerances& tol = {});

} // namespace hillflow
