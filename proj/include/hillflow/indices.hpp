// indices.hpp — the three topological indices and their cross-validation:
// Maslov index via crossing forms, spectral flow of unitary loops through a
// base point, and winding numbers of determinant traces.

#pragma once

#include "hillflow/loop.hpp"

#include <optional>

namespace hillflow {

/// One crossing of a pair of plane loops: intersection basis, crossing form
/// b(x, y) = omega(x, (P1' - P2') y), its eigenvalues and signature.
struct PlaneCrossing {
    double t_star = 0;
    int dimension = 0;
    Mat basis;                 // 2n x k orthonormal columns
    std::vector<double> form_eigenvalues;
    int signature = 0;
    bool regular = true;
};

struct MaslovResult {
    int value = 0;
    std::vector<PlaneCrossing> crossings;
};

struct IndexReport {
    int value = 0;
    double winding_residual = 0; // pre-rounding distance from the integer
    int by_winding = 0;
    int by_maslov_vs_dirichlet = 0;
    int by_unitary_flow = 0;
};

struct IndexOptions {
    double projector_delta = 1e-5; // central-difference step for P'(t*)
    double locate_tol = 1e-10;     // bisection tolerance on crossing location
    double phase_step_limit = kPi / 4.0; // max eigenphase motion per grid step
    double refine_floor = 1e-10;
};

/// Winding number of a closed loop of nonzero complex scalars from explicit
/// samples; consecutive arguments must differ by less than pi.
int winding_number(const std::vector<Complex>& samples, double* residual = nullptr);

/// Winding number of a callable loop with adaptive sample refinement.
int winding_number(const std::function<Complex(double)>& loop, int initial_samples = 64,
                   double* residual = nullptr, const Tolerances& tol = {});

/// Net count of eigenphases of the unitary loop crossing the base point
/// counter-clockwise; phases are tracked continuously with minimal-total-
/// displacement matching and adaptive sampling.
int unitary_spectral_flow(const UnitaryLoop& loop, Complex base,
                          const IndexOptions& opts = {}, const Tolerances& tol = {});

/// Maslov index of a pair of plane loops: crossings located through the
/// eigenphases of U2* U1, degrees from the quadratic crossing form.
MaslovResult maslov_index(const PlaneLoop& loop1, const PlaneLoop& loop2,
                          const IndexOptions& opts = {}, const Tolerances& tol = {});

/// Eigenvalues of the crossing form at a known crossing, with an explicit
/// central-difference step (used for the Hellman-Feynman cross-check and its
/// Richardson fallback).
std::vector<double> crossing_form_eigenvalues(const PlaneLoop& loop1, const PlaneLoop& loop2,
                                              double t_star, double delta,
                                              const Tolerances& tol = {});

/// The index I(l) = Winding(det U): computed three ways (winding, Maslov
/// against the Dirichlet plane, unitary spectral flow through -1) which must
/// agree. Parked-at-reference degeneracies are resolved by rotating the
/// reference, which leaves the index of a loop unchanged.
IndexReport index_I(const PlaneLoop& loop, const IndexOptions& opts = {},
                    const Tolerances& tol = {});

} // namespace hillflow
