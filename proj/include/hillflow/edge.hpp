// edge.hpp — finite-difference edge operators h# on a truncated half-line
// with arbitrary Lagrangian boundary condition at 0, junction operators h^chi
// on a truncated line, eigenvalue-branch tracking over t, and spectral flow.

#pragma once

#include "hillflow/banded.hpp"
#include "hillflow/potential.hpp"
#include "hillflow/propagate.hpp"
#include "hillflow/symplectic.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace hillflow {

/// Switch function for junction operators: 1 on the far left, 0 on the far
/// right, with exact plateaus beyond +-plateau_x.
struct SwitchFunction {
    std::string name;
    std::function<double(double)> chi;
    double plateau_x = 1.0;
};

SwitchFunction step_switch(double plateau_x = 0.5);
SwitchFunction smoothstep_switch(double plateau_x);

/// Assembled hermitian eigenproblem for an edge or junction operator.
struct EdgeDiscretization {
    HermitianBanded matrix;
    int channels = 1;
    double spacing = 0;
    double x_left = 0;   // domain [x_left, x_right], Dirichlet at outer walls
    double x_right = 0;
    int node0_kept = 0;  // non-Dirichlet channels kept at the boundary node
    std::vector<double> node_positions; // x per block row
    double keep_lo = 0, keep_hi = 0;    // localization region

    /// Mass fraction of an eigenvector inside the localization region.
    double localization_fraction(const Vec& v) const;
};

/// Edge operator on [0, L] with the boundary plane imposed at x = 0 through
/// the annihilator constraint -Y* psi(0) + X* psi'(0) = 0 (realized per
/// eigenchannel of the boundary unitary) and Dirichlet at x = L.
EdgeDiscretization discretize_edge(const HermitianPotentialFamily& v, double t,
                                   const LagrangianFrame& boundary, double length, int nodes,
                                   const Tolerances& tol = {});

/// Junction operator h^chi on [-L, L] with Dirichlet at both walls.
EdgeDiscretization discretize_junction(const HermitianPotentialFamily& v_left,
                                       const HermitianPotentialFamily& v_right,
                                       const SwitchFunction& chi, double t, double length,
                                       int nodes, const Tolerances& tol = {});

struct CrossingRecord {
    double t_star = 0;
    int multiplicity = 0;
    std::vector<double> slopes; // lambda_j'(t*)
    double localization = 0;
    bool localized = false;
    bool regular = false;
};

/// Matched eigenvalue-branch curves inside a window around E, with the
/// detected crossings of E.
struct BranchSet {
    double energy = 0;
    double window = 0;
    std::vector<double> t_samples;
    // branch id -> (sample index -> value); NaN where the branch is outside
    // the window.
    std::vector<std::vector<double>> branch_values;
    std::vector<CrossingRecord> crossings;
    bool regular = true;
    std::string verdict;
};

struct TrackOptions {
    double refine_floor = 1e-5;   // minimal t spacing during refinement
    double slope_delta = 1e-5;    // central-difference step for slopes
    double locate_tol = 1e-9;     // bisection tolerance on t*
    unsigned long seed = 7;
};

/// Track all eigenvalue branches of a t-family of discretizations inside
/// [E - w, E + w]; nearest-neighbor matching with an assignment fallback and
/// adaptive t-refinement; crossings located by bisection.
BranchSet track_branches(const std::function<EdgeDiscretization(double)>& family, double energy,
                         double window, std::vector<double> t_grid,
                         const TrackOptions& opts = {}, const Tolerances& tol = {});

struct FlowReport {
    int flow = 0;
    std::vector<CrossingRecord> crossings;
    bool regular = true;
    std::string provenance;
};

/// Net number of (localized) eigenvalues crossing E downwards: downward
/// crossings count +1, upward -1. Refuses non-regular branch sets.
FlowReport spectral_flow(const BranchSet& branches, double energy, const Tolerances& tol = {});

/// Domain length heuristic: max(10 periods, 20 / |log rho|), rho the largest
/// stable multiplier modulus, capped at max_periods periods.
double default_edge_length(const HermitianPotentialFamily& v, double energy,
                           const std::vector<double>& t_grid, double max_periods = 200,
                           const MagnusOptions& opts = {}, const Tolerances& tol = {});

} // namespace hillflow
