// verify.hpp — executable forms of the bulk-edge equality chains: edge
// spectral flow vs Maslov index vs winding-number difference, plus the
// kernel-dimension and crossing-form cross-checks at every detected crossing.

#pragma once

#include "hillflow/edge.hpp"
#include "hillflow/indices.hpp"

namespace hillflow {

struct VerifyConfig {
    int t_samples = 64;
    double window = 0.5;
    double length = 0.0;        // 0 -> default_edge_length
    int grid_per_period = 64;   // spatial resolution of the discretization
    double max_periods = 200.0;
    MagnusOptions magnus;
    TrackOptions track;
    IndexOptions index;
    Tolerances tol;

    std::vector<double> t_grid() const;
};

/// Per-crossing consistency data: the kernel dimension of the discretized
/// operator against the plane intersection, and the crossing-form eigenvalues
/// against the negated branch slopes (Hellman-Feynman).
struct CrossingCheck {
    double t_star = 0;
    int edge_multiplicity = 0;
    int plane_intersection = 0;
    bool kernel_ok = false;
    std::vector<double> form_eigenvalues;
    std::vector<double> neg_slopes;
    double worst_relative_error = 0;
    bool hellman_feynman_ok = false;
};

struct MainTheoremReport {
    EnergyProbe probe;
    FlowReport flow;
    MaslovResult maslov;
    IndexReport index_plus;
    IndexReport index_boundary;
    std::vector<CrossingCheck> checks;
    double length = 0;
    int nodes = 0;
    bool consistent = false;

    int spectral_flow_value() const { return flow.flow; }
    int index_difference() const { return index_plus.value - index_boundary.value; }
};

/// Theorem chain for one family and one boundary loop:
/// Sf(h#, E) = Mas(l+(E), l#) = I(l+(E)) - I(l#).
MainTheoremReport verify_main_theorem(const HermitianPotentialFamily& v,
                                      const PlaneLoop& boundary_loop, double energy,
                                      const VerifyConfig& config = {});

struct JunctionFlowEntry {
    std::string switch_name;
    FlowReport flow;
};

struct JunctionTheoremReport {
    EnergyProbe probe_left, probe_right;
    std::vector<JunctionFlowEntry> flows;
    MaslovResult maslov; // Mas(l+_R(E), l-_L(E))
    IndexReport index_right_plus;
    IndexReport index_left_minus;
    std::vector<CrossingCheck> checks;
    double length = 0;
    int nodes = 0;
    bool switch_independent = false;
    bool consistent = false;

    int index_difference() const { return index_right_plus.value - index_left_minus.value; }
};

/// Junction chain: Sf(h^chi, E) = Mas(l+_R(E), l-_L(E)) = I(l+_R) - I(l-_L),
/// identically for every switch in the set.
JunctionTheoremReport verify_junction_theorem(const HermitianPotentialFamily& v_left,
                                              const HermitianPotentialFamily& v_right,
                                              const std::vector<SwitchFunction>& switches,
                                              double energy, const VerifyConfig& config = {});

/// l+(E) loop of a family (memoized).
PlaneLoop ell_plus_loop(const HermitianPotentialFamily& v, double energy,
                        const VerifyConfig& config = {});
PlaneLoop ell_minus_loop(const HermitianPotentialFamily& v, double energy,
                         const VerifyConfig& config = {});

} // namespace hillflow
