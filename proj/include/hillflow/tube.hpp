// tube.hpp — reduction of tube Schrödinger operators -Laplacian + V on
// R x T^{d-1} to n-channel Hill operators by transverse Fourier truncation.

#pragma once

#include "hillflow/verify.hpp"

namespace hillflow {

/// Real scalar potential on the tube, t-periodic, eventually x-periodic on
/// each side; y lives on the unit torus [0,1)^{d-1}.
struct TubePotentialFamily {
    int d = 2;
    std::function<double(double t, double x, const std::vector<double>& y)> evaluate;
    double left_period = 1.0;
    double right_period = 1.0;
    double x_match = 0.0;
    std::string label;
};

/// Truncated channel system: modes |k|_inf <= K, channel potential
/// Vhat_{k-k'}(t, x) + delta_{kk'} (2 pi |k|)^2.
struct ChannelReduction {
    int truncation = 0;                   // K
    std::vector<std::vector<int>> modes;  // mode multi-indices, row-major
    std::vector<double> transverse_eigenvalues;
    HermitianPotentialFamily channels;
};

/// Galerkin projection onto the transverse Fourier modes (trapezoidal
/// quadrature at 4(2K+1) points per axis). Fails when the coefficient tail
/// beyond the resolved band is not negligible.
ChannelReduction fourier_truncate(const TubePotentialFamily& v, int truncation,
                                  const Tolerances& tol = {});

/// Built-in d=2 experiment potential 2 cos(2 pi (x - t)) + cos(2 pi y).
TubePotentialFamily tube_cosine_potential();
/// Flat tube at a constant level (d = 2).
TubePotentialFamily tube_flat_potential(double level);
/// t-frozen copy of a tube family.
TubePotentialFamily tube_frozen(const TubePotentialFamily& family);

struct TubeJunctionReport {
    std::vector<int> truncations;
    std::vector<JunctionTheoremReport> reports;
    bool truncation_stable = false;
    bool consistent = false;
};

/// Full junction verification on the truncated channels at K and K+1; the
/// emitted integers must be identical across the two truncations.
TubeJunctionReport tube_junction_flow(const TubePotentialFamily& v_left,
                                      const TubePotentialFamily& v_right,
                                      const std::vector<SwitchFunction>& switches, double energy,
                                      int truncation, const VerifyConfig& config = {});

} // namespace hillflow
