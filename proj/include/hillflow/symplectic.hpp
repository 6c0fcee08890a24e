// symplectic.hpp — finite-dimensional symplectic linear algebra on C^{2n}:
// Lagrangian frames, the plane<->unitary correspondence, and plane geometry.

#pragma once

#include "hillflow/types.hpp"

namespace hillflow {

/// The boundary space C^n x C^n with its canonical symplectic form
/// omega(x, y) = <x_1, y_2> - <x_2, y_1> (first slot conjugated).
struct SymplecticSpace {
    int n = 1;

    explicit SymplecticSpace(int channels) : n(channels) {
        if (n <= 0) throw ConfigError("SymplecticSpace: n must be positive");
    }

    /// The matrix J = [[0, I], [-I, 0]] with omega(x, y) = <x, J y>.
    Mat J() const;
};

/// 2n x n full-rank frame whose columns span an isotropic (hence, at
/// dimension n, Lagrangian) subspace of C^{2n}.
struct LagrangianFrame {
    Mat F; // 2n x n

    int n() const { return static_cast<int>(F.cols()); }
    Mat X() const { return F.topRows(n()); }
    Mat Y() const { return F.bottomRows(n()); }

    double isotropy_residual() const;
    double smallest_singular_value() const;

    /// Orthogonal projector P = F (F*F)^{-1} F*.
    Mat projector() const;

    /// Replace F by an orthonormal frame of the same plane (thin QR).
    void orthonormalize();

    void require_valid(const Tolerances& tol = {}) const;
};

/// n x n unitary encoding a Lagrangian plane (and thus a self-adjoint
/// boundary condition). Dirichlet -> -I, Neumann -> +I.
struct BoundaryUnitary {
    Mat U;

    int n() const { return static_cast<int>(U.rows()); }
    double unitarity_residual() const;
    void require_valid(const Tolerances& tol = {}) const;
};

/// Canonical symplectic form on C^{2n}; conjugate-linear in the first slot.
Complex omega(const Vec& z1, const Vec& z2);

/// U = (X + iY)(X - iY)^{-1}. Frame-invariant: any two frames of one plane
/// give the same unitary.
BoundaryUnitary plane_to_unitary(const LagrangianFrame& frame, const Tolerances& tol = {});

/// Frame X = I + U, Y = i(I - U), orthonormalized. Round trip with
/// plane_to_unitary is the identity up to tol.uni.
LagrangianFrame unitary_to_plane(const BoundaryUnitary& unitary, const Tolerances& tol = {});

/// Plane {(Theta x, Pi x)} for commuting hermitian Theta, Pi with at least
/// one of them invertible.
LagrangianFrame robin_plane(const Mat& theta, const Mat& pi, const Tolerances& tol = {});

LagrangianFrame dirichlet_plane(int n);
LagrangianFrame neumann_plane(int n);

/// dim(l1 cap l2), computed two ways that must agree: rank of the stacked
/// frame and the eigenvalue count of U2* U1 near 1.
int intersection_dimension(const LagrangianFrame& f1, const LagrangianFrame& f2,
                           double eig_tol, const Tolerances& tol = {});
int intersection_dimension(const LagrangianFrame& f1, const LagrangianFrame& f2);

/// Orthonormal basis of l1 cap l2 (k columns), mapped from the eigenvectors
/// of U2* U1 with eigenvalue within eig_tol of 1.
Mat intersection_basis(const LagrangianFrame& f1, const LagrangianFrame& f2,
                       double eig_tol, const Tolerances& tol = {});

/// dist(l1, l2) = ||P1 - P2|| (operator norm of the projector difference).
double plane_distance(const LagrangianFrame& f1, const LagrangianFrame& f2);

/// Lagrangian planes exist iff dim Ker(J - i) == dim Ker(J + i). The Dirac
/// half-line form i<z1, z2> has dims (n, 0) and admits none.
bool check_no_lagrangian(int dim_plus, int dim_minus);

/// Haar-ish random unitary (QR of a Ginibre matrix with phase fix); used by
/// tests and the random-plane generator.
Mat random_unitary(int n, unsigned long seed);

/// Random Lagrangian plane via the unitary correspondence.
LagrangianFrame random_lagrangian(int n, unsigned long seed);

} // namespace hillflow
