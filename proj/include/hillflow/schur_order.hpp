// schur_order.hpp — complex Schur decomposition with eigenvalue reordering,
// used to extract stable/unstable invariant subspaces of monodromy matrices.

#pragma once

#include "hillflow/types.hpp"

#include <functional>

namespace hillflow {

struct OrderedSchur {
    Mat T; // upper triangular
    Mat Q; // unitary, A = Q T Q*
    int selected = 0;

    /// Basis of the invariant subspace belonging to the selected eigenvalues.
    Mat invariant_subspace() const { return Q.leftCols(selected); }
};

/// Schur form of A with all eigenvalues satisfying `select` moved to the
/// leading diagonal block (adjacent swaps by Givens rotations).
OrderedSchur ordered_schur(const Mat& a, const std::function<bool(const Complex&)>& select);

} // namespace hillflow
