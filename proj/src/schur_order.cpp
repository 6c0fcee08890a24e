#include "hillflow/schur_order.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Jacobi>

namespace hillflow {

namespace {

// Swap the diagonal entries at positions (k, k+1) of the triangular factor by
// a Givens rotation built from the eigenvector of T(k+1, k+1) inside the
// 2 x 2 block; same construction as LAPACK's ztrexc.
void swap_adjacent(Mat& t, Mat& q, int k) {
    const Complex l1 = t(k, k);
    const Complex l2 = t(k + 1, k + 1);
    const Complex coupling = t(k, k + 1);

    Eigen::JacobiRotation<Complex> rot;
    rot.makeGivens(coupling, l2 - l1);
    t.applyOnTheLeft(k, k + 1, rot.adjoint());
    t.applyOnTheRight(k, k + 1, rot);
    q.applyOnTheRight(k, k + 1, rot);
    // Clean the subdiagonal entry introduced by roundoff.
    t(k + 1, k) = Complex(0, 0);
    t(k, k) = l2;
    t(k + 1, k + 1) = l1;
}

} // namespace

OrderedSchur ordered_schur(const Mat& a, const std::function<bool(const Complex&)>& select) {
    Eigen::ComplexSchur<Mat> schur(a, /*computeU=*/true);
    if (schur.info() != Eigen::Success)
        throw NumericsError("ordered_schur: Schur iteration failed to converge");

    OrderedSchur result{schur.matrixT(), schur.matrixU(), 0};
    const int n = static_cast<int>(a.rows());

    // Selection sort over diagonal positions: pull each selected eigenvalue to
    // the front by adjacent swaps.
    int front = 0;
    for (int i = 0; i < n; ++i) {
        if (!select(result.T(i, i))) continue;
        for (int k = i; k > front; --k) swap_adjacent(result.T, result.Q, k - 1);
        ++front;
    }
    result.selected = front;
    return result;
}

} // namespace hillflow
