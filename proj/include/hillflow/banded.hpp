// banded.hpp — hermitian banded matrices with spectrum slicing: eigenvalue
// counts by LDL* inertia, window eigenvalues by bisection, eigenvectors by
// shifted inverse iteration. All kernels are O(dim * bandwidth^2).

#pragma once

#include "hillflow/types.hpp"

#include <vector>

namespace hillflow {

class HermitianBanded {
public:
    HermitianBanded(int dim, int bandwidth);

    int dim() const { return dim_; }
    int bandwidth() const { return kd_; }

    /// Assembly access to A(row, col) for row >= col, row - col <= bandwidth.
    Complex& entry(int row, int col);
    Complex entry(int row, int col) const;
    void add(int row, int col, Complex value) { entry(row, col) += value; }

    Mat dense() const;

    /// Number of eigenvalues strictly below sigma (Sylvester inertia of the
    /// shifted LDL* factorization; sigma is jittered off exact pivots).
    int count_below(double sigma) const;

    /// All eigenvalues in [lo, hi], each located to +-tol_abs, multiplicities
    /// expanded, ascending.
    std::vector<double> eigenvalues_in(double lo, double hi, double tol_abs) const;

    /// Eigenvectors for the given (clustered) eigenvalues by inverse
    /// iteration; columns ordered like `lambdas`. Eigenvalues are refined
    /// in-place by Rayleigh quotients.
    Mat eigenvectors(std::vector<double>& lambdas, unsigned long seed = 7) const;

private:
    struct Factorization {
        // Unit lower-triangular band and a real diagonal.
        std::vector<std::vector<Complex>> l;
        std::vector<double> d;
        int negatives = 0;
        bool ok = false;
    };

    Factorization factor_shifted(double sigma) const;
    Vec solve(const Factorization& f, Vec rhs) const;

    int dim_;
    int kd_;
    // band_[k][j] = A(j + k, j), k = 0..kd.
    std::vector<std::vector<Complex>> band_;
};

} // namespace hillflow
