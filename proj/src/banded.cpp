#include "hillflow/banded.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>

namespace hillflow {

HermitianBanded::HermitianBanded(int dim, int bandwidth) : dim_(dim), kd_(bandwidth) {
    if (dim <= 0 || bandwidth < 0 || bandwidth >= dim)
        throw NumericsError("HermitianBanded: invalid dimensions");
    band_.assign(kd_ + 1, std::vector<Complex>(dim_, Complex(0, 0)));
}

Complex& HermitianBanded::entry(int row, int col) {
    const int k = row - col;
    if (k < 0 || k > kd_ || col < 0 || row >= dim_)
        throw NumericsError("HermitianBanded: entry outside band");
    return band_[k][col];
}

Complex HermitianBanded::entry(int row, int col) const {
    const int k = row - col;
    if (k < 0 || k > kd_ || col < 0 || row >= dim_)
        throw NumericsError("HermitianBanded: entry outside band");
    return band_[k][col];
}

Mat HermitianBanded::dense() const {
    Mat a = Mat::Zero(dim_, dim_);
    for (int j = 0; j < dim_; ++j)
        for (int k = 0; k <= kd_ && j + k < dim_; ++k) {
            a(j + k, j) = band_[k][j];
            a(j, j + k) = std::conj(band_[k][j]);
        }
    return a;
}

HermitianBanded::Factorization HermitianBanded::factor_shifted(double sigma) const {
    Factorization f;
    f.l.assign(kd_, std::vector<Complex>(dim_, Complex(0, 0)));
    f.d.assign(dim_, 0.0);

    double scale = 0.0;
    for (int j = 0; j < dim_; ++j) scale = std::max(scale, std::abs(band_[0][j]));
    const double pivot_floor = 1e-14 * std::max(1.0, scale + std::abs(sigma));

    for (int j = 0; j < dim_; ++j) {
        double d = std::real(band_[0][j]) - sigma;
        const int mlo = std::max(0, j - kd_);
        for (int m = mlo; m < j; ++m) {
            const Complex ljm = f.l[j - m - 1][m];
            d -= std::norm(ljm) * f.d[m];
        }
        if (std::abs(d) < pivot_floor) {
            f.ok = false;
            return f;
        }
        f.d[j] = d;
        if (d < 0) ++f.negatives;

        for (int i = j + 1; i <= std::min(dim_ - 1, j + kd_); ++i) {
            Complex v = (i - j <= kd_) ? band_[i - j][j] : Complex(0, 0);
            const int lo = std::max(0, i - kd_);
            for (int m = std::max(lo, mlo); m < j; ++m)
                v -= f.l[i - m - 1][m] * std::conj(f.l[j - m - 1][m]) * f.d[m];
            f.l[i - j - 1][j] = v / d;
        }
    }
    f.ok = true;
    return f;
}

Vec HermitianBanded::solve(const Factorization& f, Vec rhs) const {
    // Forward: L z = rhs.
    for (int j = 0; j < dim_; ++j) {
        const Complex zj = rhs(j);
        for (int i = j + 1; i <= std::min(dim_ - 1, j + kd_); ++i)
            rhs(i) -= f.l[i - j - 1][j] * zj;
    }
    // Diagonal.
    for (int j = 0; j < dim_; ++j) rhs(j) /= f.d[j];
    // Backward: L* x = z.
    for (int j = dim_ - 1; j >= 0; --j) {
        Complex acc = rhs(j);
        for (int i = j + 1; i <= std::min(dim_ - 1, j + kd_); ++i)
            acc -= std::conj(f.l[i - j - 1][j]) * rhs(i);
        rhs(j) = acc;
    }
    return rhs;
}

int HermitianBanded::count_below(double sigma) const {
    double jitter = 0.0;
    double scale = std::max(1.0, std::abs(sigma));
    for (int attempt = 0; attempt < 8; ++attempt) {
        const Factorization f = factor_shifted(sigma + jitter);
        if (f.ok) return f.negatives;
        jitter = (jitter == 0.0) ? 1e-12 * scale : jitter * 16.0;
    }
    throw NumericsError("HermitianBanded: inertia count failed near sigma = " +
                        std::to_string(sigma));
}

std::vector<double> HermitianBanded::eigenvalues_in(double lo, double hi, double tol_abs) const {
    if (!(lo < hi) || tol_abs <= 0)
        throw NumericsError("eigenvalues_in: invalid window or tolerance");

    struct Interval {
        double a, b;
        int ca, cb;
    };
    std::deque<Interval> queue;
    queue.push_back({lo, hi, count_below(lo), count_below(hi)});

    std::vector<double> found;
    while (!queue.empty()) {
        Interval iv = queue.front();
        queue.pop_front();
        const int count = iv.cb - iv.ca;
        if (count <= 0) continue;
        if (iv.b - iv.a <= tol_abs) {
            const double mid = 0.5 * (iv.a + iv.b);
            for (int m = 0; m < count; ++m) found.push_back(mid);
            continue;
        }
        const double mid = 0.5 * (iv.a + iv.b);
        const int cm = count_below(mid);
        queue.push_back({iv.a, mid, iv.ca, cm});
        queue.push_back({mid, iv.b, cm, iv.cb});
    }
    std::sort(found.begin(), found.end());
    return found;
}

Mat HermitianBanded::eigenvectors(std::vector<double>& lambdas, unsigned long seed) const {
    const int m = static_cast<int>(lambdas.size());
    Mat vectors = Mat::Zero(dim_, m);
    if (m == 0) return vectors;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);

    // Group eigenvalues into clusters so inverse iteration can orthogonalize
    // within near-degenerate sets.
    double spread = 0.0;
    for (int j = 0; j < dim_; ++j) spread = std::max(spread, std::abs(band_[0][j]));
    const double cluster_tol = std::max(1e-10, 1e-9 * std::max(1.0, spread));

    int start = 0;
    while (start < m) {
        int end = start + 1;
        while (end < m && lambdas[end] - lambdas[end - 1] < cluster_tol) ++end;
        const int k = end - start;
        const double shift = lambdas[start + (k - 1) / 2];

        Factorization f = factor_shifted(shift);
        double jitter = 1e-11 * std::max(1.0, std::abs(shift));
        while (!f.ok) {
            f = factor_shifted(shift + jitter);
            jitter *= 16.0;
        }

        Mat block(dim_, k);
        for (int c = 0; c < k; ++c)
            for (int i = 0; i < dim_; ++i) block(i, c) = Complex(gauss(rng), gauss(rng));

        for (int iter = 0; iter < 4; ++iter) {
            for (int c = 0; c < k; ++c) block.col(c) = solve(f, block.col(c));
            // Modified Gram-Schmidt keeps the cluster basis orthonormal.
            for (int c = 0; c < k; ++c) {
                for (int p = 0; p < c; ++p)
                    block.col(c) -= block.col(p).dot(block.col(c)) * block.col(p);
                block.col(c).normalize();
            }
        }

        // Rayleigh-Ritz inside the cluster subspace separates the members.
        Mat a_block(dim_, k);
        for (int c = 0; c < k; ++c) {
            Vec av = Vec::Zero(dim_);
            for (int j = 0; j < dim_; ++j) {
                av(j) += band_[0][j] * block(j, c);
                for (int kk = 1; kk <= kd_ && j + kk < dim_; ++kk) {
                    av(j + kk) += band_[kk][j] * block(j, c);
                    av(j) += std::conj(band_[kk][j]) * block(j + kk, c);
                }
            }
            a_block.col(c) = av;
        }
        const Mat small = block.adjoint() * a_block;
        Eigen::SelfAdjointEigenSolver<Mat> ritz(0.5 * (small + small.adjoint()));
        const Mat rotated = block * ritz.eigenvectors();
        for (int c = 0; c < k; ++c) {
            vectors.col(start + c) = rotated.col(c);
            lambdas[start + c] = ritz.eigenvalues()(c);
        }
        start = end;
    }
    return vectors;
}

} // namespace hillflow
