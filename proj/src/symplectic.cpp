#include "hillflow/symplectic.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include <random>
#include <sstream>

namespace hillflow {

int round_to_integer(double x, double tol, const std::string& context) {
    const double nearest = std::round(x);
    const double residual = std::abs(x - nearest);
    if (residual >= tol) {
        std::ostringstream os;
        os << context << ": value " << x << " is not within " << tol
           << " of an integer (residual " << residual << ")";
        throw RegularityError(os.str());
    }
    return static_cast<int>(nearest);
}

Mat SymplecticSpace::J() const {
    Mat j = Mat::Zero(2 * n, 2 * n);
    j.topRightCorner(n, n) = Mat::Identity(n, n);
    j.bottomLeftCorner(n, n) = -Mat::Identity(n, n);
    return j;
}

Complex omega(const Vec& z1, const Vec& z2) {
    if (z1.size() != z2.size() || z1.size() % 2 != 0)
        throw NumericsError("omega: vectors must share an even dimension 2n");
    const auto n = z1.size() / 2;
    // .dot conjugates its left argument, matching the convention.
    return z1.head(n).dot(z2.tail(n)) - z1.tail(n).dot(z2.head(n));
}

double LagrangianFrame::isotropy_residual() const {
    const Mat r = X().adjoint() * Y() - Y().adjoint() * X(); // = F* J F
    return r.norm();
}

double LagrangianFrame::smallest_singular_value() const {
    Eigen::JacobiSVD<Mat> svd(F);
    return svd.singularValues().minCoeff();
}

Mat LagrangianFrame::projector() const {
    const Mat gram = F.adjoint() * F;
    return F * gram.ldlt().solve(F.adjoint());
}

void LagrangianFrame::orthonormalize() {
    Eigen::HouseholderQR<Mat> qr(F);
    F = qr.householderQ() * Mat::Identity(F.rows(), F.cols());
}

void LagrangianFrame::require_valid(const Tolerances& tol) const {
    if (F.rows() != 2 * F.cols())
        throw NumericsError("LagrangianFrame: expected 2n x n frame");
    if (smallest_singular_value() < tol.rank)
        throw NumericsError("LagrangianFrame: frame is rank deficient");
    const double iso = isotropy_residual();
    if (iso > tol.iso * std::max(1.0, F.squaredNorm()))
        throw NumericsError("LagrangianFrame: isotropy residual " + std::to_string(iso));
}

double BoundaryUnitary::unitarity_residual() const {
    return (U.adjoint() * U - Mat::Identity(n(), n())).norm();
}

void BoundaryUnitary::require_valid(const Tolerances& tol) const {
    if (U.rows() != U.cols()) throw NumericsError("BoundaryUnitary: matrix must be square");
    if (unitarity_residual() > tol.uni)
        throw NumericsError("BoundaryUnitary: unitarity residual " +
                            std::to_string(unitarity_residual()));
}

BoundaryUnitary plane_to_unitary(const LagrangianFrame& frame, const Tolerances& tol) {
    frame.require_valid(tol);
    const Mat a = frame.X() - kI * frame.Y();
    const Mat b = frame.X() + kI * frame.Y();
    // U a = b, solved columnwise through the transposed system.
    Eigen::FullPivLU<Mat> lu(a.transpose());
    if (!lu.isInvertible())
        throw NumericsError("plane_to_unitary: X - iY is singular; frame is not Lagrangian");
    Mat u = lu.solve(b.transpose()).transpose();
    BoundaryUnitary result{std::move(u)};
    if (result.unitarity_residual() > tol.uni)
        throw NumericsError("plane_to_unitary: result fails unitarity, residual " +
                            std::to_string(result.unitarity_residual()));
    return result;
}

LagrangianFrame unitary_to_plane(const BoundaryUnitary& unitary, const Tolerances& tol) {
    unitary.require_valid(tol);
    const int n = unitary.n();
    Mat f(2 * n, n);
    f.topRows(n) = Mat::Identity(n, n) + unitary.U;
    f.bottomRows(n) = kI * (Mat::Identity(n, n) - unitary.U);
    LagrangianFrame frame{std::move(f)};
    // The two blocks never vanish simultaneously: F*F = 4I exactly.
    frame.orthonormalize();
    return frame;
}

LagrangianFrame robin_plane(const Mat& theta, const Mat& pi, const Tolerances& tol) {
    if (theta.rows() != theta.cols() || pi.rows() != pi.cols() || theta.rows() != pi.rows())
        throw NumericsError("robin_plane: Theta and Pi must be square of equal size");
    const double scale = std::max(1.0, std::max(theta.norm(), pi.norm()));
    if ((theta - theta.adjoint()).norm() > tol.herm * scale)
        throw NumericsError("robin_plane: Theta is not hermitian");
    if ((pi - pi.adjoint()).norm() > tol.herm * scale)
        throw NumericsError("robin_plane: Pi is not hermitian");
    if ((theta * pi - pi * theta).norm() > tol.herm * scale * scale)
        throw NumericsError("robin_plane: Theta and Pi do not commute");

    const int n = static_cast<int>(theta.rows());
    Mat f(2 * n, n);
    f.topRows(n) = theta;
    f.bottomRows(n) = pi;
    LagrangianFrame frame{std::move(f)};
    if (frame.smallest_singular_value() < tol.rank)
        throw NumericsError("robin_plane: [Theta; Pi] is rank deficient (both blocks singular)");
    return frame;
}

LagrangianFrame dirichlet_plane(int n) {
    Mat f = Mat::Zero(2 * n, n);
    f.bottomRows(n) = Mat::Identity(n, n);
    return LagrangianFrame{std::move(f)};
}

LagrangianFrame neumann_plane(int n) {
    Mat f = Mat::Zero(2 * n, n);
    f.topRows(n) = Mat::Identity(n, n);
    return LagrangianFrame{std::move(f)};
}

namespace {

int rank_route_intersection(const LagrangianFrame& f1, const LagrangianFrame& f2,
                            double eig_tol) {
    LagrangianFrame a = f1, b = f2;
    a.orthonormalize();
    b.orthonormalize();
    Mat stacked(a.F.rows(), a.F.cols() + b.F.cols());
    stacked << a.F, b.F;
    Eigen::JacobiSVD<Mat> svd(stacked);
    const auto& sv = svd.singularValues();
    // A principal angle phi between the planes shows up as a singular value
    // ~ phi / sqrt(2) here and as an eigenvalue phase ~ 2 phi on the unitary
    // route; the cutoffs are matched so both routes resolve the same scale.
    const double cutoff = 0.35 * eig_tol;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;
    return static_cast<int>(2 * a.F.cols()) - rank;
}

int unitary_route_intersection(const LagrangianFrame& f1, const LagrangianFrame& f2,
                               double eig_tol, const Tolerances& tol) {
    const Mat w = plane_to_unitary(f2, tol).U.adjoint() * plane_to_unitary(f1, tol).U;
    Eigen::ComplexEigenSolver<Mat> es(w);
    int count = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (std::abs(es.eigenvalues()(i) - Complex(1.0, 0.0)) <= eig_tol) ++count;
    return count;
}

} // namespace

int intersection_dimension(const LagrangianFrame& f1, const LagrangianFrame& f2,
                           double eig_tol, const Tolerances& tol) {
    if (f1.F.rows() != f2.F.rows())
        throw NumericsError("intersection_dimension: frames live in different spaces");
    const int by_rank = rank_route_intersection(f1, f2, eig_tol);
    const int by_unitary = unitary_route_intersection(f1, f2, eig_tol, tol);
    if (by_rank != by_unitary) {
        std::ostringstream os;
        os << "intersection_dimension: rank route gives " << by_rank
           << " but the unitary route gives " << by_unitary
           << "; frames are ill-conditioned near this configuration";
        throw NumericsError(os.str());
    }
    return by_rank;
}

int intersection_dimension(const LagrangianFrame& f1, const LagrangianFrame& f2) {
    return intersection_dimension(f1, f2, Tolerances{}.inter_eig);
}

Mat intersection_basis(const LagrangianFrame& f1, const LagrangianFrame& f2,
                       double eig_tol, const Tolerances& tol) {
    const int n = f1.n();
    const Mat u1 = plane_to_unitary(f1, tol).U;
    const Mat w = plane_to_unitary(f2, tol).U.adjoint() * u1;
    Eigen::ComplexEigenSolver<Mat> es(w);
    std::vector<int> hits;
    for (int i = 0; i < n; ++i)
        if (std::abs(es.eigenvalues()(i) - Complex(1.0, 0.0)) <= eig_tol) hits.push_back(i);
    Mat carriers(n, hits.size());
    for (size_t k = 0; k < hits.size(); ++k) carriers.col(k) = es.eigenvectors().col(hits[k]);
    // Map through the canonical frame of l1; (I+U; i(I-U))/2 is an isometry,
    // so orthonormal carriers give an orthonormal basis of the intersection.
    Mat basis(2 * n, hits.size());
    basis.topRows(n) = (Mat::Identity(n, n) + u1) * carriers * 0.5;
    basis.bottomRows(n) = kI * (Mat::Identity(n, n) - u1) * carriers * 0.5;
    if (!hits.empty()) {
        Eigen::HouseholderQR<Mat> qr(basis);
        basis = qr.householderQ() * Mat::Identity(basis.rows(), basis.cols());
    }
    return basis;
}

double plane_distance(const LagrangianFrame& f1, const LagrangianFrame& f2) {
    if (f1.smallest_singular_value() < Tolerances{}.rank ||
        f2.smallest_singular_value() < Tolerances{}.rank)
        throw NumericsError("plane_distance: rank-deficient frame");
    const Mat diff = f1.projector() - f2.projector();
    Eigen::JacobiSVD<Mat> svd(diff);
    return svd.singularValues().maxCoeff();
}

bool check_no_lagrangian(int dim_plus, int dim_minus) {
    return dim_plus == dim_minus;
}

Mat random_unitary(int n, unsigned long seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat g(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<Mat> qr(g);
    Mat q = qr.householderQ() * Mat::Identity(n, n);
    Mat r = q.adjoint() * g;
    for (int j = 0; j < n; ++j) {
        const Complex d = r(j, j);
        q.col(j) *= d / std::abs(d);
    }
    return q;
}

LagrangianFrame random_lagrangian(int n, unsigned long seed) {
    return unitary_to_plane(BoundaryUnitary{random_unitary(n, seed)});
}

} // namespace hillflow
