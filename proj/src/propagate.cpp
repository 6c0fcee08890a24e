#include "hillflow/propagate.hpp"

#include "hillflow/schur_order.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>

namespace hillflow {

namespace {

Mat system_matrix(const HermitianPotentialFamily& v, double t, double energy, double x) {
    const int n = v.n;
    Mat a = Mat::Zero(2 * n, 2 * n);
    a.topRightCorner(n, n) = Mat::Identity(n, n);
    a.bottomLeftCorner(n, n) = v.at(t, x) - energy * Mat::Identity(n, n);
    return a;
}

} // namespace

double TransferMatrix::symplecticity_residual() const {
    const auto n = T.rows() / 2;
    const Mat j = SymplecticSpace(static_cast<int>(n)).J();
    return (T.adjoint() * j * T - j).norm();
}

TransferMatrix transfer_matrix(const HermitianPotentialFamily& v, double t, double energy,
                               double a, double b, int steps, const Tolerances& tol) {
    if (!(a < b)) throw NumericsError("transfer_matrix: need a < b");
    if (steps < 1) throw NumericsError("transfer_matrix: need steps >= 1");

    const double h = (b - a) / steps;
    const double gauss_offset = std::sqrt(3.0) / 6.0; // Gauss points 1/2 -+ sqrt(3)/6
    const int n2 = 2 * v.n;

    Mat total = Mat::Identity(n2, n2);
    for (int k = 0; k < steps; ++k) {
        const double x0 = a + k * h;
        const Mat a1 = system_matrix(v, t, energy, x0 + (0.5 - gauss_offset) * h);
        const Mat a2 = system_matrix(v, t, energy, x0 + (0.5 + gauss_offset) * h);
        Mat exponent = 0.5 * h * (a1 + a2) -
                       (std::sqrt(3.0) / 12.0) * h * h * (a1 * a2 - a2 * a1);
        total = exponent.exp() * total;
    }

    TransferMatrix result{std::move(total), a, b, energy};
    if (result.symplecticity_residual() > tol.symp * std::max(1.0, result.T.norm()))
        throw NumericsError("transfer_matrix: symplecticity residual exceeded; refine steps");
    return result;
}

TransferMatrix monodromy(const HermitianPotentialFamily& v, double t, double energy, Side side,
                         const MagnusOptions& opts, const Tolerances& tol) {
    const double period = (side == Side::Right) ? v.right_period : v.left_period;
    const double a = (side == Side::Right) ? v.x_match : -v.x_match - period;
    const double b = a + period;
    int steps = opts.steps_per_period;
    for (int attempt = 0;; ++attempt) {
        try {
            return transfer_matrix(v, t, energy, a, b, steps, tol);
        } catch (const NumericsError&) {
            if (attempt >= opts.max_doublings) throw;
            steps *= 2;
        }
    }
}

namespace {

double circle_margin_of(const Mat& monodromy_matrix) {
    Eigen::ComplexEigenSolver<Mat> es(monodromy_matrix, /*computeEigenvectors=*/false);
    double margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        margin = std::min(margin, std::abs(std::log(std::abs(es.eigenvalues()(i)))));
    return margin;
}

GapClass classify_margin(double margin, const Tolerances& tol) {
    if (margin < tol.circle) return GapClass::EssentialSpectrum;
    if (margin < tol.circle * tol.circle_guard) return GapClass::Undecided;
    return GapClass::InGap;
}

} // namespace

EnergyProbe classify_energy(const HermitianPotentialFamily& v, double energy,
                            const std::vector<double>& t_grid, const MagnusOptions& opts,
                            const Tolerances& tol) {
    if (t_grid.empty()) throw ConfigError("classify_energy: t_grid must be nonempty");
    EnergyProbe probe;
    probe.energy = energy;
    probe.circle_margin = std::numeric_limits<double>::infinity();
    double left_margin = probe.circle_margin, right_margin = probe.circle_margin;
    for (double t : t_grid) {
        left_margin = std::min(left_margin,
                               circle_margin_of(monodromy(v, t, energy, Side::Left, opts, tol).T));
        right_margin = std::min(right_margin,
                                circle_margin_of(monodromy(v, t, energy, Side::Right, opts, tol).T));
    }
    probe.left = classify_margin(left_margin, tol);
    probe.right = classify_margin(right_margin, tol);
    probe.circle_margin = std::min(left_margin, right_margin);
    return probe;
}

double stable_multiplier_radius(const HermitianPotentialFamily& v, double energy,
                                const std::vector<double>& t_grid, const MagnusOptions& opts,
                                const Tolerances& tol) {
    double radius = 0.0;
    for (double t : t_grid) {
        for (Side side : {Side::Left, Side::Right}) {
            const Mat m = monodromy(v, t, energy, side, opts, tol).T;
            Eigen::ComplexEigenSolver<Mat> es(m, false);
            for (int i = 0; i < es.eigenvalues().size(); ++i) {
                const double mod = std::abs(es.eigenvalues()(i));
                if (mod < 1.0) radius = std::max(radius, mod);
            }
        }
    }
    return radius;
}

namespace {

LagrangianFrame decaying_plane(const HermitianPotentialFamily& v, double t, double energy,
                               Side side, const MagnusOptions& opts, const Tolerances& tol) {
    const int n = v.n;
    const TransferMatrix m = monodromy(v, t, energy, side, opts, tol);

    const bool stable = (side == Side::Right);
    auto select = [stable](const Complex& lambda) {
        const double mod = std::abs(lambda);
        return stable ? (mod < 1.0) : (mod > 1.0);
    };
    const OrderedSchur schur = ordered_schur(m.T, select);
    if (schur.selected != n)
        throw NumericsError("ell: invariant subspace has dimension " +
                            std::to_string(schur.selected) + " != n; energy misclassified");

    Mat frame_at_match = schur.invariant_subspace();

    // Bring the Cauchy data from the matching point to the cut at x = 0.
    if (v.x_match > 0) {
        if (side == Side::Right) {
            const TransferMatrix into = transfer_matrix(
                v, t, energy, 0.0, v.x_match,
                std::max(1, static_cast<int>(std::ceil(opts.steps_per_period * v.x_match /
                                                       v.right_period))),
                tol);
            frame_at_match = into.T.partialPivLu().solve(frame_at_match);
        } else {
            const TransferMatrix into = transfer_matrix(
                v, t, energy, -v.x_match, 0.0,
                std::max(1, static_cast<int>(std::ceil(opts.steps_per_period * v.x_match /
                                                       v.left_period))),
                tol);
            frame_at_match = into.T * frame_at_match;
        }
    }

    LagrangianFrame frame{std::move(frame_at_match)};
    frame.orthonormalize();
    frame.require_valid(tol);
    return frame;
}

} // namespace

LagrangianFrame ell_plus(const HermitianPotentialFamily& v, double t, double energy,
                         const MagnusOptions& opts, const Tolerances& tol) {
    return decaying_plane(v, t, energy, Side::Right, opts, tol);
}

LagrangianFrame ell_minus(const HermitianPotentialFamily& v, double t, double energy,
                          const MagnusOptions& opts, const Tolerances& tol) {
    return decaying_plane(v, t, energy, Side::Left, opts, tol);
}

int bulk_kernel_dimension(const HermitianPotentialFamily& v, double t, double energy,
                          const MagnusOptions& opts, const Tolerances& tol) {
    const LagrangianFrame plus = ell_plus(v, t, energy, opts, tol);
    const LagrangianFrame minus = ell_minus(v, t, energy, opts, tol);
    return intersection_dimension(plus, minus, tol.inter_eig, tol);
}

} // namespace hillflow
