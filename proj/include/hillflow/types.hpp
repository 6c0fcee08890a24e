// types.hpp — shared scalar/matrix aliases, tolerance bundle, error types.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace hillflow {

using Complex = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;
using RealMat = Eigen::MatrixXd;

inline constexpr Complex kI{0.0, 1.0};
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// Numerical tolerances used across the library. All overridable from the
/// experiment configuration; defaults chosen for double precision.
struct Tolerances {
    double iso = 1e-8;          // isotropy residual ||F* J F||
    double uni = 1e-8;          // unitarity residual ||U* U - I||
    double rank = 1e-10;        // smallest singular value for full rank
    double inter_eig = 1e-6;    // |mu - 1| window counting intersection eigenvalues
    double symp = 1e-8;         // transfer-matrix symplecticity ||T* J T - J||
    double herm = 1e-8;         // hermiticity residual
    double circle = 1e-6;       // Floquet circle margin min |log|lambda||
    double circle_guard = 10.0; // guard band multiplier on `circle`
    double loop = 1e-6;         // loop periodicity residual (plane distance)
    double slope_floor = 1e-6;  // regularity floor for crossing slopes / form eigenvalues
    double int_residual = 0.1;  // max pre-rounding distance of an index from an integer
    double dirichlet_angle = 1e-7; // |cos(angle)| below which a boundary channel is Dirichlet
};

// Error taxonomy; the CLI maps these onto its exit-code contract.

/// Invalid or out-of-range configuration input.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// A crossing/energy failed a regularity requirement; no integer is emitted.
struct RegularityError : std::runtime_error {
    explicit RegularityError(const std::string& what) : std::runtime_error(what) {}
};

/// Independently computed indices disagree.
struct ConsistencyError : std::runtime_error {
    explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical machinery failed its own contract (rank loss, residuals, ...).
struct NumericsError : std::runtime_error {
    explicit NumericsError(const std::string& what) : std::runtime_error(what) {}
};

/// Round `x` to the nearest integer, requiring the residual to stay below
/// `tol`. Topological indices must never be averaged into existence.
int round_to_integer(double x, double tol, const std::string& context);

/// Wrap t into [0, 1).
inline double wrap_unit(double t) {
    double r = t - std::floor(t);
    return (r >= 1.0) ? r - 1.0 : r;
}

} // namespace hillflow
