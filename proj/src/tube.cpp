#include "hillflow/tube.hpp"

#include <cmath>

namespace hillflow {

namespace {

// Enumerate {-K..K}^{d-1} row-major.
std::vector<std::vector<int>> mode_set(int d, int truncation) {
    const int span = 2 * truncation + 1;
    int count = 1;
    for (int axis = 0; axis < d - 1; ++axis) count *= span;
    std::vector<std::vector<int>> modes(count, std::vector<int>(d - 1, 0));
    for (int i = 0; i < count; ++i) {
        int rest = i;
        for (int axis = d - 2; axis >= 0; --axis) {
            modes[i][axis] = rest % span - truncation;
            rest /= span;
        }
    }
    return modes;
}

} // namespace

ChannelReduction fourier_truncate(const TubePotentialFamily& v, int truncation,
                                  const Tolerances& tol) {
    if (truncation < 0) throw ConfigError("fourier_truncate: K must be nonnegative");
    if (v.d < 2) throw ConfigError("fourier_truncate: tube dimension must be >= 2");

    ChannelReduction red;
    red.truncation = truncation;
    red.modes = mode_set(v.d, truncation);
    const int n = static_cast<int>(red.modes.size());
    const int axes = v.d - 1;
    const int res = 4 * (2 * truncation + 1); // quadrature points per axis

    for (const auto& k : red.modes) {
        double k2 = 0;
        for (int c : k) k2 += static_cast<double>(c) * c;
        red.transverse_eigenvalues.push_back(kTwoPi * kTwoPi * k2); // (2 pi |k|)^2
    }

    auto modes = red.modes;
    auto mu = red.transverse_eigenvalues;
    auto eval = v.evaluate;
    const double tail_tol = 1e-9;

    // Fourier coefficients of V(t, x, .) for a difference multi-index m, by
    // the tensor trapezoidal rule on the torus.
    auto coefficient = [eval, axes, res](double t, double x, const std::vector<int>& m) {
        int points = 1;
        for (int a = 0; a < axes; ++a) points *= res;
        Complex acc(0, 0);
        std::vector<double> y(axes, 0.0);
        for (int i = 0; i < points; ++i) {
            int rest = i;
            double phase = 0.0;
            for (int a = 0; a < axes; ++a) {
                y[a] = static_cast<double>(rest % res) / res;
                phase += m[a] * y[a];
                rest /= res;
            }
            acc += eval(t, x, y) * std::exp(Complex(0.0, -kTwoPi * phase));
        }
        return acc / static_cast<double>(points);
    };

    // Tail check: coefficients just beyond the resolved difference band must
    // vanish, otherwise the truncation (or the quadrature) is too coarse.
    {
        std::vector<int> probe(axes, 0);
        for (int a = 0; a < axes; ++a) {
            probe.assign(axes, 0);
            probe[a] = 2 * truncation + 1;
            for (double x : {0.0, 0.31, -0.77}) {
                if (std::abs(coefficient(0.17, x, probe)) > tail_tol)
                    throw NumericsError(
                        "fourier_truncate: coefficient tail above tolerance; "
                        "increase K or the transverse resolution");
            }
        }
    }

    HermitianPotentialFamily channels;
    channels.n = n;
    channels.label = "tube-truncated(" + v.label + ", K=" + std::to_string(truncation) + ")";
    channels.left_period = v.left_period;
    channels.right_period = v.right_period;
    channels.x_match = v.x_match;
    channels.evaluate = [coefficient, modes, mu, n, axes](double t, double x) {
        Mat w(n, n);
        std::vector<int> diff(axes);
        for (int r = 0; r < n; ++r) {
            for (int c = 0; c <= r; ++c) {
                for (int a = 0; a < axes; ++a) diff[a] = modes[r][a] - modes[c][a];
                const Complex val = coefficient(t, x, diff);
                w(r, c) = val;
                w(c, r) = std::conj(val);
            }
            w(r, r) = std::real(w(r, r)) + mu[r];
        }
        return w;
    };
    red.channels = std::move(channels);

    const double herm = (red.channels.at(0.3, 0.4) - red.channels.at(0.3, 0.4).adjoint()).norm();
    if (herm > tol.herm) throw NumericsError("fourier_truncate: induced potential not hermitian");
    return red;
}

TubePotentialFamily tube_cosine_potential() {
    TubePotentialFamily v;
    v.d = 2;
    v.label = "tube-cosine";
    v.evaluate = [](double t, double x, const std::vector<double>& y) {
        return 2.0 * std::cos(kTwoPi * (x - t)) + std::cos(kTwoPi * y[0]);
    };
    v.x_match = 1.0; // dislocation shifts by at most one period
    return v;
}

TubePotentialFamily tube_flat_potential(double level) {
    TubePotentialFamily v;
    v.d = 2;
    v.label = "tube-flat(" + std::to_string(level) + ")";
    v.evaluate = [level](double, double, const std::vector<double>&) { return level; };
    return v;
}

TubePotentialFamily tube_frozen(const TubePotentialFamily& family) {
    TubePotentialFamily v = family;
    v.label = "frozen(" + family.label + ")";
    auto eval = family.evaluate;
    v.evaluate = [eval](double, double x, const std::vector<double>& y) {
        return eval(0.0, x, y);
    };
    return v;
}

TubeJunctionReport tube_junction_flow(const TubePotentialFamily& v_left,
                                      const TubePotentialFamily& v_right,
                                      const std::vector<SwitchFunction>& switches, double energy,
                                      int truncation, const VerifyConfig& config) {
    TubeJunctionReport out;
    for (int k : {truncation, truncation + 1}) {
        const ChannelReduction left = fourier_truncate(v_left, k, config.tol);
        const ChannelReduction right = fourier_truncate(v_right, k, config.tol);
        out.truncations.push_back(k);
        out.reports.push_back(
            verify_junction_theorem(left.channels, right.channels, switches, energy, config));
    }
    const auto& a = out.reports[0];
    const auto& b = out.reports[1];
    out.truncation_stable = a.flows.front().flow.flow == b.flows.front().flow.flow &&
                            a.maslov.value == b.maslov.value &&
                            a.index_difference() == b.index_difference();
    out.consistent = out.truncation_stable && a.consistent && b.consistent;
    if (!out.truncation_stable)
        throw ConsistencyError("tube_junction_flow: integers change between K = " +
                               std::to_string(truncation) + " and K + 1; truncation not "
                               "converged");
    return out;
}

} // namespace hillflow
