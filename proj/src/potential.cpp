#include "hillflow/potential.hpp"

#include <cmath>

namespace hillflow {

void HermitianPotentialFamily::validate(const Tolerances& tol, int samples) const {
    if (n <= 0) throw ConfigError("potential: channel count must be positive");
    if (left_period <= 0 || right_period <= 0)
        throw ConfigError("potential: periods must be positive");
    if (x_match < 0) throw ConfigError("potential: x_match must be nonnegative");
    for (int i = 0; i < samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        const double x = -3.0 + 6.0 * i / std::max(1, samples - 1);
        const Mat v = at(t, x);
        if (v.rows() != n || v.cols() != n)
            throw NumericsError("potential: evaluate returned wrong dimensions");
        const double scale = std::max(1.0, v.norm());
        if ((v - v.adjoint()).norm() > tol.herm * scale)
            throw NumericsError("potential: value is not hermitian at sampled (t, x)");
        if ((at(t + 1.0, x) - v).norm() > tol.herm * scale)
            throw NumericsError("potential: t-periodicity fails at sampled (t, x)");
        const double xr = x_match + 0.25 + 0.5 * i;
        if ((at(t, xr + right_period) - at(t, xr)).norm() > tol.herm * scale)
            throw NumericsError("potential: right x-periodicity fails beyond x_match");
        if ((at(t, -xr - left_period) - at(t, -xr)).norm() > tol.herm * scale)
            throw NumericsError("potential: left x-periodicity fails beyond x_match");
    }
}

HermitianPotentialFamily flat_potential(int n, double level) {
    HermitianPotentialFamily family;
    family.n = n;
    family.label = "flat(" + std::to_string(level) + ")";
    family.evaluate = [n, level](double, double) { return level * Mat::Identity(n, n); };
    return family;
}

HermitianPotentialFamily mathieu_potential() {
    HermitianPotentialFamily family;
    family.n = 1;
    family.label = "mathieu";
    family.evaluate = [](double, double x) {
        Mat v(1, 1);
        v(0, 0) = 2.0 * std::cos(kTwoPi * x);
        return v;
    };
    return family;
}

HermitianPotentialFamily dislocation_potential(const HermitianPotentialFamily& base,
                                               int shift_rate) {
    HermitianPotentialFamily family = base;
    family.label = "dislocation(" + base.label + ", " + std::to_string(shift_rate) + ")";
    auto eval = base.evaluate;
    const double rate = shift_rate;
    family.evaluate = [eval, rate](double t, double x) { return eval(0.0, x - rate * t); };
    // Shifting by up to one period widens the exactly-periodic region needed.
    family.x_match = base.x_match + std::max(base.left_period, base.right_period);
    return family;
}

HermitianPotentialFamily square_well_potential(double depth, double half_width) {
    if (half_width <= 0) throw ConfigError("square well: half_width must be positive");
    HermitianPotentialFamily family;
    family.n = 1;
    family.label = "square-well";
    family.x_match = half_width;
    family.evaluate = [depth, half_width](double, double x) {
        Mat v(1, 1);
        v(0, 0) = (std::abs(x) <= half_width) ? -depth : 0.0;
        return v;
    };
    return family;
}

HermitianPotentialFamily diagonal_potential(const std::vector<HermitianPotentialFamily>& channels) {
    if (channels.empty()) throw ConfigError("diagonal potential: no channels");
    HermitianPotentialFamily family;
    family.n = static_cast<int>(channels.size());
    family.label = "diagonal";
    double lp = 0, rp = 0, xm = 0;
    for (const auto& c : channels) {
        if (c.n != 1) throw ConfigError("diagonal potential: channels must be scalar");
        lp = std::max(lp, c.left_period);
        rp = std::max(rp, c.right_period);
        xm = std::max(xm, c.x_match);
    }
    // A common period must exist; integer multiples of each other suffice for
    // the built-ins (period 1 or constant).
    family.left_period = lp;
    family.right_period = rp;
    family.x_match = xm;
    const int n = family.n;
    auto chans = channels;
    family.evaluate = [chans, n](double t, double x) {
        Mat v = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) v(i, i) = chans[i].evaluate(t, x)(0, 0);
        return v;
    };
    return family;
}

HermitianPotentialFamily tabulated_potential(const std::vector<double>& samples, double period) {
    if (samples.size() < 2) throw ConfigError("tabulated potential: need at least 2 samples");
    if (period <= 0) throw ConfigError("tabulated potential: period must be positive");
    HermitianPotentialFamily family;
    family.n = 1;
    family.label = "tabulated";
    family.left_period = period;
    family.right_period = period;
    const auto m = samples.size();
    family.evaluate = [samples, period, m](double, double x) {
        double u = x / period;
        u -= std::floor(u);
        const double pos = u * static_cast<double>(m);
        const auto i0 = static_cast<size_t>(pos) % m;
        const size_t i1 = (i0 + 1) % m;
        const double w = pos - std::floor(pos);
        Mat v(1, 1);
        v(0, 0) = (1.0 - w) * samples[i0] + w * samples[i1];
        return v;
    };
    return family;
}

} // namespace hillflow
