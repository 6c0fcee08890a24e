#include "hillflow/tube.hpp"

#include <doctest.h>

using namespace hillflow;

TEST_CASE("fourier_truncate: free tube diagonal") {
    const auto red = fourier_truncate(tube_flat_potential(0.0), 1);
    CHECK(red.channels.n == 3);
    const Mat v = red.channels.at(0.1, 0.7);
    // Modes -1, 0, 1 -> transverse eigenvalues (2 pi)^2, 0, (2 pi)^2.
    CHECK(std::abs(v(0, 0) - kTwoPi * kTwoPi) < 1e-10);
    CHECK(std::abs(v(1, 1)) < 1e-10);
    CHECK(std::abs(v(2, 2) - kTwoPi * kTwoPi) < 1e-10);
    CHECK((v - v.adjoint()).norm() < 1e-12);
    CHECK(std::abs(v(0, 1)) < 1e-12);
}

TEST_CASE("fourier_truncate: separable x-potential shifts the diagonal") {
    TubePotentialFamily v;
    v.d = 2;
    v.label = "separable";
    v.evaluate = [](double, double x, const std::vector<double>&) {
        return std::cos(kTwoPi * x);
    };
    const auto red = fourier_truncate(v, 1);
    const Mat w = red.channels.at(0.0, 0.25);
    const double vx = std::cos(kTwoPi * 0.25);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(w(i, i) - (red.transverse_eigenvalues[i] + vx)) < 1e-10);
    CHECK(std::abs(w(0, 1)) < 1e-12);
    CHECK(std::abs(w(1, 2)) < 1e-12);
}

TEST_CASE("fourier_truncate: transverse cosine couples neighbouring modes only") {
    TubePotentialFamily v;
    v.d = 2;
    v.label = "cosine-y";
    v.evaluate = [](double, double x, const std::vector<double>& y) {
        return 2.0 * std::cos(kTwoPi * y[0]) * std::cos(kTwoPi * x);
    };
    const auto red = fourier_truncate(v, 2);
    const Mat w = red.channels.at(0.0, 0.2);
    const double wx = std::cos(kTwoPi * 0.2);
    for (int r = 0; r < 5; ++r)
        for (int c = 0; c < 5; ++c) {
            const int diff = std::abs(r - c);
            if (diff == 1)
                CHECK(std::abs(w(r, c) - wx) < 1e-10);
            else if (diff > 1)
                CHECK(std::abs(w(r, c)) < 1e-10);
        }
}

TEST_CASE("fourier_truncate flags unresolved harmonics") {
    TubePotentialFamily v;
    v.d = 2;
    v.label = "high-harmonic";
    v.evaluate = [](double, double, const std::vector<double>& y) {
        return std::cos(kTwoPi * 7.0 * y[0]);
    };
    CHECK_THROWS_AS(fourier_truncate(v, 1), NumericsError);
}

TEST_CASE("tube-cosine channels feed the ODE pipeline") {
    const auto red = fourier_truncate(tube_cosine_potential(), 1);
    red.channels.validate();
    const double energy = kPi * kPi;
    const std::vector<double> grid{0.0, 0.33, 0.71};
    const EnergyProbe probe = classify_energy(red.channels, energy, grid);
    CHECK(probe.in_gap());
    const LagrangianFrame plus = ell_plus(red.channels, 0.33, energy);
    CHECK(plus.isotropy_residual() < 1e-8);
    CHECK(intersection_dimension(plus, ell_minus(red.channels, 0.33, energy)) == 0);
}

TEST_CASE("separable potentials decouple: indices sum channelwise") {
    // Diagonal 3-channel family: Mathieu dislocation, its frozen copy + 12,
    // and a flat channel; the coupled index is the sum of scalar indices.
    VerifyConfig config;
    config.t_samples = 32;
    const double energy = kPi * kPi;

    const auto c0 = dislocation_potential(mathieu_potential(), 1);
    auto c1 = flat_potential(1, energy + 4.0);
    auto c2 = flat_potential(1, energy + 9.0);
    const auto coupled = diagonal_potential({c0, c1, c2});

    const IndexReport whole = index_I(ell_plus_loop(coupled, energy, config));
    const IndexReport part0 = index_I(ell_plus_loop(c0, energy, config));
    const IndexReport part1 = index_I(ell_plus_loop(c1, energy, config));
    const IndexReport part2 = index_I(ell_plus_loop(c2, energy, config));
    CHECK(whole.value == part0.value + part1.value + part2.value);
    CHECK(part1.value == 0);
    CHECK(part2.value == 0);
}
