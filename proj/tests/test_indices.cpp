#include "hillflow/indices.hpp"

#include "hillflow/verify.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace hillflow;

namespace {

// Generic smooth non-commuting unitary loop with prescribed winding content.
UnitaryLoop generic_unitary_loop(int n, unsigned long seed, std::vector<int> windings) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Mat h1(n, n), h2(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            h1(i, j) = Complex(gauss(rng), gauss(rng));
            h2(i, j) = Complex(gauss(rng), gauss(rng));
        }
    const Mat a = 0.5 * (h1 + h1.adjoint());
    const Mat b = 0.5 * (h2 + h2.adjoint());
    Vec diag(n);
    for (int i = 0; i < n; ++i) diag(i) = kTwoPi * windings[i % windings.size()];
    const Mat q = random_unitary(n, seed + 101);
    return UnitaryLoop::of([a, b, diag, q, n](double t) {
        const Mat left = (kI * std::sin(kTwoPi * t) * a).exp();
        const Mat right = (kI * (1.0 - std::cos(kTwoPi * t)) * b).exp();
        Mat phases = Mat::Zero(n, n);
        for (int i = 0; i < n; ++i) phases(i, i) = std::exp(kI * (diag(i) * t));
        return (left * q * phases * q.adjoint() * right).eval();
    });
}

PlaneLoop plane_loop_of_unitaries(const UnitaryLoop& u) {
    auto at = u.at_raw;
    PlaneLoop loop;
    loop.grid = u.grid;
    loop.at_raw = [at](double t) { return unitary_to_plane(BoundaryUnitary{at(t)}); };
    return loop;
}

} // namespace

TEST_CASE("winding_number on explicit samples") {
    auto sample_loop = [](int winds, int count) {
        std::vector<Complex> samples;
        for (int i = 0; i < count; ++i)
            samples.push_back(std::exp(kI * (kTwoPi * winds * i / double(count))));
        return samples;
    };
    double residual = -1;
    CHECK(winding_number(sample_loop(1, 32), &residual) == 1);
    CHECK(residual < 1e-12);
    CHECK(winding_number(std::vector<Complex>(16, Complex(0.3, -2.0))) == 0);
    CHECK(winding_number(sample_loop(-2, 64)) == -2);
    CHECK_THROWS_AS(winding_number(std::vector<Complex>{{1.0, 0.0}, {0.0, 0.0}, {1.0, 0.0}}),
                    NumericsError);
    // Refinement invariance and global phase invariance.
    auto coarse = sample_loop(3, 40);
    auto fine = sample_loop(3, 400);
    CHECK(winding_number(coarse) == winding_number(fine));
    for (auto& z : coarse) z *= std::exp(kI * 0.8);
    CHECK(winding_number(coarse) == 3);
}

TEST_CASE("winding_number on callables refines adaptively") {
    CHECK(winding_number([](double t) { return std::exp(kI * (kTwoPi * 5 * t)); }, 8) == 5);
    CHECK(winding_number([](double t) {
              return std::exp(kI * (kTwoPi * t)) * (2.0 + std::cos(kTwoPi * 3 * t));
          }) == 1);
}

TEST_CASE("unitary_spectral_flow on scalar loops") {
    const UnitaryLoop once = UnitaryLoop::of([](double t) {
        Mat u(1, 1);
        u(0, 0) = std::exp(kI * kTwoPi * t);
        return u;
    });
    CHECK(unitary_spectral_flow(once, Complex(1, 0)) == 1);

    const UnitaryLoop constant = UnitaryLoop::of([](double) {
        return (-Mat::Identity(1, 1)).eval();
    });
    CHECK(unitary_spectral_flow(constant, Complex(1, 0)) == 0);

    const UnitaryLoop twice_back = UnitaryLoop::of([](double t) {
        Mat u(1, 1);
        u(0, 0) = std::exp(-kI * 2.0 * kTwoPi * t);
        return u;
    });
    CHECK(unitary_spectral_flow(twice_back, Complex(1, 0)) == -2);

    // Parked exactly at the base point: refuse.
    const UnitaryLoop parked = UnitaryLoop::of([](double) {
        return Mat::Identity(1, 1).eval();
    });
    CHECK_THROWS_AS(unitary_spectral_flow(parked, Complex(1, 0)), RegularityError);
}

TEST_CASE("unitary_spectral_flow equals det winding on generic loops") {
    for (unsigned long seed : {4UL, 9UL, 23UL}) {
        for (int n : {2, 4}) {
            const UnitaryLoop loop = generic_unitary_loop(n, seed, {1, -2, 0, 1});
            const int flow = unitary_spectral_flow(loop, Complex(1, 0));
            const int wind = winding_number(
                [&loop](double t) { return loop.at(t).determinant(); }, 128);
            CHECK(flow == wind);
        }
    }
}

TEST_CASE("maslov_index: constant transversal loops have index 0") {
    const MaslovResult mas = maslov_index(PlaneLoop::constant(dirichlet_plane(2)),
                                          PlaneLoop::constant(neumann_plane(2)));
    CHECK(mas.value == 0);
    CHECK(mas.crossings.empty());
}

TEST_CASE("maslov_index equals the unitary flow of U2* U1 and is antisymmetric") {
    for (unsigned long seed : {3UL, 12UL}) {
        for (int n : {1, 2, 3}) {
            const UnitaryLoop u1 = generic_unitary_loop(n, seed, {1, 0, -1});
            const UnitaryLoop u2 = generic_unitary_loop(n, seed + 50, {0, 1});
            const PlaneLoop l1 = plane_loop_of_unitaries(u1);
            const PlaneLoop l2 = plane_loop_of_unitaries(u2);

            const MaslovResult forward = maslov_index(l1, l2);
            const MaslovResult backward = maslov_index(l2, l1);
            CHECK(forward.value == -backward.value);

            auto at1 = u1.at_raw;
            auto at2 = u2.at_raw;
            const UnitaryLoop comparison = UnitaryLoop::of(
                [at1, at2](double t) { return (at2(t).adjoint() * at1(t)).eval(); });
            CHECK(forward.value == unitary_spectral_flow(comparison, Complex(1, 0)));
        }
    }
}

TEST_CASE("index_I: constant, Robin loop, and doubled loops") {
    const IndexReport constant = index_I(PlaneLoop::constant(random_lagrangian(2, 8)));
    CHECK(constant.value == 0);

    // Robin loop: the formula U(t) = -e^{-2 pi i t} winds once negatively.
    const IndexReport robin = index_I(PlaneLoop::robin(1));
    CHECK(std::abs(robin.value) == 1);
    CHECK(robin.value == -1);
    CHECK(robin.winding_residual < 0.1);

    // unitary_to_plane(e^{2 pi i t} I_2): det winds twice.
    const PlaneLoop doubled = PlaneLoop::of([](double t) {
        return unitary_to_plane(
            BoundaryUnitary{std::exp(kI * kTwoPi * t) * Mat::Identity(2, 2)});
    });
    CHECK(index_I(doubled).value == 2);

    // Constant Dirichlet loop: parked on the reference; the rotating fallback
    // must still deliver 0.
    CHECK(index_I(PlaneLoop::constant(dirichlet_plane(1))).value == 0);
}

TEST_CASE("index_I additivity under loop concatenation") {
    const PlaneLoop a = PlaneLoop::of([](double t) {
        return unitary_to_plane(BoundaryUnitary{std::exp(kI * kTwoPi * t) * Mat::Identity(1, 1)});
    });
    const PlaneLoop b = PlaneLoop::of([](double t) {
        return unitary_to_plane(
            BoundaryUnitary{std::exp(-kI * 2.0 * kTwoPi * t) * Mat::Identity(1, 1)});
    });
    auto fa = a.at_raw;
    auto fb = b.at_raw;
    const PlaneLoop joined = PlaneLoop::of(
        [fa, fb](double t) { return t < 0.5 ? fa(wrap_unit(2.0 * t)) : fb(wrap_unit(2.0 * t)); },
        128);
    CHECK(index_I(joined).value == index_I(a).value + index_I(b).value);
}

TEST_CASE("crossing form of the Robin loop against the Dirichlet plane") {
    // Crossing at t = 0: b(u, u) = -pi < 0, one negative eigenvalue.
    const MaslovResult mas =
        maslov_index(PlaneLoop::robin(1), PlaneLoop::constant(dirichlet_plane(1)));
    REQUIRE(mas.crossings.size() == 1);
    CHECK(std::abs(mas.crossings.front().t_star) < 1e-6);
    REQUIRE(mas.crossings.front().form_eigenvalues.size() == 1);
    CHECK(mas.crossings.front().form_eigenvalues.front() ==
          doctest::Approx(-kPi).epsilon(1e-4));
    CHECK(mas.value == -1);
}

TEST_CASE("verify_main_theorem: constant boundary with constant potential is all zero") {
    VerifyConfig config;
    config.t_samples = 8;
    config.length = 24.0;
    const auto v = flat_potential(1, 0.0);
    const MainTheoremReport report =
        verify_main_theorem(v, PlaneLoop::constant(neumann_plane(1)), -1.0, config);
    CHECK(report.consistent);
    CHECK(report.flow.flow == 0);
    CHECK(report.maslov.value == 0);
    CHECK(report.index_difference() == 0);
}

TEST_CASE("verify_main_theorem: Robin loop at E = -1") {
    VerifyConfig config;
    config.t_samples = 48;
    const auto v = flat_potential(1, 0.0);
    const MainTheoremReport report =
        verify_main_theorem(v, PlaneLoop::robin(1), -1.0, config);
    CHECK(report.consistent);
    CHECK(report.flow.flow == 1); // bound-state oracle: one downward crossing
    CHECK(report.maslov.value == 1);
    CHECK(report.index_plus.value == 0);
    CHECK(report.index_boundary.value == -1);
    REQUIRE(!report.checks.empty());
    for (const auto& check : report.checks) {
        CHECK(check.kernel_ok);
        CHECK(check.hellman_feynman_ok);
        CHECK(check.worst_relative_error <= 0.05);
    }
}

TEST_CASE("verify_junction_theorem: equal families give zero flow") {
    VerifyConfig config;
    config.t_samples = 12;
    config.length = 16.0;
    const auto v = mathieu_potential();
    const JunctionTheoremReport report = verify_junction_theorem(
        v, v, {step_switch(0.5), smoothstep_switch(0.5)}, kPi * kPi, config);
    CHECK(report.consistent);
    CHECK(report.switch_independent);
    for (const auto& entry : report.flows) CHECK(entry.flow.flow == 0);
    CHECK(report.maslov.value == 0);
    CHECK(report.index_right_plus.value == report.index_left_minus.value);
}
