#include "hillflow/edge.hpp"

#include "oracles.hpp"

#include <doctest.h>

using namespace hillflow;

namespace {

LagrangianFrame robin_angle_plane(double t) {
    const Mat theta = std::sin(kPi * t) * Mat::Identity(1, 1);
    const Mat pi_block = std::cos(kPi * t) * Mat::Identity(1, 1);
    return robin_plane(theta, pi_block);
}

// Bound state of -psi'' on R+ with the Robin-loop condition at 0:
// E(t) = -cot^2(pi t) on (1/2, 1).
double robin_bound_state(double t) {
    const double c = 1.0 / std::tan(kPi * t);
    return -c * c;
}

} // namespace

TEST_CASE("discretize_edge: Dirichlet spectrum on [0, pi]") {
    const auto zero = flat_potential(1, 0.0);
    const EdgeDiscretization d = discretize_edge(zero, 0.0, dirichlet_plane(1), kPi, 2000);
    const auto eigs = d.matrix.eigenvalues_in(0.5, 10.0, 1e-9);
    REQUIRE(eigs.size() == 3);
    CHECK(eigs[0] == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(eigs[1] == doctest::Approx(4.0).epsilon(1e-3));
    CHECK(eigs[2] == doctest::Approx(9.0).epsilon(1e-3));
}

TEST_CASE("discretize_edge: Neumann lowest mode") {
    const auto zero = flat_potential(1, 0.0);
    const double length = 60.0;
    const EdgeDiscretization d = discretize_edge(zero, 0.0, neumann_plane(1), length, 4000);
    const auto eigs = d.matrix.eigenvalues_in(-0.5, 0.01, 1e-10);
    REQUIRE(!eigs.empty());
    // (pi / 2L)^2 ~ 7e-4; approximately zero at the stated tolerance.
    CHECK(std::abs(eigs.front()) < 1e-3);
}

TEST_CASE("discretize_edge: Robin bound state at t = 0.75") {
    const auto zero = flat_potential(1, 0.0);
    const EdgeDiscretization d =
        discretize_edge(zero, 0.0, robin_angle_plane(0.75), 25.0, 4000);
    const auto eigs = d.matrix.eigenvalues_in(-2.0, -0.5, 1e-10);
    REQUIRE(eigs.size() == 1);
    CHECK(eigs.front() == doctest::Approx(-1.0).epsilon(1e-3));
}

TEST_CASE("discretize_edge: mixed plane couples channels hermitianly") {
    // 2-channel potential, boundary plane from a random unitary: spectrum must
    // be real and the localization accessor well-behaved.
    const auto v = diagonal_potential({mathieu_potential(), flat_potential(1, 1.5)});
    const LagrangianFrame boundary = random_lagrangian(2, 33);
    const EdgeDiscretization d = discretize_edge(v, 0.3, boundary, 20.0, 1200);
    auto eigs = d.matrix.eigenvalues_in(-1.0, 3.0, 1e-9);
    if (!eigs.empty()) {
        const Mat vecs = d.matrix.eigenvectors(eigs);
        for (int c = 0; c < vecs.cols(); ++c) {
            const double frac = d.localization_fraction(vecs.col(c));
            CHECK(frac >= 0.0);
            CHECK(frac <= 1.0);
        }
    }
    CHECK_THROWS_AS(discretize_edge(v, 0.0, boundary, 20.0, 10), ConfigError);
}

TEST_CASE("discretize_junction equals bulk discretization when V_L = V_R") {
    const auto v = mathieu_potential();
    const EdgeDiscretization with_step =
        discretize_junction(v, v, step_switch(0.5), 0.2, 8.0, 400);
    const EdgeDiscretization with_smooth =
        discretize_junction(v, v, smoothstep_switch(0.5), 0.2, 8.0, 400);
    CHECK((with_step.matrix.dense() - with_smooth.matrix.dense()).norm() < 1e-12);

    SwitchFunction bad;
    bad.name = "bad";
    bad.plateau_x = 0.5;
    bad.chi = [](double x) { return 0.5 - 0.3 * std::tanh(x); }; // no plateaus
    CHECK_THROWS_AS(discretize_junction(v, v, bad, 0.0, 8.0, 400), ConfigError);
}

TEST_CASE("track_branches: t-independent family has constant branches") {
    const auto v = mathieu_potential();
    auto family = [&](double) {
        return discretize_edge(v, 0.0, dirichlet_plane(1), 20.0, 1280);
    };
    std::vector<double> grid;
    for (int i = 0; i < 16; ++i) grid.push_back(i / 16.0);
    const BranchSet set = track_branches(family, kPi * kPi, 0.5, grid);
    CHECK(set.regular);
    CHECK(set.crossings.empty());
    const FlowReport flow = spectral_flow(set, kPi * kPi);
    CHECK(flow.flow == 0);
}

TEST_CASE("track_branches: Robin loop crossing matches the analytic oracle") {
    const auto zero = flat_potential(1, 0.0);
    const double energy = -1.0;
    const double length = 25.0;
    const int nodes = 2500;
    auto family = [&](double t) {
        return discretize_edge(zero, t, robin_angle_plane(t), length, nodes);
    };
    std::vector<double> grid;
    for (int i = 0; i < 64; ++i) grid.push_back(i / 64.0);
    const BranchSet set = track_branches(family, energy, 0.5, grid);
    REQUIRE(set.regular);
    REQUIRE(set.crossings.size() == 1);
    const CrossingRecord& rec = set.crossings.front();
    CHECK(rec.multiplicity == 1);
    CHECK(rec.localized);
    // Analytic crossing: -cot^2(pi t*) = -1 at t* = 3/4, slope -4 pi.
    CHECK(std::abs(rec.t_star - 0.75) < 1e-3);
    const double slope_exact =
        (robin_bound_state(0.75 + 1e-6) - robin_bound_state(0.75 - 1e-6)) / 2e-6;
    CHECK(rec.slopes.size() == 1);
    CHECK(rec.slopes.front() == doctest::Approx(slope_exact).epsilon(0.05));
    CHECK(rec.slopes.front() < 0);

    const FlowReport flow = spectral_flow(set, energy);
    CHECK(flow.flow == +1); // one downward crossing

    // Orientation reversal negates the flow.
    auto reversed = [&](double t) {
        const double s = wrap_unit(1.0 - t);
        return discretize_edge(zero, s, robin_angle_plane(s), length, nodes);
    };
    const BranchSet rset = track_branches(reversed, energy, 0.5, grid);
    CHECK(spectral_flow(rset, energy).flow == -1);
}

#ifdef HILLFLOW_HAVE_LAPACKE
TEST_CASE("edge flow of the dislocated Mathieu family matches the LAPACK oracle") {
    const auto dis = dislocation_potential(mathieu_potential(), 1);
    const double energy = kPi * kPi;
    const double length = 40.0;
    const int nodes = 2560;
    auto family = [&](double t) {
        return discretize_edge(dis, t, dirichlet_plane(1), length, nodes);
    };
    std::vector<double> grid;
    for (int i = 0; i < 64; ++i) grid.push_back(i / 64.0);
    const BranchSet set = track_branches(family, energy, 0.5, grid);
    REQUIRE(set.regular);
    const FlowReport flow = spectral_flow(set, energy);

    oracles::TridiagonalOracle oracle(
        [&](double t, double x) { return std::real(dis.at(t, x)(0, 0)); }, 0.0, length, 3100,
        0.0, length / 2.0);
    const int reference = oracles::oracle_spectral_flow(oracle, energy, 0.45);
    CHECK(flow.flow == reference);
    CHECK(flow.flow != 0); // the first gap carries a nonzero index
}
#endif

TEST_CASE("grid doubling leaves the flow integer unchanged") {
    const auto zero = flat_potential(1, 0.0);
    const double energy = -1.0;
    std::vector<double> grid;
    for (int i = 0; i < 32; ++i) grid.push_back(i / 32.0);
    int flows[2];
    int idx = 0;
    for (auto [length, nodes] : std::vector<std::pair<double, int>>{{22.0, 1400}, {33.0, 4200}}) {
        auto family = [&, length = length, nodes = nodes](double t) {
            return discretize_edge(zero, t, robin_angle_plane(t), length, nodes);
        };
        flows[idx++] = spectral_flow(track_branches(family, energy, 0.5, grid), energy).flow;
    }
    CHECK(flows[0] == flows[1]);
}
