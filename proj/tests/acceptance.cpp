// acceptance.cpp — end-to-end acceptance suite. Each criterion prints one
// PASS/FAIL line (including its runtime against the budget) and the binary
// exits nonzero if any requested criterion fails.
//
//   acceptance          run all criteria
//   acceptance <k>      run criterion k only

#include "hillflow/report.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

using namespace hillflow;

namespace {

struct Criterion {
    int id;
    const char* summary;
    double budget_seconds; // 0 = no stated budget
    std::function<bool(std::string&)> body;
};

LagrangianFrame robin_angle_plane(double t) {
    return robin_plane(std::sin(kPi * t) * Mat::Identity(1, 1),
                       std::cos(kPi * t) * Mat::Identity(1, 1));
}

int edge_flow(const HermitianPotentialFamily& v, const PlaneLoop& boundary, double energy,
              const VerifyConfig& config, double length, int nodes) {
    auto family = [&](double t) {
        return discretize_edge(v, t, boundary.at(t), length, nodes, config.tol);
    };
    const BranchSet set =
        track_branches(family, energy, config.window, config.t_grid(), config.track, config.tol);
    return spectral_flow(set, energy, config.tol).flow;
}

// ---- criterion bodies ----------------------------------------------------

bool c1_plane_unitary_roundtrip(std::string& detail) {
    double worst = 0;
    std::mt19937_64 seed_feed(20260809);
    for (int rep = 0; rep < 1000; ++rep) {
        const int n = 1 + static_cast<int>(seed_feed() % 8);
        const Mat u = random_unitary(n, seed_feed());
        const Mat back = plane_to_unitary(unitary_to_plane(BoundaryUnitary{u})).U;
        worst = std::max(worst, (back - u).norm());
    }
    const Mat ud = plane_to_unitary(dirichlet_plane(3)).U;
    const Mat un = plane_to_unitary(neumann_plane(3)).U;
    const double exact = std::max((ud + Mat::Identity(3, 3)).norm(),
                                  (un - Mat::Identity(3, 3)).norm());
    std::ostringstream os;
    os << "worst round-trip " << worst << ", Dirichlet/Neumann residual " << exact;
    detail = os.str();
    return worst <= 1e-8 && exact <= 1e-14;
}

bool c2_robin_formula(std::string& detail) {
    std::mt19937_64 rng(77);
    std::normal_distribution<double> gauss;
    double worst = 0;
    for (int rep = 0; rep < 100; ++rep) {
        const int n = 1 + static_cast<int>(rng() % 6);
        // Commuting hermitian pair: polynomials of one random hermitian H.
        Mat g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
        const Mat h = 0.5 * (g + g.adjoint());
        const Mat theta = h * h + 0.5 * Mat::Identity(n, n); // invertible
        const Mat pi_block = h - 0.2 * Mat::Identity(n, n);
        const Mat via_plane = plane_to_unitary(robin_plane(theta, pi_block)).U;
        const Mat direct = (theta + kI * pi_block) *
                           (theta - kI * pi_block).partialPivLu().inverse();
        worst = std::max(worst, (via_plane - direct).norm());
    }
    std::ostringstream os;
    os << "worst formula residual " << worst;
    detail = os.str();
    return worst <= 1e-10;
}

bool c3_ell_construction(std::string& detail) {
    const auto zero = flat_potential(1, 0.0);
    Mat plus_expected(2, 1), minus_expected(2, 1);
    plus_expected << 1, -1;
    minus_expected << 1, 1;
    const double free_plus = plane_distance(ell_plus(zero, 0.0, -1.0),
                                            LagrangianFrame{plus_expected});
    const double free_minus = plane_distance(ell_minus(zero, 0.0, -1.0),
                                             LagrangianFrame{minus_expected});

    const double midgap = kPi * kPi;
    double worst_iso = 0;
    bool transversal = true;
    const auto mathieu = mathieu_potential();
    const auto two_channel = diagonal_potential({mathieu_potential(), flat_potential(1, 15.0)});
    for (double t : {0.0, 0.21, 0.47, 0.83}) {
        for (const auto* v : {&mathieu, &two_channel}) {
            const LagrangianFrame lp = ell_plus(*v, t, midgap);
            const LagrangianFrame lm = ell_minus(*v, t, midgap);
            worst_iso = std::max({worst_iso, lp.isotropy_residual(), lm.isotropy_residual()});
            transversal = transversal && intersection_dimension(lp, lm) == 0;
        }
    }
    std::ostringstream os;
    os << "free-plane distances (" << free_plus << ", " << free_minus << "), worst isotropy "
       << worst_iso << ", transversality " << (transversal ? "ok" : "FAILED");
    detail = os.str();
    return free_plus <= 1e-8 && free_minus <= 1e-8 && worst_iso <= 1e-8 && transversal;
}

bool c4_robin_loop(std::string& detail) {
    VerifyConfig config;
    config.t_samples = 48;
    const MainTheoremReport report =
        verify_main_theorem(flat_potential(1, 0.0), PlaneLoop::robin(1), -1.0, config);

    // Independent analytic bound-state oracle: E(t) = -cot^2(pi t) on
    // (1/2, 1), decreasing; it crosses E = -1 downward exactly once.
    int oracle_flow = 0;
    const int samples = 20000;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i <= samples; ++i) {
        const double t = 0.5 + 0.5 * i / samples;
        const double c = std::tan(kPi * t) == 0 ? 1e308 : 1.0 / std::tan(kPi * t);
        const double e = -c * c;
        if (i > 0 && (prev + 1.0) > 0 && (e + 1.0) < 0) ++oracle_flow; // downward
        if (i > 0 && (prev + 1.0) < 0 && (e + 1.0) > 0) --oracle_flow;
        prev = e;
    }

    const bool equal = report.flow.flow == report.maslov.value &&
                       report.flow.flow == report.index_difference();
    std::ostringstream os;
    os << "Sf " << report.flow.flow << ", Mas " << report.maslov.value << ", I-diff "
       << report.index_difference() << ", oracle Sf " << oracle_flow;
    detail = os.str();
    return equal && std::abs(report.flow.flow) == 1 && report.flow.flow == oracle_flow &&
           report.consistent;
}

VerifyConfig dislocation_config() {
    VerifyConfig config;
    config.t_samples = 64;
    config.length = 40.0;
    return config;
}

bool c5_dislocation_main(std::string& detail) {
#ifndef HILLFLOW_HAVE_LAPACKE
    detail = "LAPACK oracle unavailable";
    return false;
#else
    const auto dis = dislocation_potential(mathieu_potential(), 1);
    const double energy = kPi * kPi;
    const VerifyConfig config = dislocation_config();
    const MainTheoremReport report =
        verify_main_theorem(dis, PlaneLoop::constant(dirichlet_plane(1)), energy, config);

    oracles::TridiagonalOracle oracle(
        [&](double t, double x) { return std::real(dis.at(t, x)(0, 0)); }, 0.0, config.length,
        3100, 0.0, config.length / 2.0);
    const int reference = oracles::oracle_spectral_flow(oracle, energy, 0.45);

    std::ostringstream os;
    os << "Sf " << report.flow.flow << ", Mas " << report.maslov.value << ", I-diff "
       << report.index_difference() << ", dense oracle " << reference;
    detail = os.str();
    return report.consistent && report.flow.flow == report.maslov.value &&
           report.flow.flow == report.index_difference() && report.flow.flow == reference;
#endif
}

JunctionTheoremReport junction_report() {
    const auto right = dislocation_potential(mathieu_potential(), 1);
    HermitianPotentialFamily left = mathieu_potential(); // t-frozen left material
    VerifyConfig config;
    config.t_samples = 64;
    config.length = 40.0;
    return verify_junction_theorem(left, right, {step_switch(0.5), smoothstep_switch(0.5)},
                                   kPi * kPi, config);
}

bool c6_junction(std::string& detail) {
    const JunctionTheoremReport report = junction_report();

    // Control: V_L = V_R gives zero flow and equal indices.
    const auto v = mathieu_potential();
    VerifyConfig control_config;
    control_config.t_samples = 12;
    control_config.length = 16.0;
    const JunctionTheoremReport control = verify_junction_theorem(
        v, v, {step_switch(0.5), smoothstep_switch(0.5)}, kPi * kPi, control_config);

    std::ostringstream os;
    os << "flows";
    for (const auto& f : report.flows) os << " " << f.switch_name << "=" << f.flow.flow;
    os << ", Mas " << report.maslov.value << ", I-diff " << report.index_difference()
       << "; control flow " << control.flows.front().flow.flow << ", control I+ "
       << control.index_right_plus.value << " vs I- " << control.index_left_minus.value;
    detail = os.str();

    const bool junction_ok = report.consistent && report.switch_independent &&
                             report.flows.front().flow.flow == report.index_difference();
    const bool control_ok = control.consistent && control.flows.front().flow.flow == 0 &&
                            control.index_right_plus.value == control.index_left_minus.value;
    return junction_ok && control_ok && report.flows.front().flow.flow != 0;
}

bool kernel_checks(const std::vector<CrossingCheck>& checks, bool want_kernel, bool want_hf,
                   std::ostringstream& os) {
    bool ok = true;
    for (const auto& c : checks) {
        os << " [t*=" << c.t_star << " dim " << c.edge_multiplicity << "/"
           << c.plane_intersection << " hf-err " << c.worst_relative_error << "]";
        if (want_kernel) ok = ok && c.kernel_ok;
        if (want_hf) ok = ok && c.hellman_feynman_ok;
    }
    return ok;
}

bool cross_checks(bool want_kernel, bool want_hf, std::string& detail) {
    VerifyConfig robin_config;
    robin_config.t_samples = 48;
    const MainTheoremReport robin =
        verify_main_theorem(flat_potential(1, 0.0), PlaneLoop::robin(1), -1.0, robin_config);

    const auto dis = dislocation_potential(mathieu_potential(), 1);
    const MainTheoremReport main_hill = verify_main_theorem(
        dis, PlaneLoop::constant(dirichlet_plane(1)), kPi * kPi, dislocation_config());

    const JunctionTheoremReport junction = junction_report();

    std::ostringstream os;
    size_t total = robin.checks.size() + main_hill.checks.size() + junction.checks.size();
    os << total << " crossings:";
    bool ok = total > 0;
    ok = kernel_checks(robin.checks, want_kernel, want_hf, os) && ok;
    ok = kernel_checks(main_hill.checks, want_kernel, want_hf, os) && ok;
    ok = kernel_checks(junction.checks, want_kernel, want_hf, os) && ok;
    detail = os.str();
    return ok;
}

bool c7_kernel_dimension(std::string& detail) { return cross_checks(true, false, detail); }
bool c8_crossing_form(std::string& detail) { return cross_checks(false, true, detail); }

bool c9_tube(std::string& detail) {
    const double energy = kPi * kPi;
    std::ostringstream os;
    bool ok = true;

    VerifyConfig config;
    config.t_samples = 48;
    config.length = 30.0;
    config.window = 0.4;

    for (int k : {2, 3}) {
        const ChannelReduction red = fourier_truncate(tube_cosine_potential(), k);
        const int nodes = static_cast<int>(config.length) * 64;
        const int dflow = edge_flow(red.channels, PlaneLoop::constant(dirichlet_plane(red.channels.n)),
                                    energy, config, config.length, nodes);
        const int nflow = edge_flow(red.channels, PlaneLoop::constant(neumann_plane(red.channels.n)),
                                    energy, config, config.length, nodes);
        os << "K=" << k << ": Sf_D " << dflow << ", Sf_N " << nflow << "; ";
        ok = ok && dflow == nflow && dflow != 0;
    }

    VerifyConfig junction_config = config;
    junction_config.t_samples = 40;
    junction_config.length = 24.0;
    const TubeJunctionReport tube = tube_junction_flow(
        tube_frozen(tube_cosine_potential()), tube_cosine_potential(),
        {step_switch(0.5), smoothstep_switch(0.5)}, energy, 2, junction_config);
    os << "junction flows K=2/3: " << tube.reports[0].flows.front().flow.flow << "/"
       << tube.reports[1].flows.front().flow.flow << ", K-stable "
       << (tube.truncation_stable ? "yes" : "no");
    ok = ok && tube.consistent && tube.truncation_stable;
    detail = os.str();
    return ok;
}

bool c10_hygiene(std::string& detail) {
    std::ostringstream os;
    bool ok = true;

    // Transfer-matrix symplecticity across potentials and energies.
    double worst_symp = 0;
    const auto mats = {mathieu_potential(), flat_potential(1, 3.0),
                       dislocation_potential(mathieu_potential(), 1)};
    for (const auto& v : mats)
        for (double e : {-5.0, 0.3, 9.87, 30.0})
            for (double t : {0.0, 0.4})
                worst_symp = std::max(worst_symp,
                                      transfer_matrix(v, t, e, 0.0, 1.0, 64)
                                          .symplecticity_residual());
    const auto tube = fourier_truncate(tube_cosine_potential(), 2).channels;
    worst_symp =
        std::max(worst_symp, transfer_matrix(tube, 0.3, kPi * kPi, 0.0, 1.0, 64)
                                 .symplecticity_residual());
    os << "worst symplecticity " << worst_symp;
    ok = ok && worst_symp <= 1e-8;

    // Integer residuals.
    const IndexReport robin = index_I(PlaneLoop::robin(1));
    os << ", robin winding residual " << robin.winding_residual;
    ok = ok && robin.winding_residual < 0.1;

    // Grid doubling: N -> 2N and L -> 1.5L leave the integers unchanged.
    const auto zero = flat_potential(1, 0.0);
    VerifyConfig coarse;
    coarse.t_samples = 32;
    coarse.length = 22.0;
    coarse.grid_per_period = 64;
    VerifyConfig fine = coarse;
    fine.length = 33.0;
    fine.grid_per_period = 128;
    const int flow_coarse =
        edge_flow(zero, PlaneLoop::robin(1), -1.0, coarse, coarse.length,
                  static_cast<int>(coarse.length * coarse.grid_per_period));
    const int flow_fine = edge_flow(zero, PlaneLoop::robin(1), -1.0, fine, fine.length,
                                    static_cast<int>(fine.length * fine.grid_per_period));
    os << ", robin flow " << flow_coarse << "/" << flow_fine;
    ok = ok && flow_coarse == flow_fine;

    const auto dis = dislocation_potential(mathieu_potential(), 1);
    VerifyConfig dis_coarse;
    dis_coarse.t_samples = 48;
    dis_coarse.length = 36.0;
    VerifyConfig dis_fine = dis_coarse;
    dis_fine.length = 54.0;
    dis_fine.grid_per_period = 128;
    const int dis_flow_coarse =
        edge_flow(dis, PlaneLoop::constant(dirichlet_plane(1)), kPi * kPi, dis_coarse,
                  dis_coarse.length,
                  static_cast<int>(dis_coarse.length * dis_coarse.grid_per_period));
    const int dis_flow_fine =
        edge_flow(dis, PlaneLoop::constant(dirichlet_plane(1)), kPi * kPi, dis_fine,
                  dis_fine.length,
                  static_cast<int>(dis_fine.length * dis_fine.grid_per_period));
    os << ", dislocation flow " << dis_flow_coarse << "/" << dis_flow_fine;
    ok = ok && dis_flow_coarse == dis_flow_fine;

    detail = os.str();
    return ok;
}

const std::vector<Criterion> kCriteria = {
    {1, "plane<->unitary correspondence (1000 Haar round trips)", 10, c1_plane_unitary_roundtrip},
    {2, "Robin unitary formula on commuting hermitian pairs", 60, c2_robin_formula},
    {3, "l+- construction: free, Mathieu, 2-channel diagonal", 30, c3_ell_construction},
    {4, "Robin-loop experiment: three equal indices, |value| = 1", 120, c4_robin_loop},
    {5, "main theorem on the dislocated Mathieu family", 300, c5_dislocation_main},
    {6, "junction theorem: dislocation vs frozen left material", 300, c6_junction},
    {7, "kernel dimension equals plane intersection at crossings", 0, c7_kernel_dimension},
    {8, "crossing-form eigenvalues match -lambda' within 5%", 0, c8_crossing_form},
    {9, "tube corollary: Dirichlet = Neumann flows, K-stability", 600, c9_tube},
    {10, "numerical hygiene: symplecticity, residuals, grid doubling", 0, c10_hygiene},
};

} // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc > 1) only = std::atoi(argv[1]);

    bool all_ok = true;
    for (const auto& criterion : kCriteria) {
        if (only != 0 && criterion.id != only) continue;
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = criterion.body(detail);
        } catch (const std::exception& err) {
            ok = false;
            detail = std::string("exception: ") + err.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.budget_seconds > 0 && elapsed > criterion.budget_seconds) {
            ok = false;
            detail += " [over budget]";
        }
        std::printf("C%-2d %-4s %7.1fs%s  %s\n      %s\n", criterion.id, ok ? "PASS" : "FAIL",
                    elapsed,
                    criterion.budget_seconds > 0
                        ? (" / " + std::to_string(static_cast<int>(criterion.budget_seconds)) + "s")
                              .c_str()
                        : "",
                    criterion.summary, detail.c_str());
        all_ok = all_ok && ok;
    }
    return all_ok ? 0 : 1;
}
