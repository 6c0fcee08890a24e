#include "hillflow/verify.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hillflow {

std::vector<double> VerifyConfig::t_grid() const {
    std::vector<double> g(t_samples);
    for (int i = 0; i < t_samples; ++i) g[i] = static_cast<double>(i) / t_samples;
    return g;
}

namespace {

std::vector<double> coarse_grid(const std::vector<double>& grid, size_t max_points = 9) {
    if (grid.size() <= max_points) return grid;
    std::vector<double> out;
    const size_t stride = grid.size() / max_points;
    for (size_t i = 0; i < grid.size(); i += stride) out.push_back(grid[i]);
    return out;
}

void require_in_gap(const EnergyProbe& probe, const std::string& who) {
    if (probe.in_gap()) return;
    std::ostringstream os;
    os << who << ": energy " << probe.energy << " is not inside a spectral gap (margin "
       << probe.circle_margin << "); perturb E";
    throw RegularityError(os.str());
}

// Compare sorted crossing-form eigenvalues against the negated branch slopes;
// the proof of the main theorem makes them equal.
void hellman_feynman(CrossingCheck& check, const PlaneLoop& l1, const PlaneLoop& l2,
                     const CrossingRecord& rec, const IndexOptions& index_opts,
                     const Tolerances& tol) {
    check.neg_slopes = rec.slopes;
    for (double& s : check.neg_slopes) s = -s;
    std::sort(check.neg_slopes.begin(), check.neg_slopes.end());

    auto evaluate = [&](double delta) {
        auto eigs = crossing_form_eigenvalues(l1, l2, rec.t_star, delta, tol);
        std::sort(eigs.begin(), eigs.end());
        return eigs;
    };

    double delta = index_opts.projector_delta;
    check.form_eigenvalues = evaluate(delta);
    for (int attempt = 0; attempt < 2; ++attempt) {
        check.worst_relative_error = 0;
        const size_t m = std::min(check.form_eigenvalues.size(), check.neg_slopes.size());
        if (m != check.neg_slopes.size() || m != check.form_eigenvalues.size()) {
            check.hellman_feynman_ok = false;
            return;
        }
        for (size_t i = 0; i < m; ++i) {
            const double a = check.form_eigenvalues[i];
            const double b = check.neg_slopes[i];
            const double rel = std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-12});
            check.worst_relative_error = std::max(check.worst_relative_error, rel);
        }
        check.hellman_feynman_ok = check.worst_relative_error <= 0.05;
        if (check.hellman_feynman_ok) return;
        // Richardson pass: (4 D(delta/2) - D(delta)) / 3 on the form matrix is
        // equivalent to extrapolating its eigenvalues for well-separated
        // spectra; re-evaluate at delta/2 and extrapolate entrywise.
        const auto half = evaluate(delta / 2.0);
        if (half.size() == check.form_eigenvalues.size()) {
            for (size_t i = 0; i < half.size(); ++i)
                check.form_eigenvalues[i] = (4.0 * half[i] - check.form_eigenvalues[i]) / 3.0;
        }
        delta /= 2.0;
    }
}

} // namespace

PlaneLoop ell_plus_loop(const HermitianPotentialFamily& v, double energy,
                        const VerifyConfig& config) {
    auto fn = memoized([v, energy, config](double t) {
        return ell_plus(v, t, energy, config.magnus, config.tol);
    });
    PlaneLoop loop = PlaneLoop::of(fn, config.t_samples);
    loop.refine(config.tol);
    return loop;
}

PlaneLoop ell_minus_loop(const HermitianPotentialFamily& v, double energy,
                         const VerifyConfig& config) {
    auto fn = memoized([v, energy, config](double t) {
        return ell_minus(v, t, energy, config.magnus, config.tol);
    });
    PlaneLoop loop = PlaneLoop::of(fn, config.t_samples);
    loop.refine(config.tol);
    return loop;
}

MainTheoremReport verify_main_theorem(const HermitianPotentialFamily& v,
                                      const PlaneLoop& boundary_loop, double energy,
                                      const VerifyConfig& config) {
    MainTheoremReport report;
    const auto grid = config.t_grid();

    report.probe = classify_energy(v, energy, coarse_grid(grid), config.magnus, config.tol);
    require_in_gap(report.probe, "verify_main_theorem");
    for (double t : coarse_grid(grid, 5))
        if (bulk_kernel_dimension(v, t, energy, config.magnus, config.tol) != 0)
            throw RegularityError("verify_main_theorem: E is an eigenvalue of the bulk "
                                  "operator; perturb E");

    report.length = config.length > 0
                        ? config.length
                        : default_edge_length(v, energy, coarse_grid(grid), config.max_periods,
                                              config.magnus, config.tol);
    const double period = std::max(v.left_period, v.right_period);
    report.nodes = static_cast<int>(std::lround(report.length / period * config.grid_per_period));

    PlaneLoop boundary = boundary_loop;
    boundary.refine(config.tol);

    auto family = [&](double t) {
        return discretize_edge(v, t, boundary.at(t), report.length, report.nodes, config.tol);
    };
    const BranchSet branches =
        track_branches(family, energy, config.window, grid, config.track, config.tol);
    report.flow = spectral_flow(branches, energy, config.tol);

    PlaneLoop plus = ell_plus_loop(v, energy, config);
    report.maslov = maslov_index(plus, boundary, config.index, config.tol);
    report.index_plus = index_I(plus, config.index, config.tol);
    report.index_boundary = index_I(boundary, config.index, config.tol);

    for (const auto& rec : report.flow.crossings) {
        if (!rec.localized) continue;
        CrossingCheck check;
        check.t_star = rec.t_star;
        check.edge_multiplicity = rec.multiplicity;
        check.plane_intersection = intersection_dimension(plus.at(rec.t_star),
                                                          boundary.at(rec.t_star),
                                                          config.tol.inter_eig, config.tol);
        check.kernel_ok = check.edge_multiplicity == check.plane_intersection;
        hellman_feynman(check, plus, boundary, rec, config.index, config.tol);
        report.checks.push_back(std::move(check));
    }

    report.consistent = report.flow.flow == report.maslov.value &&
                        report.flow.flow == report.index_difference();
    for (const auto& c : report.checks)
        report.consistent = report.consistent && c.kernel_ok && c.hellman_feynman_ok;
    return report;
}

JunctionTheoremReport verify_junction_theorem(const HermitianPotentialFamily& v_left,
                                              const HermitianPotentialFamily& v_right,
                                              const std::vector<SwitchFunction>& switches,
                                              double energy, const VerifyConfig& config) {
    if (switches.empty()) throw ConfigError("verify_junction_theorem: no switch functions");
    JunctionTheoremReport report;
    const auto grid = config.t_grid();

    report.probe_left =
        classify_energy(v_left, energy, coarse_grid(grid), config.magnus, config.tol);
    report.probe_right =
        classify_energy(v_right, energy, coarse_grid(grid), config.magnus, config.tol);
    require_in_gap(report.probe_left, "verify_junction_theorem (left family)");
    require_in_gap(report.probe_right, "verify_junction_theorem (right family)");

    const double l_left = config.length > 0
                              ? config.length
                              : default_edge_length(v_left, energy, coarse_grid(grid),
                                                    config.max_periods, config.magnus, config.tol);
    const double l_right = config.length > 0
                               ? config.length
                               : default_edge_length(v_right, energy, coarse_grid(grid),
                                                     config.max_periods, config.magnus,
                                                     config.tol);
    report.length = std::max(l_left, l_right);
    const double period = std::max({v_left.left_period, v_left.right_period,
                                    v_right.left_period, v_right.right_period});
    report.nodes =
        static_cast<int>(std::lround(2.0 * report.length / period * config.grid_per_period));

    for (const auto& chi : switches) {
        auto family = [&](double t) {
            return discretize_junction(v_left, v_right, chi, t, report.length, report.nodes,
                                       config.tol);
        };
        const BranchSet branches =
            track_branches(family, energy, config.window, grid, config.track, config.tol);
        report.flows.push_back({chi.name, spectral_flow(branches, energy, config.tol)});
    }
    report.switch_independent = true;
    for (const auto& entry : report.flows)
        report.switch_independent =
            report.switch_independent && entry.flow.flow == report.flows.front().flow.flow;

    PlaneLoop plus_right = ell_plus_loop(v_right, energy, config);
    PlaneLoop minus_left = ell_minus_loop(v_left, energy, config);
    report.maslov = maslov_index(plus_right, minus_left, config.index, config.tol);
    report.index_right_plus = index_I(plus_right, config.index, config.tol);
    report.index_left_minus = index_I(minus_left, config.index, config.tol);

    for (const auto& rec : report.flows.front().flow.crossings) {
        if (!rec.localized) continue;
        CrossingCheck check;
        check.t_star = rec.t_star;
        check.edge_multiplicity = rec.multiplicity;
        check.plane_intersection =
            intersection_dimension(plus_right.at(rec.t_star), minus_left.at(rec.t_star),
                                   config.tol.inter_eig, config.tol);
        check.kernel_ok = check.edge_multiplicity == check.plane_intersection;
        hellman_feynman(check, plus_right, minus_left, rec, config.index, config.tol);
        report.checks.push_back(std::move(check));
    }

    const int flow = report.flows.front().flow.flow;
    report.consistent = report.switch_independent && flow == report.maslov.value &&
                        flow == report.index_difference();
    for (const auto& c : report.checks)
        report.consistent = report.consistent && c.kernel_ok && c.hellman_feynman_ok;
    return report;
}

} // namespace hillflow
