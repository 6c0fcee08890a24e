#include "hillflow/edge.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

namespace hillflow {

SwitchFunction step_switch(double plateau_x) {
    SwitchFunction s;
    s.name = "step";
    s.plateau_x = plateau_x;
    s.chi = [](double x) { return x < 0.0 ? 1.0 : 0.0; };
    return s;
}

SwitchFunction smoothstep_switch(double plateau_x) {
    SwitchFunction s;
    s.name = "smooth";
    s.plateau_x = plateau_x;
    const double half = plateau_x;
    s.chi = [half](double x) {
        if (x <= -half) return 1.0;
        if (x >= half) return 0.0;
        const double u = (x + half) / (2.0 * half);
        return 1.0 - u * u * (3.0 - 2.0 * u);
    };
    return s;
}

double EdgeDiscretization::localization_fraction(const Vec& v) const {
    double inside = 0.0, total = 0.0;
    int idx = 0;
    for (size_t node = 0; node < node_positions.size(); ++node) {
        const int block = (node == 0) ? node0_kept : channels;
        double mass = 0.0;
        for (int c = 0; c < block; ++c) mass += std::norm(v(idx + c));
        total += mass;
        if (node_positions[node] >= keep_lo && node_positions[node] <= keep_hi) inside += mass;
        idx += block;
    }
    return (total > 0) ? inside / total : 0.0;
}

namespace {

struct BoundaryChannels {
    Mat rotation;                 // Q with U = Q diag(e^{2 i angle}) Q*
    std::vector<double> robin;    // tan(angle) per kept channel
    std::vector<int> kept;        // rotated channel indices with a Robin row
};

// Diagonalize the boundary unitary; channels with |cos(angle)| below the
// Dirichlet threshold are eliminated at the boundary node, the rest carry a
// scalar Robin condition v'(0) = tan(angle) v(0) in the rotated basis.
BoundaryChannels split_boundary(const LagrangianFrame& boundary, const Tolerances& tol) {
    const BoundaryUnitary u = plane_to_unitary(boundary, tol);
    Eigen::ComplexSchur<Mat> schur(u.U, /*computeU=*/true);
    BoundaryChannels bc;
    bc.rotation = schur.matrixU();
    const int n = u.n();
    for (int j = 0; j < n; ++j) {
        const double angle = 0.5 * std::arg(schur.matrixT()(j, j));
        if (std::abs(std::cos(angle)) <= tol.dirichlet_angle) continue;
        bc.kept.push_back(j);
        bc.robin.push_back(std::tan(angle));
    }
    return bc;
}

} // namespace

EdgeDiscretization discretize_edge(const HermitianPotentialFamily& v, double t,
                                   const LagrangianFrame& boundary, double length, int nodes,
                                   const Tolerances& tol) {
    if (length <= 2.0 * v.x_match)
        throw ConfigError("discretize_edge: need L > 2 x_match");
    if (nodes < 8) throw ConfigError("discretize_edge: grid too coarse");
    const int n = v.n;
    const double h = length / nodes;
    const double vnorm = std::max({v.at(t, 0.0).norm(), v.at(t, 0.37 * length).norm(),
                                   v.at(t, 0.71 * length).norm()});
    if (h * h * std::max(1.0, vnorm) >= 0.1)
        throw ConfigError("discretize_edge: h^2 ||V|| too large, increase N");

    const BoundaryChannels bc = split_boundary(boundary, tol);
    const int n0 = static_cast<int>(bc.kept.size());
    const Mat q = bc.rotation;

    const int dim = n0 + (nodes - 1) * n;
    EdgeDiscretization d{HermitianBanded(dim, n), n, h, 0.0, length, n0, {}, 0.0, length / 2.0};
    d.node_positions.resize(nodes);
    for (int i = 0; i < nodes; ++i) d.node_positions[i] = i * h;

    const double inv_h2 = 1.0 / (h * h);

    // Boundary node, half-cell weighted and rescaled to a standard problem.
    const Mat v0 = q.adjoint() * v.at(t, 0.0) * q;
    for (int a = 0; a < n0; ++a) {
        for (int b = 0; b <= a; ++b) {
            Complex val = v0(bc.kept[a], bc.kept[b]);
            if (a == b) val += 2.0 * inv_h2 + 2.0 * bc.robin[a] / h;
            d.matrix.add(a, b, val);
        }
        // Laplacian coupling to node 1, scaled by sqrt(2) from the half mass.
        d.matrix.add(n0 + bc.kept[a], a, -std::sqrt(2.0) * inv_h2);
    }

    for (int i = 1; i < nodes; ++i) {
        const int base = n0 + (i - 1) * n;
        const Mat vi = q.adjoint() * v.at(t, i * h) * q;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b <= a; ++b) {
                Complex val = vi(a, b);
                if (a == b) val += 2.0 * inv_h2;
                d.matrix.add(base + a, base + b, val);
            }
            if (i + 1 < nodes) d.matrix.add(base + n + a, base + a, -inv_h2);
        }
    }
    return d;
}

EdgeDiscretization discretize_junction(const HermitianPotentialFamily& v_left,
                                       const HermitianPotentialFamily& v_right,
                                       const SwitchFunction& chi, double t, double length,
                                       int nodes, const Tolerances& tol) {
    if (v_left.n != v_right.n)
        throw ConfigError("discretize_junction: channel counts differ");
    if (chi.plateau_x >= length / 2.0)
        throw ConfigError("discretize_junction: switch plateau exceeds L/2");
    // Plateau contract.
    for (double x : {chi.plateau_x, chi.plateau_x * 2.0, length * 0.75}) {
        if (std::abs(chi.chi(x)) > 1e-14 || std::abs(chi.chi(-x) - 1.0) > 1e-14)
            throw ConfigError("discretize_junction: switch violates its plateau contract");
    }

    const int n = v_left.n;
    const double h = 2.0 * length / nodes;
    const double vnorm =
        std::max(v_left.at(t, -0.3 * length).norm(), v_right.at(t, 0.3 * length).norm());
    if (h * h * std::max(1.0, vnorm) >= 0.1)
        throw ConfigError("discretize_junction: h^2 ||V|| too large, increase N");

    const int dim = (nodes - 1) * n;
    EdgeDiscretization d{HermitianBanded(dim, n), n,   h, -length, length, n, {},
                         -length / 2.0,           length / 2.0};
    d.node0_kept = n;
    d.node_positions.resize(nodes - 1);

    const double inv_h2 = 1.0 / (h * h);
    for (int i = 1; i < nodes; ++i) {
        const double x = -length + i * h;
        d.node_positions[i - 1] = x;
        const int base = (i - 1) * n;
        const double c = chi.chi(x);
        const Mat vi = c * v_left.at(t, x) + (1.0 - c) * v_right.at(t, x);
        if ((vi - vi.adjoint()).norm() > tol.herm * std::max(1.0, vi.norm()))
            throw NumericsError("discretize_junction: potential sample not hermitian");
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b <= a; ++b) {
                Complex val = vi(a, b);
                if (a == b) val += 2.0 * inv_h2;
                d.matrix.add(base + a, base + b, val);
            }
            if (i + 1 < nodes) d.matrix.add(base + n + a, base + a, -inv_h2);
        }
    }
    return d;
}

namespace {

struct Sample {
    double t = 0;
    std::vector<double> eigs;
};

// Order-preserving minimal-cost alignment of two sorted eigenvalue lists,
// with skips charged by the distance from the window edge (an appearing or
// vanishing branch must enter through the edge). Returns pairs (i, j) and
// the list of skipped entries on either side.
struct Alignment {
    std::vector<std::pair<int, int>> matched;
    std::vector<int> skipped_a, skipped_b;
    double worst_jump = 0;
    double worst_interior_skip = 0;
};

Alignment align(const std::vector<double>& a, const std::vector<double>& b, double energy,
                double window) {
    const int na = static_cast<int>(a.size()), nb = static_cast<int>(b.size());
    auto skip_cost = [&](double x) { return std::max(0.0, window - std::abs(x - energy)); };

    std::vector<std::vector<double>> cost(na + 1, std::vector<double>(nb + 1, 0.0));
    for (int i = 1; i <= na; ++i) cost[i][0] = cost[i - 1][0] + skip_cost(a[i - 1]);
    for (int j = 1; j <= nb; ++j) cost[0][j] = cost[0][j - 1] + skip_cost(b[j - 1]);
    for (int i = 1; i <= na; ++i)
        for (int j = 1; j <= nb; ++j)
            cost[i][j] = std::min({cost[i - 1][j - 1] + std::abs(a[i - 1] - b[j - 1]),
                                   cost[i - 1][j] + skip_cost(a[i - 1]),
                                   cost[i][j - 1] + skip_cost(b[j - 1])});

    Alignment result;
    int i = na, j = nb;
    while (i > 0 || j > 0) {
        if (i > 0 && j > 0 &&
            cost[i][j] == cost[i - 1][j - 1] + std::abs(a[i - 1] - b[j - 1])) {
            result.matched.push_back({i - 1, j - 1});
            result.worst_jump = std::max(result.worst_jump, std::abs(a[i - 1] - b[j - 1]));
            --i;
            --j;
        } else if (i > 0 && (j == 0 || cost[i][j] == cost[i - 1][j] + skip_cost(a[i - 1]))) {
            result.skipped_a.push_back(i - 1);
            result.worst_interior_skip = std::max(result.worst_interior_skip, skip_cost(a[i - 1]));
            --i;
        } else {
            result.skipped_b.push_back(j - 1);
            result.worst_interior_skip = std::max(result.worst_interior_skip, skip_cost(b[j - 1]));
            --j;
        }
    }
    std::reverse(result.matched.begin(), result.matched.end());
    return result;
}

std::vector<double> solve_window(const EdgeDiscretization& d, double energy, double window,
                                 double precision) {
    return d.matrix.eigenvalues_in(energy - window, energy + window, precision);
}

} // namespace

BranchSet track_branches(const std::function<EdgeDiscretization(double)>& family, double energy,
                         double window, std::vector<double> t_grid, const TrackOptions& opts,
                         const Tolerances& tol) {
    if (t_grid.empty()) throw ConfigError("track_branches: empty t grid");
    std::sort(t_grid.begin(), t_grid.end());
    if (t_grid.front() < 0.0 || t_grid.back() >= 1.0)
        throw ConfigError("track_branches: t grid must lie in [0, 1)");

    BranchSet set;
    set.energy = energy;
    set.window = window;

    const double coarse = window / 400.0;
    std::vector<Sample> samples;
    samples.reserve(t_grid.size() + 1);
    for (double t : t_grid) samples.push_back({t, solve_window(family(t), energy, window, coarse)});
    // Close the loop: the sample at t = 1 equals the one at t = 0.
    samples.push_back({1.0, samples.front().eigs});

    // Adaptive refinement until adjacent samples align smoothly.
    const double jump_limit = window / 4.0;
    for (size_t i = 0; i + 1 < samples.size();) {
        const Alignment al =
            align(samples[i].eigs, samples[i + 1].eigs, energy, window);
        const bool bad = al.worst_jump > jump_limit || al.worst_interior_skip > jump_limit;
        if (bad && samples[i + 1].t - samples[i].t > opts.refine_floor) {
            const double tm = 0.5 * (samples[i].t + samples[i + 1].t);
            samples.insert(samples.begin() + i + 1,
                           {tm, solve_window(family(tm), energy, window, coarse)});
            continue;
        }
        if (bad) {
            set.regular = false;
            set.verdict = "refinement budget exhausted near t = " + std::to_string(samples[i].t) +
                          "; non-regular crossing suspected";
        }
        ++i;
    }

    // Stitch matched chains into branch curves.
    set.t_samples.resize(samples.size());
    for (size_t i = 0; i < samples.size(); ++i) set.t_samples[i] = samples[i].t;

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<int> active; // branch id per eigenvalue of the current sample
    for (size_t k = 0; k < samples[0].eigs.size(); ++k) {
        set.branch_values.push_back(std::vector<double>(samples.size(), nan));
        set.branch_values.back()[0] = samples[0].eigs[k];
        active.push_back(static_cast<int>(set.branch_values.size()) - 1);
    }
    for (size_t i = 0; i + 1 < samples.size(); ++i) {
        const Alignment al = align(samples[i].eigs, samples[i + 1].eigs, energy, window);
        std::vector<int> next(samples[i + 1].eigs.size(), -1);
        for (auto [ia, ib] : al.matched) {
            next[ib] = active[ia];
            set.branch_values[active[ia]][i + 1] = samples[i + 1].eigs[ib];
        }
        for (size_t ib = 0; ib < next.size(); ++ib) {
            if (next[ib] >= 0) continue;
            set.branch_values.push_back(std::vector<double>(samples.size(), nan));
            set.branch_values.back()[i + 1] = samples[i + 1].eigs[ib];
            next[ib] = static_cast<int>(set.branch_values.size()) - 1;
        }
        active = std::move(next);
    }

    // Locate crossings of E along each branch by bisection, then merge events.
    const double fine = std::max(1e-12, window * 1e-8);
    std::vector<double> hits;
    for (const auto& branch : set.branch_values) {
        for (size_t i = 0; i + 1 < branch.size(); ++i) {
            if (std::isnan(branch[i]) || std::isnan(branch[i + 1])) continue;
            const double f1 = branch[i] - energy, f2 = branch[i + 1] - energy;
            if (f1 == 0.0 || f1 * f2 >= 0.0) continue;
            double t1 = set.t_samples[i], t2 = set.t_samples[i + 1];
            double l1 = branch[i], l2 = branch[i + 1];
            while (t2 - t1 > opts.locate_tol) {
                const double tm = 0.5 * (t1 + t2);
                const double pred = l1 + (l2 - l1) * (tm - t1) / (t2 - t1);
                const auto eigs = solve_window(family(wrap_unit(tm)), energy, window, fine);
                if (eigs.empty()) break;
                double lm = eigs[0];
                for (double e : eigs)
                    if (std::abs(e - pred) < std::abs(lm - pred)) lm = e;
                if ((l1 - energy) * (lm - energy) <= 0.0) {
                    t2 = tm;
                    l2 = lm;
                } else {
                    t1 = tm;
                    l1 = lm;
                }
            }
            hits.push_back(0.5 * (t1 + t2));
        }
    }
    std::sort(hits.begin(), hits.end());

    const double cluster = std::max(1e-7, 10.0 * opts.locate_tol);
    for (size_t i = 0; i < hits.size();) {
        size_t j = i + 1;
        while (j < hits.size() && hits[j] - hits[j - 1] < cluster) ++j;
        double t_star = 0;
        for (size_t k = i; k < j; ++k) t_star += hits[k];
        t_star /= static_cast<double>(j - i);
        t_star = wrap_unit(t_star);

        CrossingRecord rec;
        rec.t_star = t_star;

        // Multiplicity and localization from a fine solve at t*.
        EdgeDiscretization at_star = family(t_star);
        auto eigs = at_star.matrix.eigenvalues_in(energy - window, energy + window, fine);
        const double slope_scale = std::max(1.0, std::abs(energy));
        const double mult_tol = std::max(100.0 * fine, 1e3 * opts.locate_tol * slope_scale);
        std::vector<double> kernel;
        for (double e : eigs)
            if (std::abs(e - energy) <= mult_tol) kernel.push_back(e);
        rec.multiplicity = static_cast<int>(kernel.size());
        if (rec.multiplicity == 0) {
            // The bisection converged onto a grazing branch; not a crossing.
            i = j;
            continue;
        }
        const Mat vecs = at_star.matrix.eigenvectors(kernel, opts.seed);
        rec.localization = 1.0;
        for (int c = 0; c < vecs.cols(); ++c)
            rec.localization =
                std::min(rec.localization, at_star.localization_fraction(vecs.col(c)));
        rec.localized = rec.localization >= 0.9;

        // Slopes from the crossing fan at t* +- delta: the j-th smallest value
        // on the right pairs with the j-th largest on the left.
        const double delta = opts.slope_delta;
        auto pick_near = [&](double t, int count) {
            auto es = solve_window(family(wrap_unit(t)), energy, window, fine);
            std::sort(es.begin(), es.end(), [&](double x, double y) {
                return std::abs(x - energy) < std::abs(y - energy);
            });
            es.resize(std::min<size_t>(es.size(), count));
            std::sort(es.begin(), es.end());
            return es;
        };
        const auto plus = pick_near(t_star + delta, rec.multiplicity);
        auto minus = pick_near(t_star - delta, rec.multiplicity);
        std::reverse(minus.begin(), minus.end());
        const size_t pairs = std::min(plus.size(), minus.size());
        rec.regular = pairs == static_cast<size_t>(rec.multiplicity);
        for (size_t k = 0; k < pairs; ++k) {
            const double slope = (plus[k] - minus[k]) / (2.0 * delta);
            rec.slopes.push_back(slope);
            if (std::abs(slope) < tol.slope_floor * slope_scale) rec.regular = false;
        }
        if (!rec.regular) {
            set.regular = false;
            if (set.verdict.empty())
                set.verdict = "non-regular crossing at t = " + std::to_string(t_star);
        }
        set.crossings.push_back(std::move(rec));
        i = j;
    }
    return set;
}

FlowReport spectral_flow(const BranchSet& branches, double energy, const Tolerances& tol) {
    (void)energy;
    (void)tol;
    if (!branches.regular)
        throw RegularityError("spectral_flow: " +
                              (branches.verdict.empty() ? std::string("non-regular branch set")
                                                        : branches.verdict));
    FlowReport report;
    report.crossings = branches.crossings;
    int flow = 0;
    for (const auto& rec : branches.crossings) {
        if (!rec.localized) continue; // truncation artifact at the far wall
        int deg = 0;
        for (double s : rec.slopes) deg += (s > 0) ? 1 : -1;
        flow -= deg; // downward crossings count +1
    }
    report.flow = flow;
    report.regular = true;
    std::ostringstream os;
    os << "window " << branches.window << ", samples " << branches.t_samples.size();
    report.provenance = os.str();
    return report;
}

double default_edge_length(const HermitianPotentialFamily& v, double energy,
                           const std::vector<double>& t_grid, double max_periods,
                           const MagnusOptions& opts, const Tolerances& tol) {
    const double period = std::max(v.left_period, v.right_period);
    const double rho = stable_multiplier_radius(v, energy, t_grid, opts, tol);
    double periods = 10.0;
    if (rho > 0 && rho < 1) periods = std::max(periods, 20.0 / std::abs(std::log(rho)) / period);
    periods = std::min(periods, max_periods);
    return periods * period;
}

} // namespace hillflow
