#include "hillflow/indices.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <sstream>

namespace hillflow {

namespace {

double circ_diff(double from, double to) {
    double d = std::fmod(to - from, kTwoPi);
    if (d > kPi) d -= kTwoPi;
    if (d <= -kPi) d += kTwoPi;
    return d;
}

// Eigenphases of a unitary matrix in (-pi, pi], ascending. The Schur form of
// a normal matrix is diagonal, so the triangular diagonal carries the
// spectrum.
std::vector<double> raw_phases(const Mat& u) {
    Eigen::ComplexSchur<Mat> schur(u, /*computeU=*/false);
    std::vector<double> phases(u.rows());
    for (int i = 0; i < u.rows(); ++i) phases[i] = std::arg(schur.matrixT()(i, i));
    std::sort(phases.begin(), phases.end());
    return phases;
}

// Exact minimal-total-displacement matching of continuous phases to the next
// raw phase set (bitmask DP; n is small).
std::vector<int> match_phases(const std::vector<double>& prev, const std::vector<double>& raw) {
    const int n = static_cast<int>(prev.size());
    const int full = (1 << n) - 1;
    std::vector<double> dp(full + 1, std::numeric_limits<double>::infinity());
    std::vector<int> choice(full + 1, -1);
    dp[0] = 0.0;
    for (int mask = 0; mask <= full; ++mask) {
        if (!std::isfinite(dp[mask])) continue;
        const int k = __builtin_popcount(static_cast<unsigned>(mask));
        if (k == n) continue;
        for (int j = 0; j < n; ++j) {
            if (mask & (1 << j)) continue;
            const double c = dp[mask] + std::abs(circ_diff(prev[k], raw[j]));
            if (c < dp[mask | (1 << j)]) {
                dp[mask | (1 << j)] = c;
                choice[mask | (1 << j)] = j;
            }
        }
    }
    std::vector<int> assign(n, -1);
    int mask = full;
    for (int k = n - 1; k >= 0; --k) {
        const int j = choice[mask];
        assign[k] = j;
        mask &= ~(1 << j);
    }
    return assign;
}

struct TrackerOutput {
    int flow = 0;                  // net signed crossings of the base phase
    std::vector<double> locations; // crossing parameters (when requested)
};

// Walk the unitary loop over [0, 1], tracking continuous eigenphases and
// counting signed crossings of `base_phase`. With `locate` set, every
// crossing is additionally pinned down to locate_tol by subdivision.
TrackerOutput track_unitary_loop(const std::function<Mat(double)>& u,
                                 const std::vector<double>& seed_grid, double base_phase,
                                 bool locate, const IndexOptions& opts) {
    TrackerOutput out;

    std::vector<double> ts = seed_grid;
    std::sort(ts.begin(), ts.end());
    if (ts.empty() || ts.front() != 0.0) ts.insert(ts.begin(), 0.0);
    ts.push_back(1.0);

    auto phases_at = [&](double t) { return raw_phases(u(t)); };

    std::vector<double> current = phases_at(0.0);
    const double collision = 1e-9;

    // Iterative stack of interval endpoints still to process.
    std::vector<double> pending(ts.rbegin(), ts.rend());
    double t_now = pending.back();
    pending.pop_back();

    while (!pending.empty()) {
        const double t_next = pending.back();
        const std::vector<double> raw = phases_at(t_next);
        const std::vector<int> assign = match_phases(current, raw);

        const int n = static_cast<int>(current.size());
        std::vector<double> moved(n);
        double max_motion = 0.0;
        bool crossing_here = false;
        bool collision_here = false;
        for (int k = 0; k < n; ++k) {
            const double d = circ_diff(current[k], raw[assign[k]]);
            moved[k] = current[k] + d;
            max_motion = std::max(max_motion, std::abs(d));
            const double a = current[k] - base_phase;
            const double b = moved[k] - base_phase;
            if (std::floor(a / kTwoPi) != std::floor(b / kTwoPi)) crossing_here = true;
            if (std::abs(circ_diff(base_phase, current[k])) < collision ||
                std::abs(circ_diff(base_phase, moved[k])) < collision)
                collision_here = true;
        }

        const double width = t_next - t_now;
        const bool too_fast = max_motion > opts.phase_step_limit;
        const bool need_split =
            (too_fast || collision_here || (locate && crossing_here && width > opts.locate_tol));
        if (need_split && width > opts.refine_floor) {
            pending.push_back(0.5 * (t_now + t_next));
            continue;
        }
        if (too_fast || collision_here)
            throw RegularityError(
                "unitary flow: unresolvable eigenphase behaviour at the base point near t = " +
                std::to_string(t_now));

        for (int k = 0; k < n; ++k) {
            const double a = current[k] - base_phase;
            const double b = moved[k] - base_phase;
            const auto steps = static_cast<int>(std::floor(b / kTwoPi) - std::floor(a / kTwoPi));
            out.flow += steps;
            if (locate && steps != 0) out.locations.push_back(0.5 * (t_now + t_next));
        }
        current = std::move(moved);
        t_now = t_next;
        pending.pop_back();
    }
    return out;
}

} // namespace

int winding_number(const std::vector<Complex>& samples, double* residual) {
    if (samples.size() < 2) throw NumericsError("winding_number: need at least two samples");
    double total = 0.0;
    for (size_t i = 0; i < samples.size(); ++i) {
        const Complex z0 = samples[i];
        const Complex z1 = samples[(i + 1) % samples.size()];
        if (std::abs(z0) < 1e-12 || std::abs(z1) < 1e-12)
            throw NumericsError("winding_number: sample vanishes; upstream data corrupt");
        const double d = std::arg(z1 / z0);
        if (std::abs(d) >= kPi * (1.0 - 1e-12))
            throw NumericsError("winding_number: consecutive samples differ by >= pi; refine");
        total += d;
    }
    const double w = total / kTwoPi;
    const int value = round_to_integer(w, Tolerances{}.int_residual, "winding_number");
    if (residual) *residual = std::abs(w - std::round(w));
    return value;
}

int winding_number(const std::function<Complex(double)>& loop, int initial_samples,
                   double* residual, const Tolerances& tol) {
    std::vector<double> ts(initial_samples);
    for (int i = 0; i < initial_samples; ++i) ts[i] = static_cast<double>(i) / initial_samples;
    ts.push_back(1.0);
    std::vector<Complex> vals;
    vals.reserve(ts.size());
    for (double t : ts) vals.push_back(loop(wrap_unit(t)));

    for (size_t i = 0; i + 1 < ts.size();) {
        if (std::abs(vals[i]) < 1e-12)
            throw NumericsError("winding_number: loop value vanishes");
        const double d = std::abs(std::arg(vals[i + 1] / vals[i]));
        if (d < kPi / 2.0) {
            ++i;
            continue;
        }
        if (ts[i + 1] - ts[i] < 1e-12)
            throw NumericsError("winding_number: refinement floor reached");
        const double tm = 0.5 * (ts[i] + ts[i + 1]);
        ts.insert(ts.begin() + i + 1, tm);
        vals.insert(vals.begin() + i + 1, loop(wrap_unit(tm)));
    }

    double total = 0.0;
    for (size_t i = 0; i + 1 < ts.size(); ++i) total += std::arg(vals[i + 1] / vals[i]);
    const double w = total / kTwoPi;
    const int value = round_to_integer(w, tol.int_residual, "winding_number");
    if (residual) *residual = std::abs(w - std::round(w));
    return value;
}

int unitary_spectral_flow(const UnitaryLoop& loop, Complex base, const IndexOptions& opts,
                          const Tolerances& tol) {
    (void)tol;
    if (std::abs(std::abs(base) - 1.0) > 1e-12)
        throw ConfigError("unitary_spectral_flow: base point must have unit modulus");
    auto u = [&loop](double t) { return loop.at(t); };
    return track_unitary_loop(u, loop.grid, std::arg(base), /*locate=*/false, opts).flow;
}

namespace {

Mat plane_loop_projector(const PlaneLoop& loop, double t) {
    LagrangianFrame f = loop.at(t);
    f.orthonormalize();
    return f.F * f.F.adjoint();
}

struct FormResult {
    Mat basis;
    std::vector<double> eigenvalues;
};

FormResult form_at(const PlaneLoop& loop1, const PlaneLoop& loop2, double t_star, double delta,
                   const Tolerances& tol) {
    const LagrangianFrame f1 = loop1.at(t_star);
    const LagrangianFrame f2 = loop2.at(t_star);
    const Mat basis = intersection_basis(f1, f2, tol.inter_eig, tol);
    FormResult result{basis, {}};
    if (basis.cols() == 0) return result;

    const Mat dp1 =
        (plane_loop_projector(loop1, t_star + delta) - plane_loop_projector(loop1, t_star - delta)) /
        (2.0 * delta);
    const Mat dp2 =
        (plane_loop_projector(loop2, t_star + delta) - plane_loop_projector(loop2, t_star - delta)) /
        (2.0 * delta);

    const int n = f1.n();
    const Mat j = SymplecticSpace(n).J();
    Mat b = basis.adjoint() * j * (dp1 - dp2) * basis;
    const double herm_residual = (b - b.adjoint()).norm();
    if (herm_residual > 1e-4 * std::max(1.0, b.norm()))
        throw NumericsError("crossing form: hermiticity residual " +
                            std::to_string(herm_residual));
    b = 0.5 * (b + b.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<Mat> es(b);
    result.eigenvalues.assign(es.eigenvalues().data(),
                              es.eigenvalues().data() + es.eigenvalues().size());
    return result;
}

} // namespace

std::vector<double> crossing_form_eigenvalues(const PlaneLoop& loop1, const PlaneLoop& loop2,
                                              double t_star, double delta,
                                              const Tolerances& tol) {
    return form_at(loop1, loop2, t_star, delta, tol).eigenvalues;
}

MaslovResult maslov_index(const PlaneLoop& loop1, const PlaneLoop& loop2,
                          const IndexOptions& opts, const Tolerances& tol) {
    // Cache of the comparison unitary; crossing localization re-evaluates it
    // heavily on the bisection trail.
    auto cache = std::make_shared<std::map<double, Mat>>();
    auto w = [&loop1, &loop2, &tol, cache](double t) {
        const double key = wrap_unit(t);
        auto it = cache->find(key);
        if (it != cache->end()) return it->second;
        const Mat u1 = plane_to_unitary(loop1.at(key), tol).U;
        const Mat u2 = plane_to_unitary(loop2.at(key), tol).U;
        Mat value = u2.adjoint() * u1;
        cache->emplace(key, value);
        return value;
    };

    std::vector<double> grid = loop1.grid;
    grid.insert(grid.end(), loop2.grid.begin(), loop2.grid.end());

    const TrackerOutput tracked = track_unitary_loop(w, grid, 0.0, /*locate=*/true, opts);

    MaslovResult result;
    std::vector<double> hits = tracked.locations;
    std::sort(hits.begin(), hits.end());

    const double cluster = std::max(1e-8, 20.0 * opts.locate_tol);
    for (size_t i = 0; i < hits.size();) {
        size_t j = i + 1;
        while (j < hits.size() && hits[j] - hits[j - 1] < cluster) ++j;
        double t_star = 0.0;
        for (size_t k = i; k < j; ++k) t_star += hits[k];
        t_star = wrap_unit(t_star / static_cast<double>(j - i));

        PlaneCrossing crossing;
        crossing.t_star = t_star;
        crossing.dimension =
            intersection_dimension(loop1.at(t_star), loop2.at(t_star), tol.inter_eig, tol);

        const FormResult form = form_at(loop1, loop2, t_star, opts.projector_delta, tol);
        crossing.basis = form.basis;
        crossing.form_eigenvalues = form.eigenvalues;
        if (static_cast<int>(form.eigenvalues.size()) != crossing.dimension)
            throw NumericsError("maslov_index: intersection basis dimension mismatch at t = " +
                                std::to_string(t_star));
        for (double mu : form.eigenvalues) {
            if (std::abs(mu) < tol.slope_floor) crossing.regular = false;
            crossing.signature += (mu > 0) ? 1 : -1;
        }
        if (!crossing.regular)
            throw RegularityError("maslov_index: degenerate crossing form at t = " +
                                  std::to_string(t_star) + "; refuse to emit an integer");
        result.value += crossing.signature;
        result.crossings.push_back(std::move(crossing));
        i = j;
    }
    return result;
}

IndexReport index_I(const PlaneLoop& loop, const IndexOptions& opts, const Tolerances& tol) {
    IndexReport report;

    auto det_loop = [&loop, &tol](double t) {
        return plane_to_unitary(loop.at(t), tol).U.determinant();
    };
    const int samples = std::max<int>(64, static_cast<int>(loop.grid.size()));
    report.by_winding = winding_number(det_loop, samples, &report.winding_residual, tol);

    // The Maslov and flow routes compare against the Dirichlet plane and the
    // base point -1. Loops parked on that reference are handled by rotating
    // it (the index of a closed loop does not depend on the reference).
    const int n = loop.at(0.0).n();
    std::optional<int> maslov_route, flow_route;
    std::string failures;
    for (double alpha : {0.0, 0.7391, 1.4782, 2.2173}) {
        const Complex base = -std::exp(Complex(0.0, alpha));
        try {
            // Crossing the reference plane means U(t) has `base` as an
            // eigenvalue; alpha = 0 is the Dirichlet plane with base -1.
            const BoundaryUnitary ref{base * Mat::Identity(n, n)};
            const PlaneLoop ref_loop = PlaneLoop::constant(unitary_to_plane(ref, tol));
            maslov_route = maslov_index(loop, ref_loop, opts, tol).value;
            flow_route = unitary_spectral_flow(unitary_loop_of(loop, tol), base, opts, tol);
            break;
        } catch (const RegularityError& err) {
            failures += std::string(failures.empty() ? "" : "; ") + err.what();
        }
    }
    if (!maslov_route || !flow_route)
        throw RegularityError("index_I: all reference rotations hit degeneracies: " + failures);
    report.by_maslov_vs_dirichlet = *maslov_route;
    report.by_unitary_flow = *flow_route;

    if (report.by_winding != report.by_maslov_vs_dirichlet ||
        report.by_winding != report.by_unitary_flow) {
        std::ostringstream os;
        os << "index_I: characterizations disagree: winding " << report.by_winding
           << ", Maslov vs Dirichlet " << report.by_maslov_vs_dirichlet << ", unitary flow "
           << report.by_unitary_flow;
        throw ConsistencyError(os.str());
    }
    report.value = report.by_winding;
    return report;
}

} // namespace hillflow
