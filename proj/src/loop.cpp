#include "hillflow/loop.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <map>
#include <memory>

namespace hillflow {

namespace {

std::vector<double> torus_grid(int samples) {
    std::vector<double> g(samples);
    for (int i = 0; i < samples; ++i) g[i] = static_cast<double>(i) / samples;
    return g;
}

} // namespace

PlaneLoop PlaneLoop::constant(const LagrangianFrame& frame, int samples) {
    PlaneLoop loop;
    loop.at_raw = [frame](double) { return frame; };
    loop.grid = torus_grid(samples);
    return loop;
}

PlaneLoop PlaneLoop::of(std::function<LagrangianFrame(double)> fn, int samples) {
    PlaneLoop loop;
    loop.at_raw = std::move(fn);
    loop.grid = torus_grid(samples);
    return loop;
}

PlaneLoop PlaneLoop::robin(int n, int samples) {
    return of(
        [n](double t) {
            const Mat theta = std::sin(kPi * t) * Mat::Identity(n, n);
            const Mat pi_block = std::cos(kPi * t) * Mat::Identity(n, n);
            return robin_plane(theta, pi_block);
        },
        samples);
}

void PlaneLoop::refine(const Tolerances& tol, double floor) {
    (void)tol;
    std::vector<double> ts = grid;
    ts.push_back(1.0); // closure interval back to t = 0
    std::vector<LagrangianFrame> frames;
    frames.reserve(ts.size());
    for (double t : ts) frames.push_back(at(t));

    for (size_t i = 0; i + 1 < ts.size();) {
        if (plane_distance(frames[i], frames[i + 1]) < 0.2) {
            ++i;
            continue;
        }
        if (ts[i + 1] - ts[i] <= floor)
            throw RegularityError("PlaneLoop: refinement floor reached; loop is not "
                                  "continuous at t = " +
                                  std::to_string(ts[i]));
        const double tm = 0.5 * (ts[i] + ts[i + 1]);
        ts.insert(ts.begin() + i + 1, tm);
        frames.insert(frames.begin() + i + 1, at(tm));
    }
    ts.pop_back();
    grid = std::move(ts);
}

UnitaryLoop UnitaryLoop::of(std::function<Mat(double)> fn, int samples) {
    UnitaryLoop loop;
    loop.at_raw = std::move(fn);
    loop.grid = torus_grid(samples);
    return loop;
}

UnitaryLoop UnitaryLoop::from_samples(const std::vector<Mat>& samples) {
    if (samples.size() < 2) throw ConfigError("UnitaryLoop: need at least two samples");
    const auto m = samples.size();
    const Tolerances tol;
    for (const auto& u : samples) BoundaryUnitary{u}.require_valid(tol);

    // Precompute the geodesic generators between consecutive samples.
    auto logs = std::make_shared<std::vector<Mat>>();
    logs->reserve(m);
    for (size_t k = 0; k < m; ++k) {
        const Mat step = samples[k].adjoint() * samples[(k + 1) % m];
        if ((step + Mat::Identity(step.rows(), step.cols())).norm() < 1e-9)
            throw ConfigError("UnitaryLoop: consecutive samples are antipodal; refine input");
        logs->push_back(step.log());
    }
    auto data = std::make_shared<std::vector<Mat>>(samples);

    UnitaryLoop loop;
    loop.grid = torus_grid(static_cast<int>(m));
    loop.at_raw = [data, logs, m](double t) {
        const double pos = t * static_cast<double>(m);
        auto k = static_cast<size_t>(pos);
        if (k >= m) k = m - 1;
        const double s = pos - static_cast<double>(k);
        return (*data)[k] * (s * (*logs)[k]).exp().eval();
    };
    return loop;
}

UnitaryLoop unitary_loop_of(const PlaneLoop& planes, const Tolerances& tol) {
    UnitaryLoop loop;
    loop.grid = planes.grid;
    auto frames = planes.at_raw;
    loop.at_raw = [frames, tol](double t) {
        return plane_to_unitary(frames(wrap_unit(t)), tol).U;
    };
    return loop;
}

std::function<LagrangianFrame(double)> memoized(std::function<LagrangianFrame(double)> fn) {
    auto cache = std::make_shared<std::map<double, LagrangianFrame>>();
    return [cache, fn](double t) {
        auto it = cache->find(t);
        if (it != cache->end()) return it->second;
        LagrangianFrame f = fn(t);
        cache->emplace(t, f);
        return f;
    };
}

} // namespace hillflow
