#include "hillflow/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace hillflow {

using nlohmann::ordered_json;

namespace {

std::string gap_name(GapClass g) {
    switch (g) {
        case GapClass::InGap: return "in-gap";
        case GapClass::EssentialSpectrum: return "essential-spectrum";
        default: return "undecided";
    }
}

ordered_json probe_json(const EnergyProbe& probe) {
    return ordered_json{{"energy", probe.energy},
                        {"left", gap_name(probe.left)},
                        {"right", gap_name(probe.right)},
                        {"circle_margin", probe.circle_margin},
                        {"in_gap", probe.in_gap()}};
}

ordered_json crossing_json(const CrossingRecord& rec) {
    return ordered_json{{"t_star", rec.t_star},
                        {"multiplicity", rec.multiplicity},
                        {"slopes", rec.slopes},
                        {"localization", rec.localization},
                        {"localized", rec.localized},
                        {"regular", rec.regular}};
}

ordered_json flow_json(const FlowReport& flow) {
    ordered_json crossings = ordered_json::array();
    for (const auto& rec : flow.crossings) crossings.push_back(crossing_json(rec));
    return ordered_json{{"flow", flow.flow},
                        {"residual", 0.0},
                        {"crossings", crossings},
                        {"regular", flow.regular},
                        {"provenance", flow.provenance}};
}

ordered_json index_json(const IndexReport& report) {
    return ordered_json{{"value", report.value},
                        {"residual", report.winding_residual},
                        {"by_winding", report.by_winding},
                        {"by_maslov_vs_dirichlet", report.by_maslov_vs_dirichlet},
                        {"by_unitary_flow", report.by_unitary_flow}};
}

ordered_json maslov_json(const MaslovResult& mas) {
    ordered_json crossings = ordered_json::array();
    for (const auto& c : mas.crossings)
        crossings.push_back(ordered_json{{"t_star", c.t_star},
                                         {"dimension", c.dimension},
                                         {"form_eigenvalues", c.form_eigenvalues},
                                         {"signature", c.signature}});
    return ordered_json{{"value", mas.value}, {"residual", 0.0}, {"crossings", crossings}};
}

ordered_json check_json(const CrossingCheck& check) {
    return ordered_json{{"t_star", check.t_star},
                        {"edge_multiplicity", check.edge_multiplicity},
                        {"plane_intersection", check.plane_intersection},
                        {"kernel_ok", check.kernel_ok},
                        {"form_eigenvalues", check.form_eigenvalues},
                        {"neg_slopes", check.neg_slopes},
                        {"worst_relative_error", check.worst_relative_error},
                        {"hellman_feynman_ok", check.hellman_feynman_ok}};
}

// Branch curves of a tracked family: one series per branch, NaN-free rows.
ordered_json branch_series(const std::function<EdgeDiscretization(double)>& family,
                           double energy, double window, const VerifyConfig& config) {
    const BranchSet set = track_branches(family, energy, window, config.t_grid(), config.track,
                                         config.tol);
    ordered_json series = ordered_json::array();
    for (size_t b = 0; b < set.branch_values.size(); ++b) {
        ordered_json points = ordered_json::array();
        for (size_t i = 0; i < set.t_samples.size(); ++i) {
            const double v = set.branch_values[b][i];
            if (!std::isnan(v)) points.push_back({set.t_samples[i], v});
        }
        series.push_back(ordered_json{{"branch", b}, {"points", points}});
    }
    return series;
}

ordered_json phase_trace(const PlaneLoop& loop, const Tolerances& tol, int samples = 256) {
    ordered_json points = ordered_json::array();
    double unwrapped = 0.0;
    Complex prev(0, 0);
    for (int i = 0; i <= samples; ++i) {
        const double t = static_cast<double>(i) / samples;
        const Complex det = plane_to_unitary(loop.at(t), tol).U.determinant();
        if (i == 0)
            unwrapped = std::arg(det);
        else
            unwrapped += std::arg(det / prev);
        prev = det;
        points.push_back({t, unwrapped});
    }
    return points;
}

ordered_json main_report_json(const MainTheoremReport& report) {
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) checks.push_back(check_json(c));
    return ordered_json{{"probe", probe_json(report.probe)},
                        {"spectral_flow", flow_json(report.flow)},
                        {"maslov", maslov_json(report.maslov)},
                        {"index_plus", index_json(report.index_plus)},
                        {"index_boundary", index_json(report.index_boundary)},
                        {"index_difference", report.index_difference()},
                        {"crossing_checks", checks},
                        {"length", report.length},
                        {"nodes", report.nodes},
                        {"consistent", report.consistent}};
}

ordered_json junction_report_json(const JunctionTheoremReport& report) {
    ordered_json flows = ordered_json::array();
    for (const auto& f : report.flows)
        flows.push_back(ordered_json{{"switch", f.switch_name}, {"flow", flow_json(f.flow)}});
    ordered_json checks = ordered_json::array();
    for (const auto& c : report.checks) checks.push_back(check_json(c));
    return ordered_json{{"probe_left", probe_json(report.probe_left)},
                        {"probe_right", probe_json(report.probe_right)},
                        {"flows", flows},
                        {"maslov", maslov_json(report.maslov)},
                        {"index_right_plus", index_json(report.index_right_plus)},
                        {"index_left_minus", index_json(report.index_left_minus)},
                        {"index_difference", report.index_difference()},
                        {"crossing_checks", checks},
                        {"length", report.length},
                        {"nodes", report.nodes},
                        {"switch_independent", report.switch_independent},
                        {"consistent", report.consistent}};
}

ordered_json meta_json(const ExperimentConfig& config) {
    const Tolerances& tol = config.verify.tol;
    return ordered_json{{"version", "hillflow 0.1.0"},
                        {"seed", config.seed},
                        {"tolerances",
                         ordered_json{{"iso", tol.iso},
                                      {"uni", tol.uni},
                                      {"rank", tol.rank},
                                      {"inter_eig", tol.inter_eig},
                                      {"symp", tol.symp},
                                      {"herm", tol.herm},
                                      {"circle", tol.circle},
                                      {"circle_guard", tol.circle_guard},
                                      {"loop", tol.loop},
                                      {"slope_floor", tol.slope_floor},
                                      {"int_residual", tol.int_residual}}}};
}

} // namespace

bool ResultBundle::all_consistent() const {
    bool ok = true;
    if (doc.contains("data") && doc.at("data").is_object()) {
        const auto& data = doc.at("data");
        if (data.contains("consistent")) ok = ok && data.at("consistent").get<bool>();
    }
    return ok;
}

ResultBundle parse_bundle(const std::string& json_text) {
    ResultBundle bundle;
    try {
        bundle.doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::parse_error& err) {
        throw ConfigError(std::string("bundle parse error: ") + err.what());
    }
    return bundle;
}

ResultBundle run(const ExperimentConfig& config) {
    ResultBundle bundle;
    bundle.doc["experiment"] = config.experiment;
    bundle.doc["config"] = config.raw;
    bundle.doc["meta"] = meta_json(config);

    const VerifyConfig& vc = config.verify;

    if (config.experiment == "probe") {
        const HermitianPotentialFamily v = build_potential(config.raw.at("potential"));
        const EnergyProbe probe = classify_energy(v, config.energy, vc.t_grid(), vc.magnus,
                                                  vc.tol);
        bundle.doc["data"] =
            ordered_json{{"probe", probe_json(probe)}, {"consistent", true}};
        return bundle;
    }

    if (config.experiment == "indices") {
        ordered_json data;
        PlaneLoop loop = [&]() {
            if (config.has_boundary()) {
                const int channels = config.has_potential()
                                         ? build_potential(config.raw.at("potential")).n
                                         : 1;
                return build_boundary(config.raw.at("boundary"), channels);
            }
            const HermitianPotentialFamily v = build_potential(config.raw.at("potential"));
            return ell_plus_loop(v, config.energy, vc);
        }();
        loop.refine(vc.tol);
        const IndexReport report = index_I(loop, vc.index, vc.tol);
        data["index"] = index_json(report);
        data["phase_trace"] = phase_trace(loop, vc.tol);
        data["consistent"] = true;
        bundle.doc["data"] = std::move(data);
        return bundle;
    }

    if (config.experiment == "flow") {
        const HermitianPotentialFamily v = build_potential(config.raw.at("potential"));
        const MainTheoremReport report =
            verify_main_theorem(v, build_boundary(config.raw.at("boundary"), v.n),
                                config.energy, vc);
        ordered_json data;
        data["spectral_flow"] = flow_json(report.flow);
        data["length"] = report.length;
        data["nodes"] = report.nodes;
        data["consistent"] = report.consistent;
        VerifyConfig branch_cfg = vc;
        branch_cfg.length = report.length;
        PlaneLoop boundary = build_boundary(config.raw.at("boundary"), v.n);
        auto family = [&](double t) {
            return discretize_edge(v, t, boundary.at(t), report.length, report.nodes, vc.tol);
        };
        data["branches"] = branch_series(family, config.energy, vc.window, branch_cfg);
        bundle.doc["data"] = std::move(data);
        return bundle;
    }

    if (config.experiment == "junction-flow" || config.experiment == "verify-junction") {
        const HermitianPotentialFamily left = build_potential(config.raw.at("left"));
        const HermitianPotentialFamily right = build_potential(config.raw.at("right"));
        const JunctionTheoremReport report = verify_junction_theorem(
            left, right, build_switches(config), config.energy, vc);
        bundle.doc["data"] = junction_report_json(report);
        return bundle;
    }

    if (config.experiment == "verify-main") {
        const HermitianPotentialFamily v = build_potential(config.raw.at("potential"));
        const MainTheoremReport report = verify_main_theorem(
            v, build_boundary(config.raw.at("boundary"), v.n), config.energy, vc);
        bundle.doc["data"] = main_report_json(report);
        return bundle;
    }

    if (config.experiment == "tube-junction") {
        const TubePotentialFamily left = build_tube_potential(config.raw.at("left"));
        const TubePotentialFamily right = build_tube_potential(config.raw.at("right"));
        const TubeJunctionReport report = tube_junction_flow(
            left, right, build_switches(config), config.energy, config.truncation, vc);
        ordered_json reports = ordered_json::array();
        for (size_t i = 0; i < report.reports.size(); ++i)
            reports.push_back(ordered_json{{"K", report.truncations[i]},
                                           {"report", junction_report_json(report.reports[i])}});
        bundle.doc["data"] = ordered_json{{"per_truncation", reports},
                                          {"truncation_stable", report.truncation_stable},
                                          {"consistent", report.consistent}};
        return bundle;
    }

    throw ConfigError("run: unhandled experiment '" + config.experiment + "'");
}

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

void render_csv(const ResultBundle& bundle, std::ostream& os) {
    os << "t,branch,lambda\n";
    const auto& doc = bundle.doc;
    if (doc.contains("data") && doc.at("data").contains("branches")) {
        for (const auto& series : doc.at("data").at("branches")) {
            const auto id = series.at("branch").get<int>();
            for (const auto& p : series.at("points"))
                os << format_double(p.at(0).get<double>()) << ',' << id << ','
                   << format_double(p.at(1).get<double>()) << '\n';
        }
    }
    os << "# index summary\n";
    if (doc.contains("data")) {
        const auto& data = doc.at("data");
        auto put = [&os](const std::string& name, const ordered_json& j) {
            os << "# " << name << " = " << j.at("value").get<int>() << " (residual "
               << format_double(j.at("residual").get<double>()) << ")\n";
        };
        if (data.contains("index")) put("I", data.at("index"));
        if (data.contains("index_plus")) put("I(l+)", data.at("index_plus"));
        if (data.contains("index_boundary")) put("I(l#)", data.at("index_boundary"));
        if (data.contains("maslov")) put("Mas", data.at("maslov"));
        if (data.contains("spectral_flow"))
            os << "# Sf = " << data.at("spectral_flow").at("flow").get<int>() << "\n";
        if (data.contains("consistent"))
            os << "# consistent = " << (data.at("consistent").get<bool>() ? "yes" : "no") << "\n";
    }
}

void render_plotdata(const ResultBundle& bundle, std::ostream& os) {
    const auto& doc = bundle.doc;
    if (!doc.contains("data")) return;
    const auto& data = doc.at("data");
    if (data.contains("branches")) {
        for (const auto& series : data.at("branches")) {
            os << "# branch " << series.at("branch").get<int>() << "\n";
            for (const auto& p : series.at("points"))
                os << format_double(p.at(0).get<double>()) << ' '
                   << format_double(p.at(1).get<double>()) << '\n';
            os << '\n';
        }
    }
    if (data.contains("phase_trace")) {
        os << "# det-U phase trace\n";
        for (const auto& p : data.at("phase_trace"))
            os << format_double(p.at(0).get<double>()) << ' '
               << format_double(p.at(1).get<double>()) << '\n';
        os << '\n';
    }
}

} // namespace

std::string render(const ResultBundle& bundle, const std::string& format) {
    if (format == "json") return bundle.to_json_text();
    std::ostringstream os;
    if (format == "csv")
        render_csv(bundle, os);
    else if (format == "plotdata")
        render_plotdata(bundle, os);
    else
        throw ConfigError("emit: unknown format '" + format + "'");
    return os.str();
}

void emit(const ResultBundle& bundle, const std::string& format, const std::string& path) {
    const std::string text = render(bundle, format);
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("emit: cannot open output path '" + path + "'");
    out << text;
    if (!out) throw ConfigError("emit: write failed for '" + path + "'");
}

} // namespace hillflow
