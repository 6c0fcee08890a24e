#include "hillflow/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace hillflow {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(where + ": unknown key '" + it.key() + "'");
}

double number_in(const json& j, const std::string& key, double fallback, double lo, double hi,
                 const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number()) throw ConfigError(where + "." + key + ": expected a number");
    const double v = j.at(key).get<double>();
    if (!(v >= lo && v <= hi))
        throw ConfigError(where + "." + key + ": value " + std::to_string(v) +
                          " outside [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
}

int integer_in(const json& j, const std::string& key, int fallback, int lo, int hi,
               const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j.at(key).is_number_integer())
        throw ConfigError(where + "." + key + ": expected an integer");
    const int v = j.at(key).get<int>();
    if (v < lo || v > hi)
        throw ConfigError(where + "." + key + ": value outside [" + std::to_string(lo) + ", " +
                          std::to_string(hi) + "]");
    return v;
}

Tolerances parse_tolerances(const json& j) {
    Tolerances tol;
    if (!j.contains("tolerances")) return tol;
    const json& t = j.at("tolerances");
    check_keys(t,
               {"iso", "uni", "rank", "inter_eig", "symp", "herm", "circle", "circle_guard",
                "loop", "slope_floor", "int_residual", "dirichlet_angle"},
               "tolerances");
    tol.iso = number_in(t, "iso", tol.iso, 1e-15, 1e-2, "tolerances");
    tol.uni = number_in(t, "uni", tol.uni, 1e-15, 1e-2, "tolerances");
    tol.rank = number_in(t, "rank", tol.rank, 1e-15, 1e-2, "tolerances");
    tol.inter_eig = number_in(t, "inter_eig", tol.inter_eig, 1e-12, 1e-1, "tolerances");
    tol.symp = number_in(t, "symp", tol.symp, 1e-15, 1e-2, "tolerances");
    tol.herm = number_in(t, "herm", tol.herm, 1e-15, 1e-2, "tolerances");
    tol.circle = number_in(t, "circle", tol.circle, 1e-12, 1e-1, "tolerances");
    tol.circle_guard = number_in(t, "circle_guard", tol.circle_guard, 1.0, 1e3, "tolerances");
    tol.loop = number_in(t, "loop", tol.loop, 1e-12, 1.0, "tolerances");
    tol.slope_floor = number_in(t, "slope_floor", tol.slope_floor, 1e-12, 1.0, "tolerances");
    tol.int_residual = number_in(t, "int_residual", tol.int_residual, 1e-6, 0.49, "tolerances");
    tol.dirichlet_angle =
        number_in(t, "dirichlet_angle", tol.dirichlet_angle, 1e-12, 1e-2, "tolerances");
    return tol;
}

} // namespace

HermitianPotentialFamily build_potential(const json& spec) {
    if (!spec.is_object() || !spec.contains("type"))
        throw ConfigError("potential: expected an object with a 'type'");
    const std::string type = spec.at("type").get<std::string>();

    if (type == "flat") {
        check_keys(spec, {"type", "level", "channels"}, "potential(flat)");
        const int n = integer_in(spec, "channels", 1, 1, 8, "potential(flat)");
        const double level = number_in(spec, "level", 0.0, -1e6, 1e6, "potential(flat)");
        return flat_potential(n, level);
    }
    if (type == "mathieu") {
        check_keys(spec, {"type"}, "potential(mathieu)");
        return mathieu_potential();
    }
    if (type == "dislocation") {
        check_keys(spec, {"type", "base", "rate"}, "potential(dislocation)");
        if (!spec.contains("base")) throw ConfigError("potential(dislocation): missing 'base'");
        const int rate = integer_in(spec, "rate", 1, -8, 8, "potential(dislocation)");
        if (rate == 0) throw ConfigError("potential(dislocation): rate must be nonzero");
        return dislocation_potential(build_potential(spec.at("base")), rate);
    }
    if (type == "square-well") {
        check_keys(spec, {"type", "depth", "half_width"}, "potential(square-well)");
        return square_well_potential(
            number_in(spec, "depth", 2.0, -1e6, 1e6, "potential(square-well)"),
            number_in(spec, "half_width", 1.0, 1e-3, 1e3, "potential(square-well)"));
    }
    if (type == "diagonal") {
        check_keys(spec, {"type", "channels"}, "potential(diagonal)");
        if (!spec.contains("channels") || !spec.at("channels").is_array())
            throw ConfigError("potential(diagonal): 'channels' must be an array");
        std::vector<HermitianPotentialFamily> channels;
        for (const auto& c : spec.at("channels")) channels.push_back(build_potential(c));
        if (channels.size() > 8) throw ConfigError("potential(diagonal): too many channels");
        return diagonal_potential(channels);
    }
    if (type == "tabulated") {
        check_keys(spec, {"type", "samples", "period"}, "potential(tabulated)");
        if (!spec.contains("samples") || !spec.at("samples").is_array())
            throw ConfigError("potential(tabulated): 'samples' must be an array");
        std::vector<double> samples;
        for (const auto& s : spec.at("samples")) samples.push_back(s.get<double>());
        return tabulated_potential(samples,
                                   number_in(spec, "period", 1.0, 1e-3, 1e3, "potential"));
    }
    if (type == "frozen") {
        check_keys(spec, {"type", "base"}, "potential(frozen)");
        HermitianPotentialFamily base = build_potential(spec.at("base"));
        HermitianPotentialFamily frozen = base;
        frozen.label = "frozen(" + base.label + ")";
        auto eval = base.evaluate;
        frozen.evaluate = [eval](double, double x) { return eval(0.0, x); };
        return frozen;
    }
    if (type == "tube-truncated") {
        check_keys(spec, {"type", "base", "K"}, "potential(tube-truncated)");
        const int k = integer_in(spec, "K", 2, 0, 6, "potential(tube-truncated)");
        return fourier_truncate(build_tube_potential(spec.at("base")), k).channels;
    }
    throw ConfigError("potential: unknown type '" + type + "'");
}

TubePotentialFamily build_tube_potential(const json& spec) {
    if (!spec.is_object() || !spec.contains("type"))
        throw ConfigError("tube potential: expected an object with a 'type'");
    const std::string type = spec.at("type").get<std::string>();
    if (type == "tube-cosine") {
        check_keys(spec, {"type"}, "potential(tube-cosine)");
        return tube_cosine_potential();
    }
    if (type == "tube-flat") {
        check_keys(spec, {"type", "level"}, "potential(tube-flat)");
        return tube_flat_potential(number_in(spec, "level", 0.0, -1e6, 1e6, "tube-flat"));
    }
    if (type == "frozen") {
        check_keys(spec, {"type", "base"}, "potential(frozen tube)");
        return tube_frozen(build_tube_potential(spec.at("base")));
    }
    throw ConfigError("tube potential: unknown type '" + type + "'");
}

PlaneLoop build_boundary(const json& spec, int channels) {
    if (!spec.is_object() || !spec.contains("type"))
        throw ConfigError("boundary: expected an object with a 'type'");
    const std::string type = spec.at("type").get<std::string>();
    if (type == "dirichlet") {
        check_keys(spec, {"type"}, "boundary(dirichlet)");
        return PlaneLoop::constant(dirichlet_plane(channels));
    }
    if (type == "neumann") {
        check_keys(spec, {"type"}, "boundary(neumann)");
        return PlaneLoop::constant(neumann_plane(channels));
    }
    if (type == "robin-loop") {
        check_keys(spec, {"type"}, "boundary(robin-loop)");
        return PlaneLoop::robin(channels);
    }
    if (type == "unitary-loop") {
        check_keys(spec, {"type", "samples"}, "boundary(unitary-loop)");
        if (!spec.contains("samples") || !spec.at("samples").is_array() ||
            spec.at("samples").size() < 2)
            throw ConfigError("boundary(unitary-loop): need an array of >= 2 samples");
        std::vector<Mat> samples;
        for (const auto& s : spec.at("samples")) {
            if (!s.is_array() || static_cast<int>(s.size()) != channels)
                throw ConfigError("boundary(unitary-loop): sample has wrong row count");
            Mat u(channels, channels);
            for (int r = 0; r < channels; ++r) {
                const auto& row = s.at(r);
                if (!row.is_array() || static_cast<int>(row.size()) != channels)
                    throw ConfigError("boundary(unitary-loop): sample has wrong column count");
                for (int c = 0; c < channels; ++c) {
                    const auto& cell = row.at(c);
                    if (!cell.is_array() || cell.size() != 2)
                        throw ConfigError("boundary(unitary-loop): entries are [re, im] pairs");
                    u(r, c) = Complex(cell.at(0).get<double>(), cell.at(1).get<double>());
                }
            }
            samples.push_back(std::move(u));
        }
        const UnitaryLoop uloop = UnitaryLoop::from_samples(samples);
        PlaneLoop loop;
        loop.grid = uloop.grid;
        auto at = uloop.at_raw;
        loop.at_raw = [at](double t) { return unitary_to_plane(BoundaryUnitary{at(t)}); };
        return loop;
    }
    throw ConfigError("boundary: unknown type '" + type + "'");
}

std::vector<SwitchFunction> build_switches(const ExperimentConfig& config) {
    std::vector<SwitchFunction> out;
    for (const auto& name : config.switch_names) {
        if (name == "step")
            out.push_back(step_switch(config.switch_plateau));
        else if (name == "smooth")
            out.push_back(smoothstep_switch(config.switch_plateau));
        else
            throw ConfigError("switches: unknown switch '" + name + "'");
    }
    return out;
}

ExperimentConfig parse_config(const json& doc) {
    check_keys(doc,
               {"experiment", "potential", "left", "right", "boundary", "energy", "t_samples",
                "window", "length", "grid_per_period", "truncation", "switches",
                "switch_plateau", "tolerances", "seed", "output", "magnus_steps"},
               "config");
    ExperimentConfig cfg;
    if (!doc.contains("experiment"))
        throw ConfigError("config: missing 'experiment'");
    cfg.experiment = doc.at("experiment").get<std::string>();
    const std::set<std::string> known = {"probe",       "indices",        "flow",
                                         "junction-flow", "verify-main",  "verify-junction",
                                         "tube-junction"};
    if (!known.count(cfg.experiment))
        throw ConfigError("config: unknown experiment '" + cfg.experiment + "'");

    cfg.energy = number_in(doc, "energy", 0.0, -1e9, 1e9, "config");
    cfg.seed = static_cast<unsigned long>(integer_in(doc, "seed", 1234, 0, 1 << 30, "config"));
    cfg.truncation = integer_in(doc, "truncation", 2, 0, 6, "config");

    cfg.verify.t_samples = integer_in(doc, "t_samples", 64, 4, 4096, "config");
    cfg.verify.window = number_in(doc, "window", 0.5, 1e-6, 1e6, "config");
    cfg.verify.length = number_in(doc, "length", 0.0, 0.0, 1e6, "config");
    cfg.verify.grid_per_period = integer_in(doc, "grid_per_period", 64, 16, 2048, "config");
    cfg.verify.magnus.steps_per_period =
        integer_in(doc, "magnus_steps", 64, 8, 4096, "config");
    cfg.verify.tol = parse_tolerances(doc);

    cfg.switch_names = {"step", "smooth"};
    if (doc.contains("switches")) {
        if (!doc.at("switches").is_array() || doc.at("switches").empty())
            throw ConfigError("config.switches: expected a nonempty array");
        cfg.switch_names.clear();
        for (const auto& s : doc.at("switches")) cfg.switch_names.push_back(s.get<std::string>());
    }
    cfg.switch_plateau = number_in(doc, "switch_plateau", 0.5, 1e-3, 1e3, "config");

    if (doc.contains("output")) {
        const json& out = doc.at("output");
        check_keys(out, {"path", "format"}, "config.output");
        if (out.contains("path")) cfg.output_path = out.at("path").get<std::string>();
        if (out.contains("format")) cfg.output_format = out.at("format").get<std::string>();
        if (cfg.output_format != "json" && cfg.output_format != "csv" &&
            cfg.output_format != "plotdata")
            throw ConfigError("config.output.format: must be json, csv or plotdata");
    }

    // Structural requirements per experiment.
    if (cfg.experiment == "verify-main" || cfg.experiment == "flow") {
        if (!doc.contains("potential")) throw ConfigError("config: missing 'potential'");
        if (!doc.contains("boundary")) throw ConfigError("config: missing 'boundary'");
    }
    if (cfg.experiment == "probe" && !doc.contains("potential"))
        throw ConfigError("config: missing 'potential'");
    if (cfg.experiment == "verify-junction" || cfg.experiment == "junction-flow" ||
        cfg.experiment == "tube-junction") {
        if (!doc.contains("left") || !doc.contains("right"))
            throw ConfigError("config: junction experiments need 'left' and 'right'");
    }
    if (cfg.experiment == "indices" && !doc.contains("boundary") && !doc.contains("potential"))
        throw ConfigError("config: 'indices' needs a boundary loop or a potential");

    // Validate the nested blocks eagerly so malformed configs fail fast.
    if (doc.contains("potential") && cfg.experiment != "tube-junction")
        (void)build_potential(doc.at("potential"));
    if (cfg.experiment == "tube-junction") {
        (void)build_tube_potential(doc.at("left"));
        (void)build_tube_potential(doc.at("right"));
    } else if (doc.contains("left")) {
        (void)build_potential(doc.at("left"));
        (void)build_potential(doc.at("right"));
    }

    cfg.raw = ordered_json(doc);
    return cfg;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& err) {
        throw ConfigError(std::string("config parse error: ") + err.what());
    }
    return parse_config(doc);
}

} // namespace hillflow
