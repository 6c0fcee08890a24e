// hillflow — compute and cross-validate edge spectral flow, Maslov indices
// and winding numbers for periodic families of Hill-type operators.

#include "hillflow/report.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

// Exit-code contract: 0 all checks pass; 2 indices computed but inconsistent;
// 3 regularity refusal; 4 configuration error.
constexpr int kExitOk = 0;
constexpr int kExitInconsistent = 2;
constexpr int kExitRegularity = 3;
constexpr int kExitConfig = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_path;
    std::string format;
    double energy = std::numeric_limits<double>::quiet_NaN();
};

int execute(const CommonArgs& args, const std::string& forced_experiment) {
    try {
        nlohmann::json doc;
        {
            std::ifstream in(args.config_path);
            if (!in)
                throw hillflow::ConfigError("cannot open config file '" + args.config_path + "'");
            in >> doc;
        }
        if (!forced_experiment.empty()) doc["experiment"] = forced_experiment;
        if (!std::isnan(args.energy)) doc["energy"] = args.energy;
        if (!args.out_path.empty()) doc["output"]["path"] = args.out_path;
        if (!args.format.empty()) doc["output"]["format"] = args.format;

        const hillflow::ExperimentConfig config = hillflow::parse_config(doc);
        const hillflow::ResultBundle bundle = hillflow::run(config);
        hillflow::emit(bundle, config.output_format, config.output_path);
        if (!bundle.all_consistent()) {
            std::cerr << "hillflow: indices computed but inconsistent\n";
            return kExitInconsistent;
        }
        return kExitOk;
    } catch (const hillflow::ConfigError& err) {
        std::cerr << "hillflow: config error: " << err.what() << '\n';
        return kExitConfig;
    } catch (const hillflow::RegularityError& err) {
        std::cerr << "hillflow: regularity refusal: " << err.what() << '\n';
        return kExitRegularity;
    } catch (const hillflow::ConsistencyError& err) {
        std::cerr << "hillflow: " << err.what() << '\n';
        return kExitInconsistent;
    } catch (const nlohmann::json::exception& err) {
        std::cerr << "hillflow: config error: " << err.what() << '\n';
        return kExitConfig;
    } catch (const std::exception& err) {
        std::cerr << "hillflow: " << err.what() << '\n';
        return kExitRegularity;
    }
}

void add_common(CLI::App* cmd, CommonArgs& args, bool with_energy = true) {
    cmd->add_option("-c,--config", args.config_path, "experiment configuration (JSON)")
        ->required();
    cmd->add_option("-o,--out", args.out_path, "output path (default: stdout)");
    cmd->add_option("--format", args.format, "output format: json | csv | plotdata");
    if (with_energy) cmd->add_option("-E,--energy", args.energy, "override the probe energy");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"numerical laboratory for bulk-edge indices of Hill-type operator families"};
    app.require_subcommand(1);

    CommonArgs args;
    std::string forced;

    auto* probe = app.add_subcommand("probe", "classify an energy against the bulk spectrum");
    add_common(probe, args);
    probe->callback([&forced]() { forced = "probe"; });

    auto* indices = app.add_subcommand("indices", "winding / Maslov / unitary-flow index of a loop");
    add_common(indices, args);
    indices->callback([&forced]() { forced = "indices"; });

    auto* flow = app.add_subcommand("flow", "edge or junction spectral flow");
    add_common(flow, args);
    flow->callback([&forced]() { forced = ""; }); // experiment from the config (flow | junction-flow)

    auto* verify = app.add_subcommand("verify", "theorem consistency suites");
    add_common(verify, args);
    verify->callback([&forced]() { forced = ""; }); // verify-main | verify-junction | tube-junction

    auto* runcmd = app.add_subcommand("run", "run the experiment named in the config");
    add_common(runcmd, args);
    runcmd->callback([&forced]() { forced = ""; });

    CLI11_PARSE(app, argc, argv);
    return execute(args, forced);
}
