// config.hpp — experiment configuration: a single self-describing JSON
// document, schema-validated with unknown keys rejected.

#pragma once

#include "hillflow/tube.hpp"

#include <json.hpp>

#include <string>

namespace hillflow {

struct ExperimentConfig {
    nlohmann::ordered_json raw; // normalized document with defaults applied

    std::string experiment;     // probe | indices | flow | junction-flow |
                                // verify-main | verify-junction | tube-junction
    double energy = 0.0;
    unsigned long seed = 1234;
    int truncation = 2;
    VerifyConfig verify;
    std::vector<std::string> switch_names;
    double switch_plateau = 0.5;
    std::string output_path;    // empty -> stdout
    std::string output_format = "json";

    bool has_potential() const { return raw.contains("potential"); }
    bool has_junction() const { return raw.contains("left") && raw.contains("right"); }
    bool has_boundary() const { return raw.contains("boundary"); }
};

ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config_file(const std::string& path);

/// Instantiate a potential family from its config block (including the
/// "tube-truncated" wrapper around the transverse reduction).
HermitianPotentialFamily build_potential(const nlohmann::json& spec);
TubePotentialFamily build_tube_potential(const nlohmann::json& spec);

/// Boundary loop from its config block, at a given channel count.
PlaneLoop build_boundary(const nlohmann::json& spec, int channels);

std::vector<SwitchFunction> build_switches(const ExperimentConfig& config);

} // namespace hillflow
