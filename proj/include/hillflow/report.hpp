// report.hpp — experiment orchestration and machine-readable result bundles.

#pragma once

#include "hillflow/config.hpp"

namespace hillflow {

/// Full result of one experiment run. The document is deterministic for a
/// given config: insertion-ordered keys, no wall-clock metadata.
struct ResultBundle {
    nlohmann::ordered_json doc;

    bool all_consistent() const;
    std::string to_json_text() const { return doc.dump(2) + "\n"; }
};

ResultBundle parse_bundle(const std::string& json_text);

/// Dispatch an experiment; throws ConfigError / RegularityError /
/// ConsistencyError on the corresponding failures.
ResultBundle run(const ExperimentConfig& config);

/// Serialize to the requested format ("json", "csv", "plotdata"); empty path
/// writes to stdout. Output is byte-stable across runs with equal configs.
void emit(const ResultBundle& bundle, const std::string& format, const std::string& path);
std::string render(const ResultBundle& bundle, const std::string& format);

} // namespace hillflow
