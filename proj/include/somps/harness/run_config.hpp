#pragma once

#include "somps/featurize/article.hpp"
#include "somps/harness/split.hpp"
#include "somps/harness/trainer.hpp"
#include "somps/neural/config.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace somps {

/// Every tunable of a pipeline run. Paths are per-invocation and come from
/// command-line flags, so they are not part of the config.
struct RunConfig {
    ModelConfig model;
    TrainOptions training;
    SplitSpec split;
    FeaturizeOptions featurize;
    ModelVariant variant = ModelVariant::somps;

    void validate() const;
};

/// Parses `key = value` lines. `#` starts a comment; blank lines are ignored.
/// Unknown keys, duplicate keys and malformed values throw ParseError.
RunConfig parse_run_config(std::string_view text, const std::string& source = "<config>");
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies one `key=value` override. Throws ArgumentError on unknown keys.
void apply_override(RunConfig& config, std::string_view assignment);

/// Canonical rendering: every key, fixed order, one per line. Parsing the echo
/// reproduces the config exactly.
std::string config_echo(const RunConfig& config);

std::vector<std::string> run_config_keys();

} // namespace somps
