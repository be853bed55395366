#pragma once

#include "somps/featurize/article.hpp"
#include "somps/harness/split.hpp"
#include "somps/neural/config.hpp"
#include "somps/neural/params.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace somps {

inline constexpr std::uint32_t kFeatureFormatVersion = 1;
inline constexpr std::uint32_t kCheckpointFormatVersion = 1;
inline constexpr int kReportFormatVersion = 1;

/// Contents of features.bin: standardized features, the fitted statistics and
/// the split they were fitted on.
struct FeatureCache {
    std::string config_echo;
    SplitSpec split_spec;
    Splits splits;
    FeatureSet features;
};

void write_feature_cache(const FeatureCache& cache, std::ostream& out);
void save_feature_cache(const FeatureCache& cache, const std::filesystem::path& path);
FeatureCache read_feature_cache(std::istream& in, const std::string& source);
FeatureCache load_feature_cache(const std::filesystem::path& path);

struct Checkpoint {
    std::string config_echo;
    ModelVariant variant = ModelVariant::somps;
    ModelConfig config;
    FeatureDims dims;
    ModelParams params;
    std::size_t best_epoch = 0;
};

void write_checkpoint(const Checkpoint& checkpoint, std::ostream& out);
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint read_checkpoint(std::istream& in, const std::string& source);
Checkpoint load_checkpoint(const std::filesystem::path& path);

} // namespace somps
