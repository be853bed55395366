#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace somps {

/// Which fused inputs feed the classifier.
enum class ModelVariant : std::uint8_t {
    somps = 0,    ///< social-interaction graph + publisher/news statistics
    sig_only = 1, ///< graph/text branches only; statistics slot zeroed
    pns_only = 2, ///< statistics only; graph/text slot zeroed
};

std::string_view to_string(ModelVariant v);
/// Accepts "somps", "sig" and "pns" (and the long names "sig_only" / "pns_only").
std::optional<ModelVariant> parse_variant(std::string_view s);

struct ModelConfig {
    std::size_t gcn_layers = 3;
    std::size_t gcn_output_dim = 16;
    std::size_t bilstm_hidden = 100;
    std::size_t attention_heads = 16;
    std::size_t head_dim_qk = 4;
    std::size_t head_dim_v = 12;
    /// Width of the attention output projection W_O.
    std::size_t attention_output_dim = 192;
    /// Width of the dense layer over the statistics vector.
    std::size_t pns_hidden = 32;
    double dropout = 0.5;
    double learning_rate = 0.001;
    double momentum = 0.9;
    std::uint64_t seed = 0;

    /// Throws ArgumentError when a dimension is zero or dropout is outside [0, 1).
    void validate() const;

    bool operator==(const ModelConfig&) const = default;
};

/// Input widths the parameters are shaped for.
struct FeatureDims {
    std::size_t embedding_dim = 0;
    std::size_t tweet_activity_dim = 0;
    std::size_t retweet_activity_dim = 0;
    std::size_t pns_dim = 0;

    bool operator==(const FeatureDims&) const = default;
};

} // namespace somps
