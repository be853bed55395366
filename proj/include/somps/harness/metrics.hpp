#pragma once

#include "somps/featurize/article.hpp"
#include "somps/neural/config.hpp"
#include "somps/neural/params.hpp"

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace somps {

/// Confusion counts with "real" as the positive class.
struct Confusion {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t fn = 0;
    std::size_t tn = 0;

    std::size_t total() const { return tp + fp + fn + tn; }
    bool operator==(const Confusion&) const = default;
};

struct Metrics {
    Confusion confusion;
    double accuracy = 0.0;
    double f1_real = 0.0;
    double f1_fake = 0.0;
    double f1_macro = 0.0;

    bool operator==(const Metrics&) const = default;
};

/// F1 is 0 when its denominator is 0 (class absent and never predicted).
Metrics metrics_from_confusion(const Confusion& c);
/// Labels and predictions are 0 (fake) / 1 (real).
Metrics compute_metrics(std::span<const int> labels, std::span<const int> predictions);

struct EvalReport {
    Metrics metrics;
    double mean_loss = 0.0;
    /// (news_id, P(real)) in evaluation order.
    std::vector<std::pair<std::string, double>> probabilities;
    ModelVariant variant = ModelVariant::somps;
    std::optional<double> cutoff_hours;
    /// Requested ids that had no features (ineligible at the cutoff).
    std::size_t skipped = 0;
};

/// Looks up the features of `ids`; ids without features are counted in `skipped`.
std::vector<const ArticleFeatures*> select_features(const FeatureSet& set, std::span<const std::string> ids,
                                                    std::size_t* skipped = nullptr);

/// Thresholds P(real) at 0.5. Throws ArgumentError on an empty selection.
EvalReport evaluate(const ModelParams& params, const ModelConfig& config,
                    std::span<const ArticleFeatures* const> articles, ModelVariant variant);
EvalReport evaluate(const ModelParams& params, const ModelConfig& config, const FeatureSet& set,
                    std::span<const std::string> ids, ModelVariant variant);

} // namespace somps
