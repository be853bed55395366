#pragma once

#include "somps/featurize/article.hpp"
#include "somps/harness/metrics.hpp"
#include "somps/harness/split.hpp"
#include "somps/harness/trainer.hpp"
#include "somps/ingest/corpus.hpp"

#include <optional>
#include <string>
#include <vector>

namespace somps {

struct CurvePoint {
    double cutoff_hours = 0.0;
    /// Set when the point is valid.
    std::optional<EvalReport> report;
    /// Articles of the whole corpus with at least one visible tweet.
    std::size_t eligible = 0;
    std::size_t ineligible = 0;
    std::string note;

    bool valid() const { return report.has_value(); }
};

struct EarlyDetectionCurve {
    ModelVariant variant = ModelVariant::somps;
    std::vector<CurvePoint> points;
};

/// Cutoffs 4, 8, ..., max_hours. Throws ArgumentError unless max_hours is a
/// positive multiple of 4.
std::vector<double> sweep_cutoffs(int max_hours);

/// For each cutoff: re-featurize with statistics fitted on the eligible train
/// articles, train, and evaluate on the eligible test articles. A cutoff whose
/// eligible train, validation or test set lacks a class is marked invalid and
/// the sweep continues.
EarlyDetectionCurve early_detection_sweep(const Corpus& corpus, const EmbeddingTable& table, const Splits& splits,
                                          const FeaturizeOptions& featurize, const ModelConfig& config,
                                          ModelVariant variant, const TrainOptions& training, int max_hours);

} // namespace somps
