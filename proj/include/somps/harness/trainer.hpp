#pragma once

#include "somps/featurize/article.hpp"
#include "somps/neural/config.hpp"
#include "somps/neural/params.hpp"

#include <span>
#include <vector>

namespace somps {

struct TrainOptions {
    std::size_t max_epochs = 100;
    /// Epochs without validation improvement before stopping.
    std::size_t patience = 10;
    std::size_t batch_size = 32;

    void validate() const;
    bool operator==(const TrainOptions&) const = default;
};

struct EpochLog {
    std::size_t epoch = 0;
    /// Inference-mode metrics after the epoch's updates.
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double val_loss = 0.0;
    double val_f1_macro = 0.0;
    bool improved = false;

    bool operator==(const EpochLog&) const = default;
};

struct TrainingLog {
    std::vector<EpochLog> epochs;
    /// 1-based epoch of the returned parameters.
    std::size_t best_epoch = 0;

    bool operator==(const TrainingLog&) const = default;
};

struct TrainResult {
    ModelParams params;
    TrainingLog log;
};

/// Mini-batch SGD with momentum on mean BCE. After every epoch the validation
/// macro-F1 is measured; an epoch improves when F1 rises, or ties with a lower
/// validation loss. Stops after `patience` epochs without improvement and
/// returns the best parameters. Throws TrainingError on a non-finite loss.
TrainResult train(std::span<const ArticleFeatures* const> train_set, std::span<const ArticleFeatures* const> val_set,
                  const ModelConfig& config, ModelVariant variant, const TrainOptions& options);

} // namespace somps
