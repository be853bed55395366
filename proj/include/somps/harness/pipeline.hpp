#pragma once

#include "somps/featurize/article.hpp"
#include "somps/featurize/embedding.hpp"
#include "somps/harness/metrics.hpp"
#include "somps/harness/run_config.hpp"
#include "somps/harness/split.hpp"
#include "somps/harness/trainer.hpp"
#include "somps/ingest/corpus.hpp"

namespace somps {

struct ExperimentResult {
    Splits splits;
    FeatureSet features;
    TrainResult training;
    EvalReport train_report;
    EvalReport val_report;
    EvalReport test_report;
};

/// Split, featurize with train-only statistics, train and evaluate in one call.
/// The corpus is eligibility-filtered first.
ExperimentResult run_experiment(const Corpus& corpus, const EmbeddingTable& table, const RunConfig& config);

} // namespace somps
