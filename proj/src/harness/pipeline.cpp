#include "somps/harness/pipeline.hpp"

namespace somps {

ExperimentResult run_experiment(const Corpus& corpus, const EmbeddingTable& table, const RunConfig& config) {
    config.validate();
    const auto eligible = filter_eligible(corpus);
    ExperimentResult out;
    out.splits = stratified_split(eligible, config.split);
    out.features = build_feature_set(eligible, out.splits.train, table, config.featurize);
    const auto train_set = select_features(out.features, out.splits.train);
    const auto val_set = select_features(out.features, out.splits.val);
    out.training = train(train_set, val_set, config.model, config.variant, config.training);
    const auto& params = out.training.params;
    out.train_report = evaluate(params, config.model, out.features, out.splits.train, config.variant);
    out.val_report = evaluate(params, config.model, out.features, out.splits.val, config.variant);
    out.test_report = evaluate(params, config.model, out.features, out.splits.test, config.variant);
    return out;
}

} // namespace somps
