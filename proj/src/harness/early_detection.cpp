#include "somps/harness/early_detection.hpp"

#include "somps/error.hpp"

#include <array>

namespace somps {

std::vector<double> sweep_cutoffs(int max_hours) {
    if (max_hours < 4 || max_hours % 4 != 0) {
        throw ArgumentError("max_hours must be a positive multiple of 4, got " + std::to_string(max_hours));
    }
    std::vector<double> out;
    for (int h = 4; h <= max_hours; h += 4) out.push_back(h);
    return out;
}

namespace {

bool has_both_classes(std::span<const ArticleFeatures* const> articles) {
    std::array<bool, 2> seen{};
    for (const auto* a : articles) seen[static_cast<std::size_t>(to_int(a->label))] = true;
    return seen[0] && seen[1];
}

} // namespace

EarlyDetectionCurve early_detection_sweep(const Corpus& corpus, const EmbeddingTable& table, const Splits& splits,
                                          const FeaturizeOptions& featurize, const ModelConfig& config,
                                          ModelVariant variant, const TrainOptions& training, int max_hours) {
    EarlyDetectionCurve curve;
    curve.variant = variant;
    for (double cutoff : sweep_cutoffs(max_hours)) {
        CurvePoint point;
        point.cutoff_hours = cutoff;
        auto options = featurize;
        options.cutoff_hours = cutoff;
        FeatureSet set;
        try {
            set = build_feature_set(corpus, splits.train, table, options);
        } catch (const ArgumentError& e) {
            for (const auto& n : corpus.news()) {
                const auto visible = visible_engagements(corpus, n, cutoff);
                const bool tweet = std::any_of(visible.begin(), visible.end(), [](const Engagement& e) {
                    return e.kind == EngagementKind::tweet;
                });
                ++(tweet ? point.eligible : point.ineligible);
            }
            point.note = e.what();
            curve.points.push_back(std::move(point));
            continue;
        }
        point.eligible = set.articles.size();
        point.ineligible = set.ineligible.size();

        const auto train_set = select_features(set, splits.train);
        const auto val_set = select_features(set, splits.val);
        const auto test_set = select_features(set, splits.test);
        if (!has_both_classes(train_set) || !has_both_classes(val_set) || !has_both_classes(test_set)) {
            point.note = "a split has no eligible article of one class at this cutoff";
            curve.points.push_back(std::move(point));
            continue;
        }
        const auto result = train(train_set, val_set, config, variant, training);
        auto report = evaluate(result.params, config, set, splits.test, variant);
        point.report = std::move(report);
        curve.points.push_back(std::move(point));
    }
    return curve;
}

} // namespace somps
