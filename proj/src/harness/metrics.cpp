#include "somps/harness/metrics.hpp"

#include "somps/error.hpp"
#include "somps/neural/model.hpp"

#include <unordered_map>

namespace somps {

namespace {

double f1(std::size_t tp, std::size_t fp, std::size_t fn) {
    const auto denominator = 2 * tp + fp + fn;
    return denominator == 0 ? 0.0 : static_cast<double>(2 * tp) / static_cast<double>(denominator);
}

} // namespace

Metrics metrics_from_confusion(const Confusion& c) {
    Metrics m;
    m.confusion = c;
    const auto n = c.total();
    m.accuracy = n == 0 ? 0.0 : static_cast<double>(c.tp + c.tn) / static_cast<double>(n);
    m.f1_real = f1(c.tp, c.fp, c.fn);
    m.f1_fake = f1(c.tn, c.fn, c.fp);
    m.f1_macro = 0.5 * (m.f1_real + m.f1_fake);
    return m;
}

Metrics compute_metrics(std::span<const int> labels, std::span<const int> predictions) {
    if (labels.size() != predictions.size()) throw ArgumentError("compute_metrics: length mismatch");
    Confusion c;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const bool real = labels[i] == 1;
        const bool predicted_real = predictions[i] == 1;
        if (real && predicted_real) ++c.tp;
        else if (!real && predicted_real) ++c.fp;
        else if (real) ++c.fn;
        else ++c.tn;
    }
    return metrics_from_confusion(c);
}

std::vector<const ArticleFeatures*> select_features(const FeatureSet& set, std::span<const std::string> ids,
                                                    std::size_t* skipped) {
    std::unordered_map<std::string_view, const ArticleFeatures*> index;
    for (const auto& a : set.articles) index.emplace(a.news_id, &a);
    std::vector<const ArticleFeatures*> out;
    std::size_t missing = 0;
    for (const auto& id : ids) {
        const auto it = index.find(id);
        if (it == index.end()) ++missing;
        else out.push_back(it->second);
    }
    if (skipped) *skipped = missing;
    return out;
}

EvalReport evaluate(const ModelParams& params, const ModelConfig& config,
                    std::span<const ArticleFeatures* const> articles, ModelVariant variant) {
    if (articles.empty()) throw ArgumentError("evaluate: no articles to evaluate");
    EvalReport report;
    report.variant = variant;
    std::vector<int> labels;
    std::vector<int> predictions;
    double loss = 0.0;
    for (const auto* a : articles) {
        const auto trace = forward(*a, params, config, variant, false);
        report.probabilities.emplace_back(a->news_id, trace.probability);
        labels.push_back(to_int(a->label));
        predictions.push_back(trace.probability >= 0.5 ? 1 : 0);
        loss += bce_loss(trace.probability, a->label);
    }
    report.metrics = compute_metrics(labels, predictions);
    report.mean_loss = loss / static_cast<double>(articles.size());
    return report;
}

EvalReport evaluate(const ModelParams& params, const ModelConfig& config, const FeatureSet& set,
                    std::span<const std::string> ids, ModelVariant variant) {
    if (ids.empty()) throw ArgumentError("evaluate: empty id set");
    std::size_t skipped = 0;
    const auto articles = select_features(set, ids, &skipped);
    auto report = evaluate(params, config, articles, variant);
    report.cutoff_hours = set.cutoff_hours;
    report.skipped = skipped;
    return report;
}

} // namespace somps
