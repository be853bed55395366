#include "somps/harness/trainer.hpp"

#include "somps/error.hpp"
#include "somps/harness/metrics.hpp"
#include "somps/neural/model.hpp"
#include "somps/neural/optimizer.hpp"
#include "somps/rng.hpp"

#include <cmath>
#include <numeric>

namespace somps {

void TrainOptions::validate() const {
    if (max_epochs == 0) throw ArgumentError("max_epochs must be >= 1");
    if (patience == 0) throw ArgumentError("patience must be >= 1");
    if (batch_size == 0) throw ArgumentError("batch_size must be >= 1");
}

namespace {

constexpr std::uint64_t kShuffleStream = 101;
constexpr std::uint64_t kInitStream = 102;
constexpr std::uint64_t kDropoutStream = 103;

} // namespace

TrainResult train(std::span<const ArticleFeatures* const> train_set, std::span<const ArticleFeatures* const> val_set,
                  const ModelConfig& config, ModelVariant variant, const TrainOptions& options) {
    config.validate();
    options.validate();
    if (train_set.empty()) throw ArgumentError("train: empty training set");
    if (val_set.empty()) throw ArgumentError("train: empty validation set");

    const auto dims = feature_dims(*train_set.front());
    auto params = ModelParams::initialize(config, dims, derive_seed(config.seed, kInitStream));
    SgdMomentum optimizer(params, config.learning_rate, config.momentum);
    Rng shuffler(derive_seed(config.seed, kShuffleStream));
    const std::uint64_t dropout_base = derive_seed(config.seed, kDropoutStream);

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), std::size_t{0});

    TrainResult result{params, {}};
    double best_f1 = -1.0;
    double best_loss = 0.0;
    std::size_t since_best = 0;
    std::uint64_t step = 0;

    for (std::size_t epoch = 1; epoch <= options.max_epochs; ++epoch) {
        shuffler.shuffle(std::span<std::size_t>(order));
        for (std::size_t start = 0; start < order.size(); start += options.batch_size) {
            const auto end = std::min(order.size(), start + options.batch_size);
            auto gradient = ModelParams::zeros(config, dims);
            double batch_loss = 0.0;
            for (std::size_t i = start; i < end; ++i) {
                const auto& article = *train_set[order[i]];
                const auto seed = derive_seed(dropout_base, step * options.batch_size + (i - start));
                const auto trace = forward(article, params, config, variant, true, seed);
                batch_loss += bce_loss(trace.probability, article.label);
                axpy(gradient, 1.0, backward(trace, article, params, config, article.label));
            }
            if (!std::isfinite(batch_loss)) {
                throw TrainingError("non-finite loss in epoch " + std::to_string(epoch) + ", batch " +
                                    std::to_string(start / options.batch_size + 1) + " (first article '" +
                                    train_set[order[start]]->news_id + "')");
            }
            bool finite = true;
            gradient.for_each([&finite](const std::string&, const Eigen::MatrixXd& m) { finite = finite && m.allFinite(); });
            if (!finite) {
                throw TrainingError("non-finite gradient in epoch " + std::to_string(epoch) + ", batch " +
                                    std::to_string(start / options.batch_size + 1));
            }
            ModelParams mean = ModelParams::zeros(config, dims);
            axpy(mean, 1.0 / static_cast<double>(end - start), gradient);
            optimizer.step(params, mean);
            ++step;
        }

        const auto train_report = evaluate(params, config, train_set, variant);
        const auto val_report = evaluate(params, config, val_set, variant);
        EpochLog entry;
        entry.epoch = epoch;
        entry.train_loss = train_report.mean_loss;
        entry.train_accuracy = train_report.metrics.accuracy;
        entry.val_loss = val_report.mean_loss;
        entry.val_f1_macro = val_report.metrics.f1_macro;
        if (!std::isfinite(entry.train_loss)) {
            throw TrainingError("non-finite training loss after epoch " + std::to_string(epoch));
        }
        entry.improved = entry.val_f1_macro > best_f1 ||
                         (entry.val_f1_macro == best_f1 && entry.val_loss < best_loss);
        result.log.epochs.push_back(entry);
        if (entry.improved) {
            best_f1 = entry.val_f1_macro;
            best_loss = entry.val_loss;
            result.params = params;
            result.log.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best >= options.patience) {
            break;
        }
    }
    return result;
}

} // namespace somps
