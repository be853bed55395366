#pragma once

#include "somps/featurize/embedding.hpp"
#include "somps/featurize/pns.hpp"
#include "somps/featurize/sizing.hpp"
#include "somps/featurize/standardizer.hpp"
#include "somps/ingest/types.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace somps {

/// Tensors for one engagement kind (tweet or retweet) of one article.
struct BranchFeatures {
    Eigen::MatrixXd embedding;  ///< [m x e] averaged engagement embedding
    Eigen::MatrixXd adjacency;  ///< [k x k] connectivity scores, zero diagonal
    Eigen::MatrixXd activity;   ///< [k x d] user activity rows, zero padding
    std::size_t valid_users = 0;
};

struct ArticleFeatures {
    std::string news_id;
    Label label = Label::fake;
    BranchFeatures tweet;
    BranchFeatures retweet;
    Eigen::VectorXd pns;
};

/// Every statistic fitted on the training split.
struct FittedStatistics {
    SizingParams sizing;
    PnsEncoders encoders;
    Standardizer tweet_activity;
    Standardizer retweet_activity;
    Standardizer pns;

    bool operator==(const FittedStatistics&) const = default;
};

/// Engagements of `article` created no later than first tweet + cutoff (all of
/// them without a cutoff). Returned as a prefix of the time-sorted list.
std::span<const Engagement> visible_engagements(const Corpus& corpus, const NewsRecord& article,
                                                std::optional<double> cutoff_hours);

/// First `k` distinct users engaging with `kind`, ordered by their earliest engagement.
std::vector<std::string> select_first_users(std::span<const Engagement> engagements, EngagementKind kind,
                                            std::size_t k);

/// Raw (unstandardized) features of one article. Returns nullopt when no tweet
/// is visible within the cutoff (ineligible at that window).
std::optional<ArticleFeatures> featurize_article(const NewsRecord& article, const Corpus& corpus,
                                                 const SizingParams& sizing, const EmbeddingTable& table,
                                                 const PnsEncoders& encoders, std::optional<double> cutoff_hours);

/// Standardizes the numeric activity and PNS columns in place.
void standardize(ArticleFeatures& features, const FittedStatistics& stats);

struct FeaturizeOptions {
    std::size_t top_k_tags = 10;
    std::size_t top_k_publishers = 10;
    std::optional<std::size_t> k_tweet;
    std::optional<std::size_t> k_retweet;
    std::optional<std::size_t> seq_len;
    std::optional<double> cutoff_hours;
};

/// Features for a whole corpus with statistics fitted on the training split.
struct FeatureSet {
    FittedStatistics stats;
    std::size_t embedding_dim = 0;
    std::optional<double> cutoff_hours;
    /// Standardized features of every eligible article, in corpus order.
    std::vector<ArticleFeatures> articles;
    /// Articles with no visible tweet at the cutoff.
    std::vector<std::string> ineligible;

    const ArticleFeatures* find(const std::string& news_id) const;
};

/// Fits sizing, encoders, publisher ratings and standardizers on `train_ids`
/// (restricted to articles eligible at the cutoff), then featurizes every
/// article of the corpus.
FittedStatistics fit_statistics(const Corpus& corpus, std::span<const std::string> train_ids,
                                const EmbeddingTable& table, const FeaturizeOptions& options);

FeatureSet build_feature_set(const Corpus& corpus, std::span<const std::string> train_ids,
                             const EmbeddingTable& table, const FeaturizeOptions& options);

} // namespace somps
