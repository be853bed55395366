#include "somps/featurize/article.hpp"

#include "somps/error.hpp"
#include "somps/featurize/connectivity.hpp"
#include "somps/featurize/user_activity.hpp"

#include <algorithm>
#include <set>

namespace somps {

std::span<const Engagement> visible_engagements(const Corpus& corpus, const NewsRecord& article,
                                                std::optional<double> cutoff_hours) {
    const auto all = corpus.engagements_of(article.news_id);
    if (!cutoff_hours || !article.first_tweet_time) {
        return cutoff_hours ? std::span<const Engagement>{} : all;
    }
    const auto limit = *article.first_tweet_time +
                       std::chrono::seconds{static_cast<std::int64_t>(std::floor(*cutoff_hours * 3600.0))};
    const auto end = std::upper_bound(all.begin(), all.end(), limit,
                                      [](Timestamp t, const Engagement& e) { return t < e.created_at; });
    return all.first(static_cast<std::size_t>(end - all.begin()));
}

std::vector<std::string> select_first_users(std::span<const Engagement> engagements, EngagementKind kind,
                                            std::size_t k) {
    std::vector<std::string> users;
    std::set<std::string_view> seen;
    for (const auto& e : engagements) {
        if (users.size() == k) break;
        if (e.kind != kind || !seen.insert(e.user_id).second) continue;
        users.push_back(e.user_id);
    }
    return users;
}

namespace {

BranchFeatures featurize_branch(const NewsRecord& article, const Corpus& corpus, std::span<const Engagement> visible,
                                EngagementKind kind, std::size_t k, std::size_t m, const EmbeddingTable& table) {
    BranchFeatures b;
    const auto ids = select_first_users(visible, kind, k);
    std::vector<const UserRecord*> users;
    users.reserve(ids.size());
    for (const auto& id : ids) users.push_back(&corpus.user(id));
    const std::set<std::string_view> selected(ids.begin(), ids.end());

    std::vector<std::string> texts;
    std::vector<Engagement> by_selected;
    for (const auto& e : visible) {
        if (e.kind != kind) continue;
        texts.push_back(e.text);
        if (selected.contains(e.user_id)) by_selected.push_back(e);
    }

    b.embedding = embed_engagements(texts, table, m);
    b.adjacency = build_connectivity_matrix(users, k);
    b.activity = build_user_activity_matrix(users, by_selected, article, kind, k);
    b.valid_users = users.size();
    return b;
}

} // namespace

std::optional<ArticleFeatures> featurize_article(const NewsRecord& article, const Corpus& corpus,
                                                 const SizingParams& sizing, const EmbeddingTable& table,
                                                 const PnsEncoders& encoders, std::optional<double> cutoff_hours) {
    const auto visible = visible_engagements(corpus, article, cutoff_hours);
    const bool has_tweet = std::any_of(visible.begin(), visible.end(),
                                       [](const Engagement& e) { return e.kind == EngagementKind::tweet; });
    if (!has_tweet) return std::nullopt;

    ArticleFeatures f;
    f.news_id = article.news_id;
    f.label = article.label;
    f.tweet = featurize_branch(article, corpus, visible, EngagementKind::tweet, sizing.k_tweet, sizing.seq_len, table);
    f.retweet =
        featurize_branch(article, corpus, visible, EngagementKind::retweet, sizing.k_retweet, sizing.seq_len, table);
    f.pns = build_pns_vector(article, visible, encoders);
    return f;
}

void standardize(ArticleFeatures& features, const FittedStatistics& stats) {
    stats.tweet_activity.apply_rows(features.tweet.activity, features.tweet.valid_users);
    stats.retweet_activity.apply_rows(features.retweet.activity, features.retweet.valid_users);
    stats.pns.apply(features.pns);
}

const ArticleFeatures* FeatureSet::find(const std::string& news_id) const {
    for (const auto& a : articles) {
        if (a.news_id == news_id) return &a;
    }
    return nullptr;
}

FittedStatistics fit_statistics(const Corpus& corpus, std::span<const std::string> train_ids,
                                const EmbeddingTable& table, const FeaturizeOptions& options) {
    std::vector<std::string> eligible_train;
    for (const auto& id : train_ids) {
        const auto visible = visible_engagements(corpus, corpus.news_at(id), options.cutoff_hours);
        if (std::any_of(visible.begin(), visible.end(),
                        [](const Engagement& e) { return e.kind == EngagementKind::tweet; })) {
            eligible_train.push_back(id);
        }
    }
    if (eligible_train.empty()) throw ArgumentError("fit_statistics: no eligible training articles");

    FittedStatistics stats;
    stats.sizing = compute_sizing(corpus, eligible_train, options.cutoff_hours);
    if (options.k_tweet) stats.sizing.k_tweet = *options.k_tweet;
    if (options.k_retweet) stats.sizing.k_retweet = *options.k_retweet;
    if (options.seq_len) stats.sizing.seq_len = *options.seq_len;
    if (stats.sizing.k_tweet < 1 || stats.sizing.k_retweet < 1 || stats.sizing.seq_len < 1) {
        throw ArgumentError("sizing overrides must be >= 1");
    }
    stats.encoders = fit_pns_encoders(corpus, eligible_train, options.top_k_tags, options.top_k_publishers);

    std::vector<Eigen::RowVectorXd> tweet_rows;
    std::vector<Eigen::RowVectorXd> retweet_rows;
    std::vector<Eigen::RowVectorXd> pns_rows;
    for (const auto& id : eligible_train) {
        const auto f = featurize_article(corpus.news_at(id), corpus, stats.sizing, table, stats.encoders,
                                         options.cutoff_hours);
        for (std::size_t r = 0; r < f->tweet.valid_users; ++r) tweet_rows.push_back(f->tweet.activity.row(static_cast<Eigen::Index>(r)));
        for (std::size_t r = 0; r < f->retweet.valid_users; ++r) retweet_rows.push_back(f->retweet.activity.row(static_cast<Eigen::Index>(r)));
        pns_rows.push_back(f->pns.transpose());
    }
    const auto numeric_uam = uam::kWidth - uam::kFirstNumeric;
    stats.tweet_activity = Standardizer(uam::kFirstNumeric, numeric_uam);
    stats.tweet_activity.fit(tweet_rows);
    stats.retweet_activity = Standardizer(uam::kFirstNumeric, numeric_uam);
    stats.retweet_activity.fit(retweet_rows);
    stats.pns = Standardizer(0, pns::kNumericCount);
    stats.pns.fit(pns_rows);
    return stats;
}

FeatureSet build_feature_set(const Corpus& corpus, std::span<const std::string> train_ids,
                             const EmbeddingTable& table, const FeaturizeOptions& options) {
    FeatureSet set;
    set.stats = fit_statistics(corpus, train_ids, table, options);
    set.embedding_dim = table.dim();
    set.cutoff_hours = options.cutoff_hours;
    for (const auto& article : corpus.news()) {
        auto f = featurize_article(article, corpus, set.stats.sizing, table, set.stats.encoders, options.cutoff_hours);
        if (!f) {
            set.ineligible.push_back(article.news_id);
            continue;
        }
        standardize(*f, set.stats);
        set.articles.push_back(std::move(*f));
    }
    return set;
}

} // namespace somps
