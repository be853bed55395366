#include "somps/featurize/sizing.hpp"

#include "somps/error.hpp"
#include "somps/featurize/article.hpp"
#include "somps/featurize/embedding.hpp"

#include <algorithm>
#include <set>

namespace somps {

std::size_t lower_median(std::vector<std::size_t> values) {
    if (values.empty()) throw ArgumentError("median of an empty list");
    const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
    std::nth_element(values.begin(), mid, values.end());
    return *mid;
}

SizingParams compute_sizing(const Corpus& corpus) {
    std::vector<std::string> ids;
    ids.reserve(corpus.size());
    for (const auto& n : corpus.news()) ids.push_back(n.news_id);
    return compute_sizing(corpus, ids, std::nullopt);
}

SizingParams compute_sizing(const Corpus& corpus, std::span<const std::string> article_ids,
                            std::optional<double> cutoff_hours) {
    if (article_ids.empty()) throw ArgumentError("compute_sizing: no articles");
    std::vector<std::size_t> tweet_users;
    std::vector<std::size_t> retweet_users;
    std::vector<std::size_t> tweet_lengths;
    for (const auto& id : article_ids) {
        const auto& article = corpus.news_at(id);
        std::set<std::string_view> tw;
        std::set<std::string_view> rt;
        for (const auto& e : visible_engagements(corpus, article, cutoff_hours)) {
            if (e.kind == EngagementKind::tweet) {
                tw.insert(e.user_id);
                tweet_lengths.push_back(tokenize(e.text).size());
            } else if (e.kind == EngagementKind::retweet) {
                rt.insert(e.user_id);
            }
        }
        tweet_users.push_back(tw.size());
        retweet_users.push_back(rt.size());
    }
    SizingParams s;
    s.k_tweet = std::max<std::size_t>(1, lower_median(std::move(tweet_users)));
    s.k_retweet = std::max<std::size_t>(1, lower_median(std::move(retweet_users)));
    s.seq_len = tweet_lengths.empty() ? 1 : std::max<std::size_t>(1, lower_median(std::move(tweet_lengths)));
    return s;
}

} // namespace somps
