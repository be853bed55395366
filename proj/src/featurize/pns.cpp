#include "somps/featurize/pns.hpp"

#include "somps/error.hpp"

#include <algorithm>
#include <set>

namespace somps {

void CategoricalEncoder::fit(std::span<const std::vector<std::string>> records, std::size_t top_k) {
    std::map<std::string, std::size_t> counts;
    for (const auto& record : records) {
        const std::set<std::string> distinct(record.begin(), record.end());
        for (const auto& v : distinct) ++counts[v];
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    categories_.clear();
    for (std::size_t i = 0; i < std::min(top_k, ranked.size()); ++i) categories_.push_back(ranked[i].first);
    fitted_ = true;
}

Eigen::VectorXd CategoricalEncoder::encode(std::span<const std::string> values) const {
    if (!fitted_) throw StateError("categorical encoder used before fit");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(width()));
    for (const auto& v : values) {
        const auto it = std::find(categories_.begin(), categories_.end(), v);
        out[it == categories_.end() ? out.size() - 1 : it - categories_.begin()] = 1.0;
    }
    return out;
}

double PublisherRatings::rating_for(const std::string& publisher) const {
    if (!fitted) throw StateError("publisher ratings used before fit");
    const auto it = mean_by_publisher.find(publisher);
    return it == mean_by_publisher.end() ? global_mean : it->second;
}

std::size_t PnsEncoders::width() const {
    return static_cast<std::size_t>(pns::kNumericCount) + tags.width() + publishers.width();
}

PnsEncoders fit_pns_encoders(const Corpus& corpus, std::span<const std::string> train_ids, std::size_t top_k_tags,
                             std::size_t top_k_publishers) {
    if (train_ids.empty()) throw ArgumentError("fit_pns_encoders: empty training split");
    std::vector<std::vector<std::string>> tags;
    std::vector<std::vector<std::string>> publishers;
    std::map<std::string, std::pair<double, std::size_t>> sums;
    double total = 0.0;
    for (const auto& id : train_ids) {
        const auto& n = corpus.news_at(id);
        tags.push_back(n.tags);
        publishers.push_back({n.publisher});
        auto& [sum, count] = sums[n.publisher];
        sum += n.review_rating;
        ++count;
        total += n.review_rating;
    }
    PnsEncoders enc;
    enc.tags.fit(tags, top_k_tags);
    enc.publishers.fit(publishers, top_k_publishers);
    for (const auto& [pub, sc] : sums) enc.ratings.mean_by_publisher[pub] = sc.first / static_cast<double>(sc.second);
    enc.ratings.global_mean = total / static_cast<double>(train_ids.size());
    enc.ratings.fitted = true;
    return enc;
}

Eigen::VectorXd build_pns_vector(const NewsRecord& article, std::span<const Engagement> engagements,
                                 const PnsEncoders& encoders) {
    if (!encoders.fitted()) throw StateError("build_pns_vector: encoders are not fitted");

    double tweets = 0, retweets = 0, replies = 0, likes = 0;
    std::set<std::string> hashtags;
    std::set<std::string> mentions;
    std::optional<Timestamp> last;
    for (const auto& e : engagements) {
        switch (e.kind) {
        case EngagementKind::tweet: ++tweets; break;
        case EngagementKind::retweet: ++retweets; break;
        case EngagementKind::reply: ++replies; break;
        }
        likes += static_cast<double>(e.like_count);
        hashtags.insert(e.hashtags.begin(), e.hashtags.end());
        mentions.insert(e.mentioned_user_ids.begin(), e.mentioned_user_ids.end());
        if (!last || e.created_at > *last) last = e.created_at;
    }

    Eigen::VectorXd v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(encoders.width()));
    v[pns::kTweets] = tweets;
    v[pns::kRetweets] = retweets;
    v[pns::kReplies] = replies;
    v[pns::kUniqueHashtags] = static_cast<double>(hashtags.size());
    v[pns::kTotalLikes] = likes;
    v[pns::kUniqueMentions] = static_cast<double>(mentions.size());
    if (last && article.first_tweet_time) {
        v[pns::kLifetimeDays] = std::max(0.0, days_between(*article.first_tweet_time, *last));
    }
    v[pns::kPublisherRating] = encoders.ratings.rating_for(article.publisher);

    const auto tag_width = static_cast<Eigen::Index>(encoders.tags.width());
    v.segment(pns::kNumericCount, tag_width) = encoders.tags.encode(article.tags);
    const std::vector<std::string> pub{article.publisher};
    v.segment(pns::kNumericCount + tag_width, static_cast<Eigen::Index>(encoders.publishers.width())) =
        encoders.publishers.encode(pub);
    return v;
}

} // namespace somps
