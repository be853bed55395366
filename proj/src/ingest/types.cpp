#include "somps/ingest/types.hpp"

#include "somps/error.hpp"

#include <algorithm>
#include <set>

namespace somps {

std::string_view to_string(EngagementKind kind) {
    switch (kind) {
    case EngagementKind::tweet: return "tweet";
    case EngagementKind::retweet: return "retweet";
    case EngagementKind::reply: return "reply";
    }
    return "unknown";
}

std::optional<EngagementKind> parse_engagement_kind(std::string_view s) {
    if (s == "tweet") return EngagementKind::tweet;
    if (s == "retweet") return EngagementKind::retweet;
    if (s == "reply") return EngagementKind::reply;
    return std::nullopt;
}

std::span<const Engagement> Corpus::engagements_of(std::string_view news_id) const {
    const auto it = engagements_.find(std::string(news_id));
    if (it == engagements_.end()) return {};
    return it->second;
}

const NewsRecord* Corpus::find_news(std::string_view news_id) const {
    const auto it = index_.find(std::string(news_id));
    return it == index_.end() ? nullptr : &news_[it->second];
}

const NewsRecord& Corpus::news_at(std::string_view news_id) const {
    const auto* n = find_news(news_id);
    if (n == nullptr) throw ArgumentError("unknown news id '" + std::string(news_id) + "'");
    return *n;
}

const UserRecord& Corpus::user(std::string_view user_id) const {
    const auto it = users_.find(std::string(user_id));
    if (it == users_.end()) throw ArgumentError("unknown user id '" + std::string(user_id) + "'");
    return it->second;
}

namespace {

void normalize_id_set(std::vector<std::string>& ids, const std::string& self, DataQualityReport& quality) {
    std::sort(ids.begin(), ids.end());
    const auto unique_end = std::unique(ids.begin(), ids.end());
    quality.duplicate_network_ids_removed += static_cast<std::size_t>(ids.end() - unique_end);
    ids.erase(unique_end, ids.end());
    const auto self_it = std::lower_bound(ids.begin(), ids.end(), self);
    if (self_it != ids.end() && *self_it == self) {
        ids.erase(self_it);
        ++quality.self_references_removed;
    }
}

} // namespace

Corpus make_corpus(std::vector<NewsRecord> news, std::vector<Engagement> engagements,
                   std::map<std::string, UserRecord> users, DataQualityReport quality) {
    Corpus c;
    c.quality_ = std::move(quality);
    c.quality_.retweet_before_tweet.clear();

    for (std::size_t i = 0; i < news.size(); ++i) {
        auto& n = news[i];
        if (n.review_rating < 0 || n.review_rating > 5) {
            throw ValidationError("article '" + n.news_id + "' has review rating " +
                                  std::to_string(n.review_rating) + " outside 0-5");
        }
        n.label = label_from_rating(n.review_rating);
        n.first_tweet_time.reset();
        n.first_retweet_time.reset();
        if (!c.index_.emplace(n.news_id, i).second) {
            throw ValidationError("duplicate news_id '" + n.news_id + "'");
        }
    }

    for (auto& [id, u] : users) {
        if (u.user_id != id) throw ValidationError("user map key '" + id + "' does not match user_id");
        normalize_id_set(u.follower_ids, id, c.quality_);
        normalize_id_set(u.following_ids, id, c.quality_);
        std::sort(u.post_timestamps.begin(), u.post_timestamps.end());
        if (u.favourites_count < 0 || u.friends_count < 0 || u.followers_count < 0 ||
            u.listed_count < 0 || u.description_word_count < 0 || u.username_word_count < 0) {
            throw ValidationError("user '" + id + "' has a negative count");
        }
    }

    std::set<std::string> dangling;
    for (auto& e : engagements) {
        if (!c.index_.contains(e.news_id)) {
            throw ValidationError("engagement '" + e.engagement_id + "' references unknown news_id '" +
                                  e.news_id + "'");
        }
        if (e.like_count < 0) {
            throw ValidationError("engagement '" + e.engagement_id + "' has a negative like count");
        }
        if (!users.contains(e.user_id)) dangling.insert(e.user_id);
        const auto nid = e.news_id;
        c.engagements_[nid].push_back(std::move(e));
    }
    if (!dangling.empty()) {
        std::string msg = "engagements reference " + std::to_string(dangling.size()) + " unknown user id(s):";
        std::size_t shown = 0;
        for (const auto& id : dangling) {
            if (shown++ == 20) {
                msg += " ...";
                break;
            }
            msg += " " + id;
        }
        throw ValidationError(msg);
    }

    for (auto& [nid, list] : c.engagements_) {
        std::stable_sort(list.begin(), list.end(),
                         [](const Engagement& a, const Engagement& b) { return a.created_at < b.created_at; });
        auto& n = news[c.index_.at(nid)];
        for (const auto& e : list) {
            if (e.kind == EngagementKind::tweet && !n.first_tweet_time) n.first_tweet_time = e.created_at;
            if (e.kind == EngagementKind::retweet && !n.first_retweet_time) n.first_retweet_time = e.created_at;
        }
    }
    for (const auto& n : news) {
        if (n.first_tweet_time && n.first_retweet_time && *n.first_retweet_time < *n.first_tweet_time) {
            c.quality_.retweet_before_tweet.push_back(n.news_id);
        }
    }

    c.news_ = std::move(news);
    c.users_ = std::move(users);
    return c;
}

} // namespace somps
