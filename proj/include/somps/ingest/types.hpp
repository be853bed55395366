#pragma once

#include "somps/time.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace somps {

/// Article veracity. Numeric values match the 0 = fake / 1 = real convention.
enum class Label : std::uint8_t { fake = 0, real = 1 };

/// Reviewer ratings below 3 mark an article fake; 3 and above are real.
constexpr Label label_from_rating(int review_rating) {
    return review_rating < 3 ? Label::fake : Label::real;
}

constexpr int to_int(Label l) { return static_cast<int>(l); }

enum class EngagementKind : std::uint8_t { tweet = 0, retweet = 1, reply = 2 };

std::string_view to_string(EngagementKind kind);
std::optional<EngagementKind> parse_engagement_kind(std::string_view s);

struct NewsRecord {
    std::string news_id;
    std::string publisher;
    std::vector<std::string> tags;
    int review_rating = 0;
    Label label = Label::fake;
    /// Time of the first tweet; unset only for articles without tweets.
    std::optional<Timestamp> first_tweet_time;
    std::optional<Timestamp> first_retweet_time;
};

struct Engagement {
    std::string engagement_id;
    std::string news_id;
    EngagementKind kind = EngagementKind::tweet;
    std::string user_id;
    std::string text;
    Timestamp created_at{};
    std::int64_t like_count = 0;
    std::vector<std::string> hashtags;
    std::vector<std::string> mentioned_user_ids;
};

struct UserRecord {
    std::string user_id;
    bool is_protected = false;
    bool verified = false;
    bool geo_enabled = false;
    bool default_profile_image = false;
    bool default_profile_ui = false;
    std::int64_t description_word_count = 0;
    std::int64_t username_word_count = 0;
    std::int64_t favourites_count = 0;
    std::int64_t friends_count = 0;
    std::int64_t followers_count = 0;
    std::int64_t listed_count = 0;
    std::optional<Timestamp> account_created_at;
    /// Sorted, duplicate-free ids of accounts following this user.
    std::vector<std::string> follower_ids;
    /// Sorted, duplicate-free ids of accounts this user follows.
    std::vector<std::string> following_ids;
    /// Sorted historical post times.
    std::vector<Timestamp> post_timestamps;
};

/// Lossy-data bookkeeping collected while building a corpus.
struct DataQualityReport {
    /// Field name -> number of records where the field was missing and defaulted.
    std::map<std::string, std::size_t> defaulted_fields;
    /// Articles whose first retweet precedes their first tweet (kept, flagged).
    std::vector<std::string> retweet_before_tweet;
    std::size_t duplicate_network_ids_removed = 0;
    std::size_t self_references_removed = 0;

    bool operator==(const DataQualityReport&) const = default;
};

/// An immutable article/engagement/user collection. Build with make_corpus().
class Corpus {
public:
    Corpus() = default;

    const std::vector<NewsRecord>& news() const { return news_; }
    const std::map<std::string, UserRecord>& users() const { return users_; }
    const std::map<std::string, std::vector<Engagement>>& engagements() const { return engagements_; }
    const DataQualityReport& quality() const { return quality_; }

    std::size_t size() const { return news_.size(); }
    bool empty() const { return news_.empty(); }

    /// Time-ordered engagements of an article (empty when it has none).
    std::span<const Engagement> engagements_of(std::string_view news_id) const;

    const NewsRecord* find_news(std::string_view news_id) const;
    const NewsRecord& news_at(std::string_view news_id) const;
    const UserRecord& user(std::string_view user_id) const;

    /// Builds a corpus, enforcing every invariant. Throws ValidationError for
    /// duplicate article ids, engagements of unknown articles, and dangling user ids.
    friend Corpus make_corpus(std::vector<NewsRecord> news, std::vector<Engagement> engagements,
                              std::map<std::string, UserRecord> users, DataQualityReport quality);

private:
    std::vector<NewsRecord> news_;
    std::map<std::string, std::vector<Engagement>> engagements_;
    std::map<std::string, UserRecord> users_;
    std::unordered_map<std::string, std::size_t> index_;
    DataQualityReport quality_;
};

Corpus make_corpus(std::vector<NewsRecord> news, std::vector<Engagement> engagements,
                   std::map<std::string, UserRecord> users, DataQualityReport quality = {});

} // namespace somps
