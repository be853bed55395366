#include "somps/featurize/user_activity.hpp"

#include "somps/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace somps {

double average_posts_per_day(const UserRecord& user) {
    const auto& posts = user.post_timestamps;
    if (posts.empty()) return 0.0;
    const double span_days = days_between(posts.front(), posts.back());
    return static_cast<double>(posts.size()) / std::max(1.0, std::ceil(span_days));
}

double max_posts_per_day(const UserRecord& user) {
    std::size_t best = 0;
    std::size_t run = 0;
    std::int64_t current_day = 0;
    for (std::size_t i = 0; i < user.post_timestamps.size(); ++i) {
        const auto day = utc_day(user.post_timestamps[i]);
        run = (i > 0 && day == current_day) ? run + 1 : 1;
        current_day = day;
        best = std::max(best, run);
    }
    return static_cast<double>(best);
}

Eigen::MatrixXd build_user_activity_matrix(std::span<const UserRecord* const> users,
                                           std::span<const Engagement> engagements, const NewsRecord& article,
                                           EngagementKind kind, std::size_t k) {
    if (users.size() > k) throw ArgumentError("build_user_activity_matrix: more users than k");

    std::map<std::string_view, std::size_t> row_of;
    for (std::size_t i = 0; i < users.size(); ++i) row_of.emplace(users[i]->user_id, i);

    std::vector<std::int64_t> kind_count(users.size(), 0);
    std::vector<std::optional<Timestamp>> first_engagement(users.size());
    for (const auto& e : engagements) {
        if (e.kind != kind) continue;
        const auto it = row_of.find(e.user_id);
        if (it == row_of.end()) {
            throw ArgumentError("internal: engagement '" + e.engagement_id + "' by user '" + e.user_id +
                                "' who is not among the selected users");
        }
        ++kind_count[it->second];
        auto& first = first_engagement[it->second];
        if (!first || e.created_at < *first) first = e.created_at;
    }

    double retweet_delay_hours = 0.0;
    if (kind == EngagementKind::retweet && article.first_tweet_time && article.first_retweet_time) {
        retweet_delay_hours = hours_between(*article.first_tweet_time, *article.first_retweet_time);
    }

    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(k), uam::kWidth);
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& u = *users[i];
        auto row = h.row(static_cast<Eigen::Index>(i));
        row[uam::kProtected] = u.is_protected ? 1.0 : 0.0;
        row[uam::kDefaultProfileImage] = u.default_profile_image ? 1.0 : 0.0;
        row[uam::kVerified] = u.verified ? 1.0 : 0.0;
        row[uam::kDefaultProfileUi] = u.default_profile_ui ? 1.0 : 0.0;
        row[uam::kGeoEnabled] = u.geo_enabled ? 1.0 : 0.0;
        row[uam::kDescriptionWords] = static_cast<double>(u.description_word_count);
        row[uam::kUsernameWords] = static_cast<double>(u.username_word_count);
        row[uam::kFavourites] = static_cast<double>(u.favourites_count);
        row[uam::kFriends] = static_cast<double>(u.friends_count);
        row[uam::kFollowers] = static_cast<double>(u.followers_count);
        row[uam::kListed] = static_cast<double>(u.listed_count);
        row[uam::kAvgPostsPerDay] = average_posts_per_day(u);
        row[uam::kMaxPostsPerDay] = max_posts_per_day(u);
        if (u.account_created_at && first_engagement[i]) {
            row[uam::kAccountAgeDays] = std::max(0.0, days_between(*u.account_created_at, *first_engagement[i]));
        }
        row[uam::kKindSpecific] =
            kind == EngagementKind::tweet ? static_cast<double>(kind_count[i]) : retweet_delay_hours;
    }
    return h;
}

} // namespace somps
