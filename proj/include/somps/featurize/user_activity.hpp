#pragma once

#include "somps/ingest/types.hpp"

#include <Eigen/Dense>

#include <span>

namespace somps {

/// Column layout of a user activity row. Flag columns are 0/1; the rest are
/// numeric and get standardized downstream.
namespace uam {
inline constexpr Eigen::Index kProtected = 0;
inline constexpr Eigen::Index kDefaultProfileImage = 1;
inline constexpr Eigen::Index kVerified = 2;
inline constexpr Eigen::Index kDefaultProfileUi = 3;
inline constexpr Eigen::Index kGeoEnabled = 4;
inline constexpr Eigen::Index kDescriptionWords = 5;
inline constexpr Eigen::Index kUsernameWords = 6;
inline constexpr Eigen::Index kFavourites = 7;
inline constexpr Eigen::Index kFriends = 8;
inline constexpr Eigen::Index kFollowers = 9;
inline constexpr Eigen::Index kListed = 10;
inline constexpr Eigen::Index kAvgPostsPerDay = 11;
inline constexpr Eigen::Index kMaxPostsPerDay = 12;
inline constexpr Eigen::Index kAccountAgeDays = 13;
/// Tweets: the user's tweet count on this article.
/// Retweets: hours between the article's first tweet and first retweet.
inline constexpr Eigen::Index kKindSpecific = 14;
inline constexpr Eigen::Index kWidth = 15;
inline constexpr Eigen::Index kFirstNumeric = kDescriptionWords;
} // namespace uam

/// Posts per day over the span of the user's history: count / max(1, ceil(span
/// in days)). Zero for an empty history.
double average_posts_per_day(const UserRecord& user);

/// Largest number of posts on a single UTC calendar day.
double max_posts_per_day(const UserRecord& user);

/// k x uam::kWidth matrix, one row per user (in order), zero rows as padding.
///
/// `engagements` are the article's visible engagements of `kind` made by the
/// listed users; an engagement by any other user throws ArgumentError.
Eigen::MatrixXd build_user_activity_matrix(std::span<const UserRecord* const> users,
                                           std::span<const Engagement> engagements, const NewsRecord& article,
                                           EngagementKind kind, std::size_t k);

} // namespace somps
