#pragma once

#include "somps/ingest/types.hpp"

#include <Eigen/Dense>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace somps {

/// Top-K vocabulary encoder with a trailing "other" bucket.
class CategoricalEncoder {
public:
    /// Counts each distinct value once per record; keeps the `top_k` most frequent
    /// (ties broken by value, ascending).
    void fit(std::span<const std::vector<std::string>> records, std::size_t top_k);

    bool fitted() const { return fitted_; }
    /// Reinstates a previously fitted category list.
    void restore(std::vector<std::string> categories) {
        categories_ = std::move(categories);
        fitted_ = true;
    }
    const std::vector<std::string>& categories() const { return categories_; }
    /// Number of output slots: categories plus the "other" bucket.
    std::size_t width() const { return categories_.size() + 1; }

    /// Multi-hot vector; unseen values light the "other" slot. Throws StateError if unfitted.
    Eigen::VectorXd encode(std::span<const std::string> values) const;

    bool operator==(const CategoricalEncoder&) const = default;

private:
    std::vector<std::string> categories_;
    bool fitted_ = false;
};

/// Mean review rating per publisher over the training split.
struct PublisherRatings {
    std::map<std::string, double> mean_by_publisher;
    double global_mean = 0.0;
    bool fitted = false;

    /// Falls back to the global training mean for unseen publishers.
    double rating_for(const std::string& publisher) const;

    bool operator==(const PublisherRatings&) const = default;
};

struct PnsEncoders {
    CategoricalEncoder tags;
    CategoricalEncoder publishers;
    PublisherRatings ratings;

    bool fitted() const { return tags.fitted() && publishers.fitted() && ratings.fitted; }
    std::size_t width() const;

    bool operator==(const PnsEncoders&) const = default;
};

namespace pns {
inline constexpr Eigen::Index kTweets = 0;
inline constexpr Eigen::Index kRetweets = 1;
inline constexpr Eigen::Index kReplies = 2;
inline constexpr Eigen::Index kUniqueHashtags = 3;
inline constexpr Eigen::Index kTotalLikes = 4;
inline constexpr Eigen::Index kUniqueMentions = 5;
inline constexpr Eigen::Index kLifetimeDays = 6;
inline constexpr Eigen::Index kPublisherRating = 7;
/// Columns [0, kNumericCount) are numeric; tag and publisher one-hots follow.
inline constexpr Eigen::Index kNumericCount = 8;
} // namespace pns

/// Fits tag/publisher encoders and publisher ratings on the training articles only.
PnsEncoders fit_pns_encoders(const Corpus& corpus, std::span<const std::string> train_ids, std::size_t top_k_tags,
                             std::size_t top_k_publishers);

/// Publisher-and-news-statistics vector for one article given its visible engagements.
Eigen::VectorXd build_pns_vector(const NewsRecord& article, std::span<const Engagement> engagements,
                                 const PnsEncoders& encoders);

} // namespace somps
