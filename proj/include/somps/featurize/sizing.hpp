#pragma once

#include "somps/ingest/types.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace somps {

/// Static tensor sizes shared by every article of a run.
struct SizingParams {
    std::size_t k_tweet = 1;   ///< tweet-graph nodes
    std::size_t k_retweet = 1; ///< retweet-graph nodes
    std::size_t seq_len = 1;   ///< tokens per engagement text

    bool operator==(const SizingParams&) const = default;
};

/// Median that takes the lower middle element for even-length input.
/// Throws ArgumentError for an empty list.
std::size_t lower_median(std::vector<std::size_t> values);

/// Medians over all articles of distinct tweet/retweet users, and over all
/// tweets of their token counts. Results are clamped to >= 1.
/// Throws ArgumentError for an empty corpus.
SizingParams compute_sizing(const Corpus& corpus);

/// Same, restricted to `article_ids` and to engagements visible within `cutoff_hours`
/// of each article's first tweet.
SizingParams compute_sizing(const Corpus& corpus, std::span<const std::string> article_ids,
                            std::optional<double> cutoff_hours);

} // namespace somps
