#pragma once

#include "somps/ingest/types.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace somps {

/// Knobs for the synthetic corpus generator.
struct SyntheticOptions {
    std::size_t n_articles = 100;
    /// Exactly floor(fake_fraction * n_articles) articles are fake.
    double fake_fraction = 0.3;
    std::uint64_t seed = 0;
    /// 0 = fake and real articles draw from identical distributions,
    /// 1 = fully separated populations (bot-like engagers, fake vocabulary,
    /// fake-leaning publishers and tags).
    double signal_strength = 1.0;
    /// When set, only engagements inside [begin, end] hours after the first
    /// tweet carry the planted signal; everything else (including publisher,
    /// tags and engagement volume) is label-independent.
    std::optional<std::pair<double, double>> signal_window_hours;
};

/// Deterministic synthetic corpus with planted signal. Every article has at
/// least one tweet and one retweet. Throws ArgumentError when n_articles < 1 or
/// a fraction lies outside [0, 1].
Corpus generate_synthetic(const SyntheticOptions& options);

Corpus generate_synthetic(std::size_t n_articles, double fake_fraction, std::uint64_t seed,
                          double signal_strength);

/// Every token the generator can emit, after tokenization.
std::vector<std::string> synthetic_vocabulary();

} // namespace somps
