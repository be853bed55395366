#pragma once

#include "somps/ingest/corpus.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace somps {

struct SplitSpec {
    double train_frac = 0.75;
    double val_frac = 0.10;
    double test_frac = 0.15;
    std::uint64_t seed = 0;

    bool operator==(const SplitSpec&) const = default;
};

struct Splits {
    std::vector<std::string> train;
    std::vector<std::string> val;
    std::vector<std::string> test;

    bool operator==(const Splits&) const = default;
};

/// Label-stratified split. Per-class counts are floored, then the leftover
/// articles of each class go to the splits still short of their overall target,
/// largest fractional share first. Ids keep their input order within a split.
/// Throws SplitError when a class has fewer than 3 articles, fractions are
/// invalid, or a split would miss a class.
Splits stratified_split(std::span<const std::string> ids, std::span<const Label> labels, const SplitSpec& spec);
Splits stratified_split(const Corpus& corpus, const SplitSpec& spec);

} // namespace somps
