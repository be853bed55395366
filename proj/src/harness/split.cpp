#include "somps/harness/split.hpp"

#include "somps/error.hpp"
#include "somps/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace somps {

namespace {

constexpr double kEps = 1e-9;

std::array<std::size_t, 3> largest_remainder(std::size_t n, const std::array<double, 3>& fracs) {
    std::array<std::size_t, 3> out{};
    std::array<double, 3> rem{};
    std::size_t used = 0;
    for (std::size_t s = 0; s < 3; ++s) {
        const double exact = static_cast<double>(n) * fracs[s];
        out[s] = static_cast<std::size_t>(std::floor(exact + kEps));
        rem[s] = exact - static_cast<double>(out[s]);
        used += out[s];
    }
    while (used < n) {
        std::size_t best = 0;
        for (std::size_t s = 1; s < 3; ++s) {
            if (rem[s] > rem[best] + kEps) best = s;
        }
        ++out[best];
        rem[best] = -1.0;
        ++used;
    }
    return out;
}

} // namespace

Splits stratified_split(std::span<const std::string> ids, std::span<const Label> labels, const SplitSpec& spec) {
    if (ids.size() != labels.size()) throw ArgumentError("stratified_split: ids and labels differ in length");
    const std::array<double, 3> fracs{spec.train_frac, spec.val_frac, spec.test_frac};
    for (double f : fracs) {
        if (!std::isfinite(f) || f < 0.0 || f > 1.0) throw SplitError("split fractions must lie in [0, 1]");
    }
    if (std::abs(fracs[0] + fracs[1] + fracs[2] - 1.0) > 1e-9) throw SplitError("split fractions must sum to 1");

    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < ids.size(); ++i) by_class[static_cast<std::size_t>(to_int(labels[i]))].push_back(i);
    for (std::size_t c = 0; c < 2; ++c) {
        if (by_class[c].size() < 3) {
            throw SplitError("class '" + std::string(c == 0 ? "fake" : "real") + "' has " +
                             std::to_string(by_class[c].size()) + " articles; at least 3 are needed");
        }
    }

    const auto target = largest_remainder(ids.size(), fracs);
    std::array<std::array<std::size_t, 3>, 2> counts{};
    std::array<std::array<double, 3>, 2> remainder{};
    std::array<std::size_t, 3> assigned{};
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t s = 0; s < 3; ++s) {
            const double exact = static_cast<double>(by_class[c].size()) * fracs[s];
            counts[c][s] = static_cast<std::size_t>(std::floor(exact + kEps));
            remainder[c][s] = exact - static_cast<double>(counts[c][s]);
            assigned[s] += counts[c][s];
        }
    }
    for (std::size_t c = 0; c < 2; ++c) {
        std::size_t left = by_class[c].size() - (counts[c][0] + counts[c][1] + counts[c][2]);
        while (left > 0) {
            std::size_t best = 3;
            for (std::size_t s = 0; s < 3; ++s) {
                if (assigned[s] >= target[s] || remainder[c][s] < 0.0) continue;
                if (best == 3) {
                    best = s;
                    continue;
                }
                const double dr = remainder[c][s] - remainder[c][best];
                const auto deficit = target[s] - assigned[s];
                const auto best_deficit = target[best] - assigned[best];
                if (dr > kEps || (std::abs(dr) <= kEps && deficit > best_deficit)) best = s;
            }
            if (best == 3) {
                // Every split met its target; fall back to the largest remainder.
                best = 0;
                for (std::size_t s = 1; s < 3; ++s) {
                    if (remainder[c][s] > remainder[c][best] + kEps) best = s;
                }
            }
            ++counts[c][best];
            ++assigned[best];
            remainder[c][best] = -1.0;
            --left;
        }
    }

    // Small classes can floor to zero in a split; borrow from the largest one.
    for (std::size_t c = 0; c < 2; ++c) {
        for (std::size_t s = 0; s < 3; ++s) {
            if (counts[c][s] > 0 || fracs[s] <= 0.0) continue;
            const auto donor = static_cast<std::size_t>(
                std::max_element(counts[c].begin(), counts[c].end()) - counts[c].begin());
            if (counts[c][donor] < 2) break;
            --counts[c][donor];
            ++counts[c][s];
        }
    }

    std::vector<int> split_of(ids.size(), -1);
    for (std::size_t c = 0; c < 2; ++c) {
        auto members = by_class[c];
        Rng rng(derive_seed(spec.seed, c));
        rng.shuffle(std::span<std::size_t>(members));
        std::size_t pos = 0;
        for (std::size_t s = 0; s < 3; ++s) {
            if (counts[c][s] == 0) {
                throw SplitError("split would contain no '" + std::string(c == 0 ? "fake" : "real") +
                                 "' articles; every split needs at least one per class");
            }
            for (std::size_t n = 0; n < counts[c][s]; ++n) split_of[members[pos++]] = static_cast<int>(s);
        }
    }

    Splits out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        auto& dest = split_of[i] == 0 ? out.train : split_of[i] == 1 ? out.val : out.test;
        dest.push_back(ids[i]);
    }
    return out;
}

Splits stratified_split(const Corpus& corpus, const SplitSpec& spec) {
    std::vector<std::string> ids;
    std::vector<Label> labels;
    for (const auto& n : corpus.news()) {
        ids.push_back(n.news_id);
        labels.push_back(n.label);
    }
    return stratified_split(ids, labels, spec);
}

} // namespace somps
