#include "somps/ingest/synthetic.hpp"

#include "somps/error.hpp"
#include "somps/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <set>

namespace somps {

namespace {

using std::chrono::seconds;

constexpr std::array kFakeWords{"miracle", "cure",   "shocking", "secret",  "banned",  "hidden",
                                "toxic",   "detox",  "exposed",  "hoax",    "instant", "natural"};
constexpr std::array kRealWords{"study",    "researchers", "trial",   "published", "journal", "evidence",
                                "clinical", "patients",    "data",    "review",    "cohort",  "findings"};
constexpr std::array kNeutralWords{"health", "new", "people", "doctors", "cancer", "vaccine",
                                   "heart",  "diet", "risk",  "this",    "read",   "today"};
constexpr std::array kHashtags{"health", "wellness", "medicine", "covid", "nutrition", "science"};

constexpr std::size_t kBots = 120;
constexpr std::size_t kHumans = 360;
constexpr std::size_t kBotnetIds = 60;
constexpr std::size_t kOpenIds = 20000;
constexpr std::size_t kPublishersPerSide = 6;
constexpr std::size_t kTagsPerSide = 8;

const Timestamp kEpoch = Timestamp{seconds{1583020800}}; // 2020-03-01T00:00:00Z

std::string numbered(const char* prefix, std::size_t i, int width) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, i);
    return buf;
}

Timestamp shift_hours(Timestamp t, double hours) {
    return t + seconds{static_cast<std::int64_t>(std::llround(hours * 3600.0))};
}

std::vector<std::string> sample_ids(Rng& rng, const char* prefix, std::size_t space, std::size_t count) {
    std::set<std::size_t> picked;
    while (picked.size() < std::min(count, space)) {
        picked.insert(static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(space) - 1)));
    }
    std::vector<std::string> out;
    out.reserve(picked.size());
    for (const auto i : picked) out.push_back(numbered(prefix, i, 5));
    return out;
}

std::vector<Timestamp> history(Rng& rng, Timestamp start, double days, double per_day) {
    const auto n = static_cast<std::size_t>(std::llround(days * per_day));
    std::vector<Timestamp> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(shift_hours(start, rng.uniform(0.0, days * 24.0)));
    std::sort(out.begin(), out.end());
    return out;
}

UserRecord make_bot(Rng& rng, std::size_t i) {
    UserRecord u;
    u.user_id = numbered("bot_", i, 4);
    u.is_protected = rng.bernoulli(0.05);
    u.verified = false;
    u.geo_enabled = rng.bernoulli(0.1);
    u.default_profile_image = rng.bernoulli(0.9);
    u.default_profile_ui = rng.bernoulli(0.9);
    u.description_word_count = rng.uniform_int(0, 3);
    u.username_word_count = 1;
    u.favourites_count = rng.uniform_int(0, 50);
    u.follower_ids = sample_ids(rng, "bn_", kBotnetIds, static_cast<std::size_t>(rng.uniform_int(15, 30)));
    u.following_ids = sample_ids(rng, "bn_", kBotnetIds, static_cast<std::size_t>(rng.uniform_int(15, 30)));
    u.friends_count = rng.uniform_int(500, 2000);
    u.followers_count = static_cast<std::int64_t>(u.follower_ids.size()) + rng.uniform_int(0, 40);
    u.listed_count = 0;
    const double age_days = rng.uniform(1.0, 15.0);
    const auto created = shift_hours(kEpoch, -age_days * 24.0);
    u.account_created_at = created;
    u.post_timestamps = history(rng, created, std::min(age_days, 10.0), rng.uniform(20.0, 45.0));
    return u;
}

UserRecord make_human(Rng& rng, std::size_t i) {
    UserRecord u;
    u.user_id = numbered("usr_", i, 4);
    u.is_protected = rng.bernoulli(0.05);
    u.verified = rng.bernoulli(0.15);
    u.geo_enabled = rng.bernoulli(0.4);
    u.default_profile_image = rng.bernoulli(0.05);
    u.default_profile_ui = rng.bernoulli(0.2);
    u.description_word_count = rng.uniform_int(3, 25);
    u.username_word_count = rng.uniform_int(1, 3);
    u.favourites_count = rng.uniform_int(100, 20000);
    u.follower_ids = sample_ids(rng, "acct_", kOpenIds, static_cast<std::size_t>(rng.uniform_int(20, 60)));
    u.following_ids = sample_ids(rng, "acct_", kOpenIds, static_cast<std::size_t>(rng.uniform_int(20, 60)));
    u.friends_count = rng.uniform_int(50, 1500);
    u.followers_count = static_cast<std::int64_t>(u.follower_ids.size()) + rng.uniform_int(50, 5000);
    u.listed_count = rng.uniform_int(0, 40);
    const double age_days = rng.uniform(365.0, 3650.0);
    u.account_created_at = shift_hours(kEpoch, -age_days * 24.0);
    u.post_timestamps = history(rng, shift_hours(kEpoch, -30.0 * 24.0), 30.0, rng.uniform(0.3, 4.0));
    return u;
}

struct Populations {
    std::vector<UserRecord> bots;
    std::vector<UserRecord> humans;
};

/// Draws engagement content and author. `bot_probability` controls both the
/// author population and the vocabulary the text leans on.
struct EngagementDraw {
    const UserRecord* user;
    std::string text;
};

EngagementDraw draw_engagement(Rng& rng, const Populations& pop, double bot_probability, bool retweet) {
    const bool bot = rng.bernoulli(bot_probability);
    const auto& pool = bot ? pop.bots : pop.humans;
    const auto& user = pool[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(pool.size()) - 1))];

    const bool fake_vocab = rng.bernoulli(bot_probability);
    const auto n_words = rng.uniform_int(5, 11);
    std::string text = retweet ? "RT @" + numbered("usr_", static_cast<std::size_t>(rng.uniform_int(0, 99)), 4) + ":" : "";
    for (std::int64_t w = 0; w < n_words; ++w) {
        const char* word = nullptr;
        if (rng.bernoulli(0.6)) {
            const auto& vocab = fake_vocab ? kFakeWords : kRealWords;
            word = vocab[static_cast<std::size_t>(rng.uniform_int(0, vocab.size() - 1))];
        } else {
            word = kNeutralWords[static_cast<std::size_t>(rng.uniform_int(0, kNeutralWords.size() - 1))];
        }
        if (!text.empty()) text += ' ';
        text += word;
        if (w == n_words - 1) text += rng.bernoulli(0.5) ? "!" : ".";
    }
    if (rng.bernoulli(0.3)) text += " https://t.co/" + numbered("x", static_cast<std::size_t>(rng.uniform_int(0, 9999)), 4);
    return {&user, std::move(text)};
}

} // namespace

std::vector<std::string> synthetic_vocabulary() {
    std::vector<std::string> v;
    for (const auto* w : kFakeWords) v.emplace_back(w);
    for (const auto* w : kRealWords) v.emplace_back(w);
    for (const auto* w : kNeutralWords) v.emplace_back(w);
    v.emplace_back("rt");
    return v;
}

Corpus generate_synthetic(std::size_t n_articles, double fake_fraction, std::uint64_t seed, double signal_strength) {
    SyntheticOptions o;
    o.n_articles = n_articles;
    o.fake_fraction = fake_fraction;
    o.seed = seed;
    o.signal_strength = signal_strength;
    return generate_synthetic(o);
}

Corpus generate_synthetic(const SyntheticOptions& options) {
    if (options.n_articles < 1) throw ArgumentError("generate_synthetic: n_articles must be >= 1");
    if (!(options.fake_fraction >= 0.0 && options.fake_fraction <= 1.0)) {
        throw ArgumentError("generate_synthetic: fake_fraction must lie in [0, 1]");
    }
    if (!(options.signal_strength >= 0.0 && options.signal_strength <= 1.0)) {
        throw ArgumentError("generate_synthetic: signal_strength must lie in [0, 1]");
    }
    if (options.signal_window_hours &&
        !(options.signal_window_hours->first >= 0.0 &&
          options.signal_window_hours->first < options.signal_window_hours->second)) {
        throw ArgumentError("generate_synthetic: signal window must satisfy 0 <= begin < end");
    }

    Rng rng(options.seed);
    const double s = options.signal_strength;
    const bool windowed = options.signal_window_hours.has_value();

    Populations pop;
    for (std::size_t i = 0; i < kBots; ++i) pop.bots.push_back(make_bot(rng, i));
    for (std::size_t i = 0; i < kHumans; ++i) pop.humans.push_back(make_human(rng, i));

    const auto n = options.n_articles;
    const auto n_fake = static_cast<std::size_t>(std::floor(options.fake_fraction * static_cast<double>(n) + 1e-9));
    std::vector<Label> labels(n, Label::real);
    std::fill_n(labels.begin(), n_fake, Label::fake);
    rng.shuffle(std::span<Label>(labels));

    std::vector<NewsRecord> news;
    std::vector<Engagement> engagements;
    std::set<std::string> used_users;
    std::size_t engagement_seq = 0;

    for (std::size_t a = 0; a < n; ++a) {
        const bool fake = labels[a] == Label::fake;
        // Probability that a signal-bearing draw leans fake.
        const double signal_p = fake ? 0.5 * (1.0 + s) : 0.5 * (1.0 - s);
        const double meta_p = windowed ? 0.5 : signal_p;

        NewsRecord nr;
        nr.news_id = numbered("news_", a, 5);
        nr.review_rating = static_cast<int>(fake ? rng.uniform_int(0, 2) : rng.uniform_int(3, 5));
        const bool fake_leaning_pub = rng.bernoulli(meta_p);
        nr.publisher = numbered(fake_leaning_pub ? "pub_f" : "pub_r",
                                static_cast<std::size_t>(rng.uniform_int(0, kPublishersPerSide - 1)), 2);
        std::set<std::string> tags;
        for (auto t = rng.uniform_int(1, 3); t > 0; --t) {
            const bool fake_tag = rng.bernoulli(meta_p);
            tags.insert(numbered(fake_tag ? "tag_f" : "tag_r",
                                 static_cast<std::size_t>(rng.uniform_int(0, kTagsPerSide - 1)), 2));
        }
        nr.tags.assign(tags.begin(), tags.end());

        const Timestamp t0 = shift_hours(kEpoch, rng.uniform(0.0, 30.0 * 24.0));

        struct Slot {
            EngagementKind kind;
            double hours;
            bool signal;
        };
        std::vector<Slot> slots;
        if (windowed) {
            const auto [begin, end] = *options.signal_window_hours;
            slots.push_back({EngagementKind::tweet, 0.0, false});
            slots.push_back({EngagementKind::tweet, rng.uniform(0.0, begin), false});
            slots.push_back({EngagementKind::retweet, rng.uniform(0.0, begin), false});
            for (auto i = rng.uniform_int(6, 10); i > 0; --i) slots.push_back({EngagementKind::tweet, rng.uniform(begin, end), true});
            for (auto i = rng.uniform_int(3, 6); i > 0; --i) slots.push_back({EngagementKind::retweet, rng.uniform(begin, end), true});
            for (auto i = rng.uniform_int(2, 4); i > 0; --i) slots.push_back({EngagementKind::tweet, rng.uniform(end, 48.0), false});
            for (auto i = rng.uniform_int(1, 3); i > 0; --i) slots.push_back({EngagementKind::retweet, rng.uniform(end, 48.0), false});
            for (auto i = rng.uniform_int(0, 3); i > 0; --i) slots.push_back({EngagementKind::reply, rng.uniform(0.0, 48.0), false});
        } else {
            const auto extra = fake ? static_cast<std::int64_t>(std::llround(s * rng.uniform(0.0, 6.0))) : 0;
            slots.push_back({EngagementKind::tweet, 0.0, true});
            for (auto i = rng.uniform_int(3, 11) + extra; i > 0; --i) {
                slots.push_back({EngagementKind::tweet, std::min(72.0, 10.0 * -std::log(1.0 - rng.uniform())), true});
            }
            for (auto i = rng.uniform_int(1, 8); i > 0; --i) {
                slots.push_back({EngagementKind::retweet, 0.05 + std::min(72.0, 12.0 * -std::log(1.0 - rng.uniform())), true});
            }
            for (auto i = rng.uniform_int(0, 3); i > 0; --i) {
                slots.push_back({EngagementKind::reply, std::min(72.0, 15.0 * -std::log(1.0 - rng.uniform())), true});
            }
        }

        for (const auto& slot : slots) {
            const double bot_p = slot.signal ? signal_p : 0.5;
            auto draw = draw_engagement(rng, pop, bot_p, slot.kind == EngagementKind::retweet);
            Engagement e;
            e.engagement_id = numbered("eng_", engagement_seq++, 7);
            e.news_id = nr.news_id;
            e.kind = slot.kind;
            e.user_id = draw.user->user_id;
            e.text = std::move(draw.text);
            e.created_at = shift_hours(t0, slot.hours);
            e.like_count = rng.uniform_int(0, slot.kind == EngagementKind::retweet ? 2 : 20);
            if (rng.bernoulli(0.4)) {
                e.hashtags.emplace_back(kHashtags[static_cast<std::size_t>(rng.uniform_int(0, kHashtags.size() - 1))]);
            }
            if (rng.bernoulli(0.2)) {
                e.mentioned_user_ids.push_back(numbered("usr_", static_cast<std::size_t>(rng.uniform_int(0, kHumans - 1)), 4));
            }
            used_users.insert(e.user_id);
            engagements.push_back(std::move(e));
        }
        news.push_back(std::move(nr));
    }

    std::map<std::string, UserRecord> users;
    for (const auto* pool : {&pop.bots, &pop.humans}) {
        for (const auto& u : *pool) {
            if (used_users.contains(u.user_id)) users.emplace(u.user_id, u);
        }
    }
    return make_corpus(std::move(news), std::move(engagements), std::move(users));
}

} // namespace somps
