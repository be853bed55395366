#include "somps/error.hpp"
#include "somps/featurize/article.hpp"
#include "somps/featurize/connectivity.hpp"
#include "somps/featurize/embedding.hpp"
#include "somps/featurize/pns.hpp"
#include "somps/featurize/sizing.hpp"
#include "somps/featurize/standardizer.hpp"
#include "somps/featurize/user_activity.hpp"
#include "somps/ingest/synthetic.hpp"
#include "somps/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>

namespace somps {
namespace {

using std::chrono::hours;

const Timestamp kT0 = parse_iso8601("2020-01-01T00:00:00Z");

UserRecord user(std::string id, std::vector<std::string> followers, std::vector<std::string> following) {
    UserRecord u;
    u.user_id = std::move(id);
    std::sort(followers.begin(), followers.end());
    std::sort(following.begin(), following.end());
    u.follower_ids = std::move(followers);
    u.following_ids = std::move(following);
    return u;
}

Engagement engagement(const std::string& id, EngagementKind kind, const std::string& uid, Timestamp at) {
    Engagement e;
    e.engagement_id = id;
    e.news_id = "n";
    e.kind = kind;
    e.user_id = uid;
    e.created_at = at;
    return e;
}

// Set-algebra oracle kept deliberately naive: std::set and explicit loops.
double brute_force_score(const UserRecord& x, const UserRecord& y) {
    const std::set<std::string> fx(x.follower_ids.begin(), x.follower_ids.end());
    const std::set<std::string> fy(y.follower_ids.begin(), y.follower_ids.end());
    const std::set<std::string> gx(x.following_ids.begin(), x.following_ids.end());
    const std::set<std::string> gy(y.following_ids.begin(), y.following_ids.end());
    std::set<std::string> all, shared;
    for (const auto* s : {&fx, &fy, &gx, &gy}) all.insert(s->begin(), s->end());
    for (const auto& v : fx) if (fy.count(v)) shared.insert(v);
    for (const auto& v : gx) if (gy.count(v)) shared.insert(v);
    return all.empty() ? 0.0 : static_cast<double>(shared.size()) / static_cast<double>(all.size());
}

TEST(Connectivity, HandExamples) {
    const auto x = user("x", {"1", "2"}, {"4"});
    const auto y = user("y", {"2", "3"}, {"4", "5"});
    EXPECT_DOUBLE_EQ(connectivity_score(x, y), 0.4);
    EXPECT_DOUBLE_EQ(connectivity_score(x, x), 1.0);
    EXPECT_DOUBLE_EQ(connectivity_score(user("a", {"1"}, {"2"}), user("b", {"3"}, {"4"})), 0.0);
    EXPECT_DOUBLE_EQ(connectivity_score(user("a", {}, {}), user("b", {}, {})), 0.0);
}

TEST(Connectivity, MatchesBruteForceOracle) {
    Rng rng(11);
    auto random_ids = [&] {
        std::set<std::string> s;
        const auto n = rng.uniform_int(0, 20);
        for (std::int64_t i = 0; i < n; ++i) s.insert(std::to_string(rng.uniform_int(0, 30)));
        return std::vector<std::string>(s.begin(), s.end());
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const auto x = user("x", random_ids(), random_ids());
        const auto y = user("y", random_ids(), random_ids());
        const double s = connectivity_score(x, y);
        ASSERT_EQ(s, brute_force_score(x, y)) << trial;
        ASSERT_EQ(s, connectivity_score(y, x));
        ASSERT_GE(s, 0.0);
        ASSERT_LE(s, 1.0);
    }
}

TEST(Connectivity, MatrixShapesAndEntries) {
    const auto a = user("a", {"1", "2"}, {"3"});
    const auto b = user("b", {"2"}, {"3", "4"});
    const auto c = user("c", {"9"}, {"1"});
    const std::vector<const UserRecord*> one{&a};
    EXPECT_TRUE(build_connectivity_matrix(one, 4).isZero());
    EXPECT_EQ(build_connectivity_matrix(one, 4).rows(), 4);

    const std::vector<const UserRecord*> three{&a, &b, &c};
    const auto m = build_connectivity_matrix(three, 4);
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(m(i, i), 0.0);
        for (int j = 0; j < 3; ++j) {
            if (i != j) EXPECT_EQ(m(i, j), brute_force_score(*three[i], *three[j]));
        }
    }
    EXPECT_TRUE(m.row(3).isZero());
    EXPECT_TRUE(m.col(3).isZero());
    EXPECT_THROW(build_connectivity_matrix(three, 2), ArgumentError);
}

TEST(UserActivity, PostsPerDay) {
    UserRecord u;
    for (int i = 0; i < 20; ++i) u.post_timestamps.push_back(kT0 + hours(i * 12));
    // 20 posts over 9.5 days -> ceil = 10 days.
    EXPECT_DOUBLE_EQ(average_posts_per_day(u), 2.0);
    EXPECT_DOUBLE_EQ(max_posts_per_day(u), 2.0);
    EXPECT_EQ(average_posts_per_day(UserRecord{}), 0.0);
    EXPECT_EQ(max_posts_per_day(UserRecord{}), 0.0);
}

TEST(UserActivity, RowsForTweetsAndRetweets) {
    NewsRecord article;
    article.news_id = "n";
    article.first_tweet_time = kT0;
    article.first_retweet_time = kT0 + hours(5);

    UserRecord fresh = user("fresh", {}, {});
    fresh.account_created_at = kT0;
    fresh.verified = true;
    fresh.followers_count = 12;
    UserRecord old = user("old", {}, {});
    old.account_created_at = kT0 - hours(24 * 30);

    const std::vector<Engagement> tweets{engagement("1", EngagementKind::tweet, "fresh", kT0),
                                         engagement("2", EngagementKind::tweet, "old", kT0 + hours(1)),
                                         engagement("3", EngagementKind::tweet, "fresh", kT0 + hours(2)),
                                         engagement("4", EngagementKind::tweet, "fresh", kT0 + hours(3))};
    const std::vector<const UserRecord*> users{&fresh, &old};
    const auto h = build_user_activity_matrix(users, tweets, article, EngagementKind::tweet, 3);
    ASSERT_EQ(h.rows(), 3);
    ASSERT_EQ(h.cols(), uam::kWidth);
    EXPECT_EQ(h(0, uam::kVerified), 1.0);
    EXPECT_EQ(h(0, uam::kFollowers), 12.0);
    EXPECT_EQ(h(0, uam::kAccountAgeDays), 0.0);
    EXPECT_EQ(h(0, uam::kAvgPostsPerDay), 0.0);
    EXPECT_EQ(h(0, uam::kMaxPostsPerDay), 0.0);
    EXPECT_EQ(h(0, uam::kKindSpecific), 3.0);
    EXPECT_EQ(h(1, uam::kKindSpecific), 1.0);
    EXPECT_NEAR(h(1, uam::kAccountAgeDays), 30.0 + 1.0 / 24.0, 1e-12);
    EXPECT_TRUE(h.row(2).isZero());

    const std::vector<Engagement> retweets{engagement("5", EngagementKind::retweet, "old", kT0 + hours(5))};
    const std::vector<const UserRecord*> rt_users{&old};
    const auto r = build_user_activity_matrix(rt_users, retweets, article, EngagementKind::retweet, 2);
    EXPECT_EQ(r(0, uam::kKindSpecific), 5.0);

    const std::vector<Engagement> stranger{engagement("6", EngagementKind::tweet, "nobody", kT0)};
    EXPECT_THROW(build_user_activity_matrix(users, stranger, article, EngagementKind::tweet, 3), ArgumentError);
}

TEST(Embedding, TokenizeStripsUrlsAndPunctuation) {
    EXPECT_EQ(tokenize("Vaccines WORK! see https://x.co/abc, www.site.org now."),
              (std::vector<std::string>{"vaccines", "work", "see", "now"}));
    EXPECT_TRUE(tokenize("  ...  ").empty());
}

EmbeddingTable ab_table() {
    Eigen::MatrixXd v(2, 2);
    v << 1, 0, 0, 2;
    return EmbeddingTable({"a", "b"}, v);
}

TEST(Embedding, AveragesPaddedSequences) {
    const auto table = ab_table();
    const std::vector<std::string> texts{"a b", "a"};
    Eigen::MatrixXd expected(2, 2);
    expected << 1, 0, 0, 1;
    EXPECT_TRUE(embed_engagements(texts, table, 2).isApprox(expected));

    const std::vector<std::string> reversed{"a", "a b"};
    EXPECT_EQ(embed_engagements(reversed, table, 2), embed_engagements(texts, table, 2));

    const std::vector<std::string> oov{"zzz qqq"};
    EXPECT_TRUE(embed_engagements(oov, table, 2).isZero());
    const std::vector<std::string> one{"b a"};
    const std::vector<std::string> many{"b a", "b a", "b a"};
    EXPECT_TRUE(embed_engagements(many, table, 2).isApprox(embed_engagements(one, table, 2)));
    EXPECT_TRUE(embed_engagements({}, table, 3).isZero());
    EXPECT_EQ(table.lookup("missing").size(), 2);
    EXPECT_TRUE(table.lookup("missing").isZero());
}

TEST(Embedding, TextFileRoundTripAndDimensionCheck) {
    const auto dir = std::filesystem::temp_directory_path() / "somps_embedding_test";
    std::filesystem::create_directories(dir);
    const auto table = EmbeddingTable::random({"x", "y", "z"}, 5, 3);
    table.save(dir / "e.txt");
    const auto back = EmbeddingTable::load(dir / "e.txt");
    EXPECT_EQ(back.tokens(), table.tokens());
    EXPECT_EQ(back.vectors(), table.vectors());
    std::ofstream(dir / "bad.txt") << "a 1 2\nb 1\n";
    EXPECT_THROW(EmbeddingTable::load(dir / "bad.txt"), ParseError);
    EXPECT_THROW(EmbeddingTable::load(dir / "missing.txt"), Error);
    std::filesystem::remove_all(dir);
}

TEST(Sizing, LowerMedian) {
    EXPECT_EQ(lower_median({1, 2, 3}), 2u);
    EXPECT_EQ(lower_median({8, 2, 6, 4}), 4u);
    EXPECT_THROW(lower_median({}), ArgumentError);
    Rng rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<std::size_t> v(static_cast<std::size_t>(rng.uniform_int(1, 30)));
        for (auto& x : v) x = static_cast<std::size_t>(rng.uniform_int(0, 50));
        auto sorted = v;
        std::sort(sorted.begin(), sorted.end());
        ASSERT_EQ(lower_median(v), sorted[(sorted.size() - 1) / 2]);
    }
}

TEST(Pns, CountsAndLifetime) {
    NewsRecord article;
    article.news_id = "n";
    article.publisher = "p";
    article.tags = {"t1"};
    article.first_tweet_time = kT0;

    const std::vector<std::int64_t> likes{3, 0, 1, 0, 0, 2, 0, 0};
    std::vector<Engagement> list;
    for (int i = 0; i < 8; ++i) {
        const auto kind = i < 5 ? EngagementKind::tweet : i < 7 ? EngagementKind::retweet : EngagementKind::reply;
        auto e = engagement(std::to_string(i), kind, "u", kT0 + hours(i * 6));
        e.like_count = likes[static_cast<std::size_t>(i)];
        e.hashtags = {i % 2 ? "x" : "y"};
        e.mentioned_user_ids = {std::to_string(i % 3)};
        list.push_back(e);
    }

    PnsEncoders enc;
    const std::vector<std::vector<std::string>> tags{{"t1", "t2"}, {"t1"}};
    const std::vector<std::vector<std::string>> pubs{{"p"}, {"q"}};
    EXPECT_THROW(build_pns_vector(article, list, enc), StateError);
    enc.tags.fit(tags, 5);
    enc.publishers.fit(pubs, 5);
    enc.ratings.mean_by_publisher = {{"p", 4.0}};
    enc.ratings.global_mean = 2.5;
    enc.ratings.fitted = true;

    const auto v = build_pns_vector(article, list, enc);
    ASSERT_EQ(static_cast<std::size_t>(v.size()), enc.width());
    EXPECT_EQ(v(pns::kTweets), 5.0);
    EXPECT_EQ(v(pns::kRetweets), 2.0);
    EXPECT_EQ(v(pns::kReplies), 1.0);
    EXPECT_EQ(v(pns::kTotalLikes), 6.0);
    EXPECT_EQ(v(pns::kUniqueHashtags), 2.0);
    EXPECT_EQ(v(pns::kUniqueMentions), 3.0);
    EXPECT_DOUBLE_EQ(v(pns::kLifetimeDays), 42.0 / 24.0);
    EXPECT_EQ(v(pns::kPublisherRating), 4.0);

    // Tags: t1, t2, other; publishers: p, q, other.
    EXPECT_EQ(v(pns::kNumericCount + 0), 1.0);
    EXPECT_EQ(v(pns::kNumericCount + 1), 0.0);
    EXPECT_EQ(v(pns::kNumericCount + 3), 1.0);

    article.publisher = "unseen";
    const std::vector<Engagement> at_start{engagement("a", EngagementKind::tweet, "u", kT0)};
    const auto w = build_pns_vector(article, at_start, enc);
    EXPECT_EQ(w(pns::kPublisherRating), 2.5);
    EXPECT_EQ(w(pns::kLifetimeDays), 0.0);
    EXPECT_EQ(w(pns::kNumericCount + 3 + 2), 1.0);
}

TEST(Standardizer, ZScoresNumericBlockOnly) {
    Standardizer s(1, 2);
    std::vector<Eigen::RowVectorXd> rows;
    for (double x : {1.0, 3.0}) {
        Eigen::RowVectorXd r(3);
        r << 1.0, x, 7.0;
        rows.push_back(r);
    }
    s.fit(rows);
    Eigen::MatrixXd m(3, 3);
    m << 1, 1, 7, 0, 3, 7, 0, 0, 0;
    s.apply_rows(m, 2);
    EXPECT_EQ(m(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(m(0, 1), -1.0);
    EXPECT_DOUBLE_EQ(m(1, 1), 1.0);
    EXPECT_EQ(m(0, 2), 0.0);
    EXPECT_TRUE(m.row(2).isZero());
}

class ArticleFeaturization : public ::testing::Test {
protected:
    void SetUp() override {
        SyntheticOptions o;
        o.n_articles = 20;
        o.seed = 4;
        o.signal_window_hours = std::pair{4.0, 6.0};
        corpus_ = generate_synthetic(o);
        table_ = EmbeddingTable::random(synthetic_vocabulary(), 6, 1);
        for (const auto& n : corpus_.news()) ids_.push_back(n.news_id);
    }
    Corpus corpus_;
    EmbeddingTable table_;
    std::vector<std::string> ids_;
};

TEST_F(ArticleFeaturization, ShapesAndInvariants) {
    const auto set = build_feature_set(corpus_, ids_, table_, {});
    ASSERT_EQ(set.articles.size(), corpus_.size());
    const auto& s = set.stats.sizing;
    for (const auto& a : set.articles) {
        for (const auto* b : {&a.tweet, &a.retweet}) {
            const auto k = b == &a.tweet ? s.k_tweet : s.k_retweet;
            ASSERT_EQ(b->adjacency.rows(), static_cast<Eigen::Index>(k));
            ASSERT_EQ(b->activity.rows(), static_cast<Eigen::Index>(k));
            ASSERT_EQ(b->embedding.rows(), static_cast<Eigen::Index>(s.seq_len));
            ASSERT_EQ(b->embedding.cols(), 6);
            EXPECT_TRUE(b->adjacency.isApprox(b->adjacency.transpose()));
            EXPECT_GE(b->adjacency.minCoeff(), 0.0);
            EXPECT_LE(b->adjacency.maxCoeff(), 1.0);
            EXPECT_TRUE(b->adjacency.diagonal().isZero());
            for (auto r = static_cast<Eigen::Index>(b->valid_users); r < b->activity.rows(); ++r) {
                EXPECT_TRUE(b->activity.row(r).isZero());
            }
            EXPECT_TRUE(b->activity.allFinite());
        }
        EXPECT_TRUE(a.pns.allFinite());
    }
}

TEST_F(ArticleFeaturization, CutoffBehaviour) {
    const auto& article = corpus_.news().front();
    const auto huge = featurize_article(article, corpus_, compute_sizing(corpus_), table_,
                                        fit_pns_encoders(corpus_, ids_, 10, 10), 1e6);
    const auto none = featurize_article(article, corpus_, compute_sizing(corpus_), table_,
                                        fit_pns_encoders(corpus_, ids_, 10, 10), std::nullopt);
    EXPECT_EQ(huge->tweet.activity, none->tweet.activity);
    EXPECT_EQ(huge->retweet.embedding, none->retweet.embedding);
    EXPECT_EQ(huge->pns, none->pns);

    for (const auto& n : corpus_.news()) {
        std::size_t previous = 0;
        for (double c : {4.0, 8.0, 12.0, 20.0}) {
            const auto visible = visible_engagements(corpus_, n, c);
            EXPECT_GE(visible.size(), previous);
            const auto wider = visible_engagements(corpus_, n, c + 4.0);
            for (std::size_t i = 0; i < visible.size(); ++i) {
                EXPECT_EQ(visible[i].engagement_id, wider[i].engagement_id);
            }
            previous = visible.size();
        }
    }
}

TEST(ArticleFeaturizationEdge, RetweetsAfterCutoffGiveEmptyBranch) {
    std::vector<NewsRecord> news(1);
    news[0].news_id = "n";
    news[0].review_rating = 4;
    std::vector<Engagement> eng{engagement("1", EngagementKind::tweet, "a", kT0),
                                engagement("2", EngagementKind::tweet, "b", kT0 + hours(1)),
                                engagement("3", EngagementKind::retweet, "b", kT0 + hours(6))};
    eng[0].text = "a b";
    eng[2].text = "a";
    std::map<std::string, UserRecord> users{{"a", user("a", {"x"}, {})}, {"b", user("b", {"x"}, {})}};
    const auto c = make_corpus(news, eng, users);
    const std::vector<std::string> ids{"n"};
    const auto enc = fit_pns_encoders(c, ids, 5, 5);
    const SizingParams s{2, 2, 2};
    const auto f = featurize_article(c.news_at("n"), c, s, ab_table(), enc, 4.0);
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->retweet.valid_users, 0u);
    EXPECT_TRUE(f->retweet.adjacency.isZero());
    EXPECT_TRUE(f->retweet.activity.isZero());
    EXPECT_TRUE(f->retweet.embedding.isZero());
    EXPECT_EQ(f->tweet.valid_users, 2u);
    EXPECT_EQ(f->tweet.adjacency(0, 1), 1.0);
    EXPECT_EQ(f->pns(pns::kRetweets), 0.0);

    // The window opens at the first tweet, so only tweetless articles are ineligible.
    std::vector<Engagement> late{engagement("1", EngagementKind::retweet, "a", kT0),
                                 engagement("2", EngagementKind::tweet, "b", kT0 + hours(1))};
    const auto c2 = make_corpus(news, late, users);
    EXPECT_TRUE(featurize_article(c2.news_at("n"), c2, s, ab_table(), enc, 0.0).has_value());
    std::vector<Engagement> no_tweets{engagement("1", EngagementKind::retweet, "a", kT0)};
    const auto c3 = make_corpus(news, no_tweets, users);
    EXPECT_FALSE(featurize_article(c3.news_at("n"), c3, s, ab_table(), enc, 4.0).has_value());
    EXPECT_FALSE(featurize_article(c3.news_at("n"), c3, s, ab_table(), enc, std::nullopt).has_value());
}

} // namespace
} // namespace somps
