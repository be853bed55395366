// Acceptance run: one PASS/FAIL line per criterion. Exit status is nonzero when
// any criterion fails. `--only <name>` runs a single criterion.

#include "../unit/gradient_check.hpp"
#include "../unit/test_support.hpp"

#include "somps/featurize/connectivity.hpp"
#include "somps/harness/artifacts.hpp"
#include "somps/harness/early_detection.hpp"
#include "somps/harness/pipeline.hpp"
#include "somps/harness/report.hpp"
#include "somps/ingest/synthetic.hpp"
#include "somps/neural/layers.hpp"
#include "somps/neural/model.hpp"
#include "somps/rng.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

using namespace somps;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string sci(double v) {
    std::ostringstream s;
    s << std::scientific << std::setprecision(2) << v;
    return s.str();
}

std::string fmt(double v, int precision = 4) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << v;
    return s.str();
}

// ---------------------------------------------------------------- connectivity

std::vector<std::string> random_id_set(Rng& rng) {
    std::set<std::string> s;
    const auto n = rng.uniform_int(0, 20);
    while (static_cast<std::int64_t>(s.size()) < n) s.insert("id" + std::to_string(rng.uniform_int(0, 40)));
    return {s.begin(), s.end()};
}

Outcome connectivity_oracle() {
    const auto start = Clock::now();
    Rng rng(2024);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        UserRecord x, y;
        x.follower_ids = random_id_set(rng);
        x.following_ids = random_id_set(rng);
        y.follower_ids = random_id_set(rng);
        y.following_ids = random_id_set(rng);
        // Oracle: enumerate the universe and test membership directly.
        std::set<std::string> universe;
        for (const auto* s : {&x.follower_ids, &x.following_ids, &y.follower_ids, &y.following_ids}) {
            universe.insert(s->begin(), s->end());
        }
        auto has = [](const std::vector<std::string>& v, const std::string& id) {
            return std::find(v.begin(), v.end(), id) != v.end();
        };
        std::size_t shared = 0;
        for (const auto& id : universe) {
            if ((has(x.follower_ids, id) && has(y.follower_ids, id)) ||
                (has(x.following_ids, id) && has(y.following_ids, id))) {
                ++shared;
            }
        }
        const double expected =
            universe.empty() ? 0.0 : static_cast<double>(shared) / static_cast<double>(universe.size());
        if (connectivity_score(x, y) != expected) ++mismatches;
    }
    const double elapsed = seconds_since(start);
    return {mismatches == 0 && elapsed < 5.0,
            std::to_string(mismatches) + " mismatches in 1000 pairs, " + fmt(elapsed, 3) + " s (limit 5 s)"};
}

// --------------------------------------------------------------- normalization

Outcome graph_normalization() {
    Rng rng(31);
    double worst_asymmetry = 0.0;
    double min_entry = 0.0;
    double max_radius = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(8, 8);
        for (int i = 0; i < 8; ++i) {
            for (int j = i + 1; j < 8; ++j) a(i, j) = a(j, i) = rng.bernoulli(0.3) ? 0.0 : rng.uniform();
        }
        const auto n = normalize_adjacency(a);
        worst_asymmetry = std::max(worst_asymmetry, (n - n.transpose()).cwiseAbs().maxCoeff());
        min_entry = std::min(min_entry, n.minCoeff());
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(0.5 * (n + n.transpose()));
        max_radius = std::max(max_radius, eig.eigenvalues().cwiseAbs().maxCoeff());
    }
    const bool zero_ok = normalize_adjacency(Eigen::MatrixXd::Zero(3, 3)) == Eigen::MatrixXd::Identity(3, 3);
    const bool pass = worst_asymmetry == 0.0 && min_entry >= 0.0 && max_radius <= 1.0 + 1e-6 && zero_ok;
    return {pass, "max |N - N^T| " + sci(worst_asymmetry) + ", min entry " + sci(min_entry) +
                      ", max spectral radius " + fmt(max_radius, 9) + " (limit 1 + 1e-6), A=0 -> I " +
                      (zero_ok ? "yes" : "no")};
}

// ------------------------------------------------------------------------- GCN

Eigen::MatrixXd loop_gcn(const Eigen::MatrixXd& a, const Eigen::MatrixXd& h0, const std::vector<Eigen::MatrixXd>& ws) {
    const auto k = a.rows();
    // Normalization by explicit loops.
    std::vector<double> degree(static_cast<std::size_t>(k), 0.0);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) degree[static_cast<std::size_t>(i)] += a(i, j) + (i == j ? 1.0 : 0.0);
    }
    Eigen::MatrixXd norm(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = 0; j < k; ++j) {
            norm(i, j) = (a(i, j) + (i == j ? 1.0 : 0.0)) /
                         std::sqrt(degree[static_cast<std::size_t>(i)] * degree[static_cast<std::size_t>(j)]);
        }
    }
    Eigen::MatrixXd h = h0;
    for (const auto& w : ws) {
        Eigen::MatrixXd next = Eigen::MatrixXd::Zero(k, w.cols());
        for (Eigen::Index i = 0; i < k; ++i) {
            for (Eigen::Index c = 0; c < w.cols(); ++c) {
                double sum = 0.0;
                for (Eigen::Index j = 0; j < k; ++j) {
                    for (Eigen::Index f = 0; f < h.cols(); ++f) sum += norm(i, j) * h(j, f) * w(f, c);
                }
                next(i, c) = sum > 0.0 ? sum : 0.0;
            }
        }
        h = next;
    }
    return h;
}

Outcome gcn_equivalence() {
    Rng rng(47);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = testing::random_symmetric(rng, 4, 4);
        const auto h0 = testing::random_matrix(rng, 4, 5);
        const std::vector<Eigen::MatrixXd> ws{testing::random_matrix(rng, 5, 6), testing::random_matrix(rng, 6, 6),
                                              testing::random_matrix(rng, 6, 3)};
        const auto got = gcn_forward(normalize_adjacency(a), h0, ws);
        worst = std::max(worst, (got - loop_gcn(a, h0, ws)).cwiseAbs().maxCoeff());
    }
    return {worst <= 1e-6, "max |diff| over 100 trials " + sci(worst) + " (limit 1e-6)"};
}

// ------------------------------------------------------------------- attention

Outcome attention_invariants() {
    Rng rng(53);
    double worst_row_sum = 0.0;
    double worst_permutation = 0.0;
    double worst_uniform_random = 0.0;
    bool uniform_exact = true;
    for (int trial = 0; trial < 100; ++trial) {
        const auto sq = rng.uniform_int(1, 6), sk = rng.uniform_int(1, 8);
        const auto q = testing::random_matrix(rng, sq, 4, -3, 3);
        const auto k = testing::random_matrix(rng, sk, 4, -3, 3);
        const auto v = testing::random_matrix(rng, sk, 5);
        const auto r = scaled_dot_attention(q, k, v);
        worst_row_sum = std::max(worst_row_sum, (r.weights.rowwise().sum().array() - 1.0).abs().maxCoeff());

        // Joint permutation of key and value rows.
        std::vector<Eigen::Index> perm(static_cast<std::size_t>(sk));
        std::iota(perm.begin(), perm.end(), Eigen::Index{0});
        rng.shuffle(std::span<Eigen::Index>(perm));
        Eigen::MatrixXd kp(sk, 4), vp(sk, 5);
        for (Eigen::Index i = 0; i < sk; ++i) {
            kp.row(i) = k.row(perm[static_cast<std::size_t>(i)]);
            vp.row(i) = v.row(perm[static_cast<std::size_t>(i)]);
        }
        worst_permutation = std::max(worst_permutation, (scaled_dot_attention(q, kp, vp).output - r.output).cwiseAbs().maxCoeff());

        // Same check through the multi-head layer.
        const auto kv = testing::random_matrix(rng, sk, 4);
        Eigen::MatrixXd kvp(sk, 4);
        for (Eigen::Index i = 0; i < sk; ++i) kvp.row(i) = kv.row(perm[static_cast<std::size_t>(i)]);
        const auto wq = testing::random_matrix(rng, 4, 6), wk = testing::random_matrix(rng, 4, 6);
        const auto wv = testing::random_matrix(rng, 4, 6), wo = testing::random_matrix(rng, 6, 3);
        const AttentionShape shape{2, 3, 3};
        const auto a1 = multi_head_attention(q, kv, wq, wk, wv, wo, shape);
        const auto a2 = multi_head_attention(q, kvp, wq, wk, wv, wo, shape);
        worst_permutation = std::max(worst_permutation, (a1.output - a2.output).cwiseAbs().maxCoeff());
        for (const auto& w : a1.weights) {
            worst_row_sum = std::max(worst_row_sum, (w.rowwise().sum().array() - 1.0).abs().maxCoeff());
        }

        // Uniform scores: queries orthogonal to every key.
        const Eigen::MatrixXd zero_q = Eigen::MatrixXd::Zero(sq, 4);
        const auto u = scaled_dot_attention(zero_q, k, v);
        const Eigen::RowVectorXd mean = v.colwise().mean();
        for (Eigen::Index i = 0; i < sq; ++i) {
            worst_uniform_random = std::max(worst_uniform_random, (u.output.row(i) - mean).cwiseAbs().maxCoeff());
        }
    }
    // With dyadic values and a power-of-two key count every operation is exact,
    // so the uniform case must reproduce the column mean bit for bit.
    for (Eigen::Index sk : {1, 2, 4, 8}) {
        Eigen::MatrixXd v(sk, 3);
        for (Eigen::Index i = 0; i < sk; ++i) {
            for (Eigen::Index j = 0; j < 3; ++j) v(i, j) = static_cast<double>(rng.uniform_int(-64, 64)) / 8.0;
        }
        const auto k = testing::random_matrix(rng, sk, 4);
        const auto u = scaled_dot_attention(Eigen::MatrixXd::Zero(3, 4), k, v);
        const Eigen::RowVectorXd mean = v.colwise().sum() / static_cast<double>(sk);
        for (Eigen::Index i = 0; i < 3; ++i) uniform_exact = uniform_exact && u.output.row(i) == mean;
    }
    const bool pass = worst_row_sum <= 1e-6 && worst_permutation <= 1e-6 && uniform_exact &&
                      worst_uniform_random <= 1e-12;
    return {pass, "max |row sum - 1| " + sci(worst_row_sum) + ", permutation max |diff| " +
                      sci(worst_permutation) + ", uniform-score output equals value mean: exact " +
                      (uniform_exact ? "yes" : "no") + ", max |diff| on random values " +
                      sci(worst_uniform_random)};
}

// --------------------------------------------------------------- gradient check

Outcome gradient_check() {
    const auto start = Clock::now();
    const auto config = testing::tiny_config();
    std::size_t checked = 0, mismatches = 0;
    double worst = 0.0;
    double worst_abs = 0.0;
    std::string first;
    for (auto variant : {ModelVariant::somps, ModelVariant::sig_only, ModelVariant::pns_only}) {
        for (bool training : {false, true}) {
            for (std::uint64_t seed : {1u, 2u}) {
                auto features = testing::tiny_features(seed);
                features.label = seed % 2 ? Label::real : Label::fake;
                const auto params = ModelParams::initialize(config, feature_dims(features), seed + 10);
                const auto r = testing::check_gradients(features, params, config, variant, training, seed + 20, 1e-4, 1e-3, 1e-10);
                checked += r.checked;
                mismatches += r.mismatches.size();
                worst = std::max(worst, r.worst_relative);
                worst_abs = std::max(worst_abs, r.worst_absolute);
                if (!r.mismatches.empty() && first.empty()) first = ", first: " + r.mismatches.front().tensor;
            }
        }
    }
    const double elapsed = seconds_since(start);
    return {mismatches == 0 && elapsed < 60.0,
            std::to_string(checked) + " entries, " + std::to_string(mismatches) + " beyond relative 1e-3 (worst relative " +
                sci(worst) + " above a 1e-10 floor, worst absolute " + sci(worst_abs) + ")" + first + ", " + fmt(elapsed, 2) + " s (limit 60 s)"};
}

// ------------------------------------------------------------ pipeline criteria

RunConfig pipeline_config(std::uint64_t seed, ModelVariant variant) {
    RunConfig c;
    c.model.seed = seed;
    c.split.seed = seed;
    c.variant = variant;
    return c;
}

EmbeddingTable synthetic_table(std::uint64_t seed) {
    return EmbeddingTable::random(synthetic_vocabulary(), 100, derive_seed(seed, 7));
}

Outcome end_to_end_learning() {
    const auto start = Clock::now();
    const auto corpus = generate_synthetic(200, 0.3, 7, 1.0);
    const auto table = synthetic_table(7);
    std::ostringstream detail;
    bool pass = true;
    for (auto variant : {ModelVariant::somps, ModelVariant::sig_only, ModelVariant::pns_only}) {
        const auto r = run_experiment(corpus, table, pipeline_config(7, variant));
        const double train_acc = r.train_report.metrics.accuracy;
        const double test_f1 = r.test_report.metrics.f1_macro;
        const bool ok = variant == ModelVariant::somps ? train_acc >= 0.95 && test_f1 >= 0.90 : test_f1 >= 0.75;
        pass = pass && ok;
        detail << to_string(variant) << ": train acc " << fmt(train_acc) << ", test macro-F1 " << fmt(test_f1)
               << ", epochs " << r.training.log.epochs.size() << "; ";
    }
    const double elapsed = seconds_since(start);
    pass = pass && elapsed < 600.0;
    detail << "limits: somps train acc >= 0.95 and test F1 >= 0.90, sig/pns test F1 >= 0.75; " << fmt(elapsed, 1)
           << " s (limit 600 s)";
    return {pass, detail.str()};
}

Outcome signal_ablation() {
    const auto corpus = generate_synthetic(200, 0.3, 7, 0.0);
    const auto r = run_experiment(corpus, synthetic_table(7), pipeline_config(7, ModelVariant::somps));
    const double f1 = r.test_report.metrics.f1_macro;
    return {f1 >= 0.35 && f1 <= 0.65, "signal 0.0: test macro-F1 " + fmt(f1) + " (bounds [0.35, 0.65])"};
}

Outcome early_detection() {
    SyntheticOptions o;
    o.n_articles = 200;
    o.fake_fraction = 0.3;
    o.seed = 7;
    o.signal_strength = 1.0;
    o.signal_window_hours = std::pair{4.0, 6.0};
    const auto corpus = filter_eligible(generate_synthetic(o));
    const auto config = pipeline_config(7, ModelVariant::somps);
    const auto splits = stratified_split(corpus, config.split);
    const auto curve = early_detection_sweep(corpus, synthetic_table(7), splits, config.featurize, config.model,
                                             config.variant, config.training, 12);
    std::ostringstream detail;
    bool pass = !curve.points.empty() && curve.points.front().valid();
    const double f1_at_4 = pass ? curve.points.front().report->metrics.f1_macro : 0.0;
    std::size_t previous = 0;
    bool monotone = true;
    for (const auto& p : curve.points) {
        monotone = monotone && p.eligible >= previous;
        previous = p.eligible;
        detail << fmt(p.cutoff_hours, 0) << "h ";
        if (p.valid()) {
            const double f1 = p.report->metrics.f1_macro;
            detail << "F1 " << fmt(f1);
            if (p.cutoff_hours >= 8.0) pass = pass && f1 >= f1_at_4 + 0.05;
        } else {
            detail << "invalid";
            pass = false;
        }
        detail << " (eligible " << p.eligible << "); ";
    }
    pass = pass && monotone;
    detail << "every cutoff >= 8h must beat 4h by 0.05; eligible non-decreasing: " << (monotone ? "yes" : "no");
    return {pass, detail.str()};
}

struct PipelineBytes {
    std::string corpus, features, checkpoint, report, log;
};

PipelineBytes pipeline_bytes() {
    RunConfig config = pipeline_config(11, ModelVariant::somps);
    config.training.max_epochs = 8;
    const auto corpus = generate_synthetic(120, 0.3, 11, 0.7);
    const auto table = synthetic_table(11);
    const auto r = run_experiment(corpus, table, config);
    PipelineBytes out;
    std::ostringstream c, f, k;
    save_corpus(corpus, c);
    out.corpus = c.str();
    write_feature_cache({config_echo(config), config.split, r.splits, r.features}, f);
    out.features = f.str();
    write_checkpoint({config_echo(config), config.variant, config.model, feature_dims(r.features.articles.front()),
                      r.training.params, r.training.log.best_epoch},
                     k);
    out.checkpoint = k.str();
    out.report = report_json(r.test_report, config_echo(config), "test");
    out.log = training_log_json(r.training.log, config.variant, config_echo(config));
    return out;
}

Outcome determinism() {
    const auto a = pipeline_bytes();
    const auto b = pipeline_bytes();
    std::vector<std::string> differing;
    if (a.corpus != b.corpus) differing.push_back("corpus");
    if (a.features != b.features) differing.push_back("features");
    if (a.checkpoint != b.checkpoint) differing.push_back("checkpoint");
    if (a.report != b.report) differing.push_back("report");
    if (a.log != b.log) differing.push_back("training log");
    std::string detail = "corpus " + std::to_string(a.corpus.size()) + " B, features " +
                         std::to_string(a.features.size()) + " B, checkpoint " + std::to_string(a.checkpoint.size()) +
                         " B, report " + std::to_string(a.report.size()) + " B; ";
    if (differing.empty()) {
        detail += "all byte-identical across two runs";
    } else {
        detail += "differing:";
        for (const auto& d : differing) detail += " " + d;
    }
    return {differing.empty(), detail};
}

Corpus mutate_articles(const Corpus& corpus, const std::set<std::string>& targets) {
    std::vector<NewsRecord> news(corpus.news().begin(), corpus.news().end());
    std::vector<Engagement> engagements;
    auto users = corpus.users();
    for (auto& n : news) {
        const auto list = corpus.engagements_of(n.news_id);
        if (!targets.count(n.news_id)) {
            engagements.insert(engagements.end(), list.begin(), list.end());
            continue;
        }
        n.publisher = "pub_mutated";
        n.tags = {"tag_mutated"};
        n.review_rating = 5 - n.review_rating;
        n.label = label_from_rating(n.review_rating);
        std::size_t i = 0;
        for (auto e : list) {
            e.text = "entirely new words mutated";
            e.like_count = e.like_count * 7 + 3;
            e.hashtags = {"mutated"};
            e.created_at += std::chrono::hours(1);
            engagements.push_back(e);
            for (int extra = 0; extra < 2; ++extra) {
                auto copy = e;
                copy.engagement_id = n.news_id + "_extra_" + std::to_string(i++);
                copy.user_id = "mutant_" + std::to_string(i % 17);
                copy.kind = extra ? EngagementKind::retweet : EngagementKind::tweet;
                users[copy.user_id].user_id = copy.user_id;
                users[copy.user_id].followers_count = 1000000;
                engagements.push_back(copy);
            }
        }
    }
    return make_corpus(news, engagements, users);
}

Outcome leakage_guard() {
    const auto corpus = filter_eligible(generate_synthetic(200, 0.3, 7, 1.0));
    const auto table = synthetic_table(7);
    const auto splits = stratified_split(corpus, SplitSpec{0.75, 0.10, 0.15, 7});
    const FeaturizeOptions options;
    const auto baseline = fit_statistics(corpus, splits.train, table, options);
    std::size_t changed = 0;
    for (const auto& id : splits.test) {
        if (!(fit_statistics(mutate_articles(corpus, {id}), splits.train, table, options) == baseline)) ++changed;
    }
    const std::set<std::string> all_test(splits.test.begin(), splits.test.end());
    const bool all_ok = fit_statistics(mutate_articles(corpus, all_test), splits.train, table, options) == baseline;
    // Control: the same mutation on a training article must move the statistics.
    const bool control_moves =
        !(fit_statistics(mutate_articles(corpus, {splits.train.front()}), splits.train, table, options) == baseline);
    return {changed == 0 && all_ok && control_moves,
            std::to_string(splits.test.size()) + " test articles mutated one at a time: " + std::to_string(changed) +
                " changed a fitted statistic; all at once: " + (all_ok ? "unchanged" : "CHANGED") +
                "; control (train article mutated) moves statistics: " + (control_moves ? "yes" : "no")};
}

} // namespace

int main(int argc, char** argv) {
    std::string only;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--only") only = argv[i + 1];
    }
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"connectivity_oracle", connectivity_oracle},
        {"graph_normalization", graph_normalization},
        {"gcn_equivalence", gcn_equivalence},
        {"attention_invariants", attention_invariants},
        {"gradient_check", gradient_check},
        {"end_to_end_learning", end_to_end_learning},
        {"signal_ablation", signal_ablation},
        {"early_detection", early_detection},
        {"determinism", determinism},
        {"leakage_guard", leakage_guard},
    };
    int failures = 0;
    int ran = 0;
    for (const auto& [name, run] : criteria) {
        if (!only.empty() && name != only) continue;
        ++ran;
        Outcome outcome;
        const auto start = Clock::now();
        try {
            outcome = run();
        } catch (const std::exception& e) {
            outcome = {false, std::string("exception: ") + e.what()};
        }
        failures += outcome.pass ? 0 : 1;
        std::cout << (outcome.pass ? "PASS " : "FAIL ") << name << ": " << outcome.detail << " ["
                  << fmt(seconds_since(start), 1) << " s]" << std::endl;
    }
    if (ran == 0) {
        std::cerr << "unknown criterion '" << only << "'\n";
        return 2;
    }
    std::cout << (ran - failures) << "/" << ran << " criteria passed" << std::endl;
    return failures == 0 ? 0 : 1;
}
