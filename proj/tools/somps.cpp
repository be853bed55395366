// Command-line entry point: ingest, synth, featurize, train, eval,
// early-detect and plot-data.

#include "somps/error.hpp"
#include "somps/featurize/embedding.hpp"
#include "somps/harness/artifacts.hpp"
#include "somps/harness/early_detection.hpp"
#include "somps/harness/metrics.hpp"
#include "somps/harness/report.hpp"
#include "somps/harness/run_config.hpp"
#include "somps/ingest/corpus.hpp"
#include "somps/ingest/synthetic.hpp"
#include "somps/neural/model.hpp"
#include "somps/rng.hpp"
#include "somps/version.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace somps;

namespace {

struct ConfigFlags {
    std::string config_path;
    std::vector<std::string> overrides;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "key = value config file");
        cmd->add_option("--set", overrides, "override one config key (key=value), repeatable");
    }

    RunConfig load() const {
        RunConfig config = config_path.empty() ? RunConfig{} : load_run_config(config_path);
        for (const auto& o : overrides) apply_override(config, o);
        config.validate();
        return config;
    }
};

void write_text(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

std::string read_text(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return text.str();
}

void ensure_parent(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
}

void print_quality(const Corpus& corpus) {
    const auto& q = corpus.quality();
    std::cerr << "articles: " << corpus.size() << ", users: " << corpus.users().size() << "\n";
    for (const auto& [field, count] : q.defaulted_fields) {
        std::cerr << "defaulted " << field << ": " << count << " records\n";
    }
    if (!q.retweet_before_tweet.empty()) {
        std::cerr << "articles with a retweet before the first tweet: " << q.retweet_before_tweet.size() << "\n";
    }
    if (q.duplicate_network_ids_removed) {
        std::cerr << "duplicate follower/following ids removed: " << q.duplicate_network_ids_removed << "\n";
    }
    if (q.self_references_removed) std::cerr << "self references removed: " << q.self_references_removed << "\n";
}

const std::vector<std::string>& split_ids(const Splits& splits, const std::string& name) {
    if (name == "train") return splits.train;
    if (name == "val") return splits.val;
    if (name == "test") return splits.test;
    throw ArgumentError("unknown split '" + name + "' (train, val, test)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"SOMPS-Net fake health news detection pipeline"};
    app.require_subcommand(1);
    app.set_version_flag("--version",
                         std::string("somps ") + std::string(kVersion) + " (corpus format " +
                             std::to_string(kCorpusFormatVersion) + ", feature format " +
                             std::to_string(kFeatureFormatVersion) + ", checkpoint format " +
                             std::to_string(kCheckpointFormatVersion) + ", report format " +
                             std::to_string(kReportFormatVersion) + ")");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Load JSONL records, drop ineligible articles, write corpus.bin");
    std::string news_path, engagements_path, users_path, ingest_out;
    bool keep_all = false;
    ingest->add_option("--news", news_path, "news.jsonl")->required();
    ingest->add_option("--engagements", engagements_path, "engagements.jsonl")->required();
    ingest->add_option("--users", users_path, "users.jsonl")->required();
    ingest->add_option("--out", ingest_out, "output corpus.bin")->required();
    ingest->add_flag("--keep-ineligible", keep_all, "keep articles lacking a tweet or a retweet");

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with a planted signal");
    std::string synth_out;
    SyntheticOptions synth_options;
    std::vector<double> window;
    std::size_t synth_dim = 100;
    synth->add_option("--out", synth_out, "output directory")->required();
    synth->add_option("--n", synth_options.n_articles, "number of articles")->capture_default_str();
    synth->add_option("--fake-fraction", synth_options.fake_fraction, "fraction of fake articles")->capture_default_str();
    synth->add_option("--seed", synth_options.seed, "random seed")->capture_default_str();
    synth->add_option("--signal", synth_options.signal_strength, "signal strength in [0, 1]")->capture_default_str();
    synth->add_option("--signal-window", window, "hours BEGIN END after the first tweet holding the signal")
        ->expected(2);
    synth->add_option("--embedding-dim", synth_dim, "dimension of the generated embeddings.txt")->capture_default_str();

    // featurize
    auto* featurize = app.add_subcommand("featurize", "Split the corpus and build standardized features");
    std::string feat_corpus, feat_embeddings, feat_out;
    std::optional<std::uint64_t> feat_split_seed;
    ConfigFlags feat_flags;
    featurize->add_option("--corpus", feat_corpus, "corpus.bin")->required();
    featurize->add_option("--embeddings", feat_embeddings, "embedding text file")->required();
    featurize->add_option("--out", feat_out, "output features.bin")->required();
    featurize->add_option("--split-seed", feat_split_seed, "split seed (overrides split_seed)");
    feat_flags.attach(featurize);

    // train
    auto* train_cmd = app.add_subcommand("train", "Train a model on the train split of a feature cache");
    std::string train_features, train_out, train_log, train_variant;
    std::optional<std::uint64_t> train_split_seed;
    ConfigFlags train_flags;
    train_cmd->add_option("--features", train_features, "features.bin")->required();
    train_cmd->add_option("--out", train_out, "output model.ckpt")->required();
    train_cmd->add_option("--split-seed", train_split_seed, "must match the seed the features were split with");
    train_cmd->add_option("--variant", train_variant, "somps, sig or pns (overrides variant)");
    train_cmd->add_option("--log", train_log, "training log JSON (default: <out>.log.json)");
    train_flags.attach(train_cmd);

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint on one split");
    std::string eval_model, eval_features, eval_split = "test", eval_report, eval_variant;
    eval_cmd->add_option("--model", eval_model, "model.ckpt")->required();
    eval_cmd->add_option("--features", eval_features, "features.bin")->required();
    eval_cmd->add_option("--split", eval_split, "train, val or test")->capture_default_str();
    eval_cmd->add_option("--report", eval_report, "output report.json")->required();
    eval_cmd->add_option("--variant", eval_variant, "expected variant; a different checkpoint variant is an error");

    // early-detect
    auto* early = app.add_subcommand("early-detect", "Retrain and evaluate at cutoffs 4, 8, ... hours");
    std::string early_corpus, early_embeddings, early_out, early_variant;
    int max_hours = 24;
    ConfigFlags early_flags;
    early->add_option("--corpus", early_corpus, "corpus.bin")->required();
    early->add_option("--embeddings", early_embeddings, "embedding text file")->required();
    early->add_option("--max-hours", max_hours, "last cutoff, a multiple of 4")->capture_default_str();
    early->add_option("--out", early_out, "output curve.json")->required();
    early->add_option("--variant", early_variant, "somps, sig or pns (overrides variant)");
    early_flags.attach(early);

    // plot-data
    auto* plot = app.add_subcommand("plot-data", "Convert curve.json to CSV");
    std::string plot_curve, plot_out;
    plot->add_option("--curve", plot_curve, "curve.json")->required();
    plot->add_option("--out", plot_out, "output CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*ingest) {
            auto corpus = load_corpus(news_path, engagements_path, users_path);
            print_quality(corpus);
            if (!keep_all) {
                const auto before = corpus.size();
                corpus = filter_eligible(corpus);
                std::cerr << "eligible articles: " << corpus.size() << " of " << before << "\n";
            }
            ensure_parent(ingest_out);
            save_corpus(corpus, ingest_out);
        } else if (*synth) {
            if (!window.empty()) synth_options.signal_window_hours = std::pair{window[0], window[1]};
            const auto corpus = generate_synthetic(synth_options);
            const fs::path dir = synth_out;
            fs::create_directories(dir);
            save_corpus(corpus, dir / "corpus.bin");
            write_corpus_jsonl(corpus, dir);
            EmbeddingTable::random(synthetic_vocabulary(), synth_dim, derive_seed(synth_options.seed, 7)).save(
                dir / "embeddings.txt");
            std::cerr << "wrote " << corpus.size() << " articles to " << dir.string() << "\n";
        } else if (*featurize) {
            auto config = feat_flags.load();
            if (feat_split_seed) config.split.seed = *feat_split_seed;
            const auto corpus = filter_eligible(read_corpus(feat_corpus));
            const auto table = EmbeddingTable::load(feat_embeddings);
            FeatureCache cache;
            cache.split_spec = config.split;
            cache.splits = stratified_split(corpus, config.split);
            cache.features = build_feature_set(corpus, cache.splits.train, table, config.featurize);
            cache.config_echo = config_echo(config);
            ensure_parent(feat_out);
            save_feature_cache(cache, feat_out);
            const auto& s = cache.features.stats.sizing;
            std::cerr << "features: " << cache.features.articles.size() << " articles (" << cache.features.ineligible.size()
                      << " ineligible), k_tweet " << s.k_tweet << ", k_retweet " << s.k_retweet << ", seq_len "
                      << s.seq_len << "\n";
        } else if (*train_cmd) {
            auto config = train_flags.load();
            const auto cache = load_feature_cache(train_features);
            if (!train_variant.empty()) apply_override(config, "variant=" + train_variant);
            const auto seed = train_split_seed.value_or(cache.split_spec.seed);
            if (seed != cache.split_spec.seed) {
                throw ArgumentError("split seed " + std::to_string(seed) + " does not match the seed " +
                                    std::to_string(cache.split_spec.seed) + " stored in '" + train_features + "'");
            }
            // The split lives in the feature cache; keep the echo truthful.
            config.split = cache.split_spec;
            const auto train_set = select_features(cache.features, cache.splits.train);
            const auto val_set = select_features(cache.features, cache.splits.val);
            const auto result = train(train_set, val_set, config.model, config.variant, config.training);
            Checkpoint ck;
            ck.config_echo = config_echo(config);
            ck.variant = config.variant;
            ck.config = config.model;
            ck.dims = feature_dims(*train_set.front());
            ck.params = result.params;
            ck.best_epoch = result.log.best_epoch;
            ensure_parent(train_out);
            save_checkpoint(ck, train_out);
            write_text(train_log.empty() ? train_out + ".log.json" : train_log,
                       training_log_json(result.log, config.variant, ck.config_echo));
            const auto& best = result.log.epochs[result.log.best_epoch - 1];
            std::cerr << "best epoch " << result.log.best_epoch << " of " << result.log.epochs.size()
                      << ": train accuracy " << best.train_accuracy << ", val macro-F1 " << best.val_f1_macro << "\n";
        } else if (*eval_cmd) {
            const auto ck = load_checkpoint(eval_model);
            if (!eval_variant.empty()) {
                const auto expected = parse_variant(eval_variant);
                if (!expected) throw ArgumentError("unknown variant '" + eval_variant + "' (somps, sig, pns)");
                if (*expected != ck.variant) {
                    throw ArgumentError("variant mismatch: '" + eval_model + "' was trained as '" +
                                        std::string(to_string(ck.variant)) + "', not '" +
                                        std::string(to_string(*expected)) + "'");
                }
            }
            const auto cache = load_feature_cache(eval_features);
            if (!cache.features.articles.empty() && feature_dims(cache.features.articles.front()) != ck.dims) {
                throw ArgumentError("feature widths in '" + eval_features + "' do not match checkpoint '" + eval_model + "'");
            }
            const auto report =
                evaluate(ck.params, ck.config, cache.features, split_ids(cache.splits, eval_split), ck.variant);
            write_text(eval_report, report_json(report, ck.config_echo, eval_split));
            const auto& m = report.metrics;
            std::cout << "accuracy " << m.accuracy << "  f1_real " << m.f1_real << "  f1_fake " << m.f1_fake
                      << "  f1_macro " << m.f1_macro << "\n";
        } else if (*early) {
            auto config = early_flags.load();
            if (!early_variant.empty()) apply_override(config, "variant=" + early_variant);
            const auto corpus = filter_eligible(read_corpus(early_corpus));
            const auto table = EmbeddingTable::load(early_embeddings);
            const auto splits = stratified_split(corpus, config.split);
            const auto curve = early_detection_sweep(corpus, table, splits, config.featurize, config.model,
                                                     config.variant, config.training, max_hours);
            write_text(early_out, curve_json(curve, config_echo(config)));
            for (const auto& p : curve.points) {
                std::cout << p.cutoff_hours << "h: ";
                if (p.valid()) std::cout << "f1_macro " << p.report->metrics.f1_macro;
                else std::cout << "invalid (" << p.note << ")";
                std::cout << ", eligible " << p.eligible << "\n";
            }
        } else if (*plot) {
            const auto csv = curve_csv(read_text(plot_curve), plot_curve);
            if (plot_out.empty()) std::cout << csv;
            else write_text(plot_out, csv);
        }
    } catch (const std::exception& e) {
        std::cerr << "somps: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
