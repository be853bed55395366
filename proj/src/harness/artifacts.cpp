#include "somps/harness/artifacts.hpp"

#include "somps/binary_io.hpp"
#include "somps/error.hpp"

#include <fstream>
#include <sstream>

namespace somps {

namespace {

constexpr std::string_view kFeatureMagic = "SOMPSFEA";
constexpr std::string_view kCheckpointMagic = "SOMPSCKP";

void write_optional(BinaryWriter& w, const std::optional<double>& v) {
    w.u8(v ? 1 : 0);
    w.f64(v.value_or(0.0));
}

std::optional<double> read_optional(BinaryReader& r) {
    const bool present = r.u8() != 0;
    const double v = r.f64();
    return present ? std::optional<double>(v) : std::nullopt;
}

void write_standardizer(BinaryWriter& w, const Standardizer& s) {
    w.u8(s.fitted() ? 1 : 0);
    w.i64(s.first_column());
    w.i64(s.column_count());
    w.vector(s.fitted() ? s.mean() : Eigen::VectorXd());
    w.vector(s.fitted() ? s.scale() : Eigen::VectorXd());
}

Standardizer read_standardizer(BinaryReader& r) {
    const bool fitted = r.u8() != 0;
    const auto first = r.i64();
    const auto count = r.i64();
    auto mean = r.vector();
    auto scale = r.vector();
    if (!fitted) return Standardizer(first, count);
    if (mean.size() != count || scale.size() != count) throw ParseError(r.source() + ": standardizer size mismatch");
    Standardizer s;
    s.restore(first, count, std::move(mean), std::move(scale));
    return s;
}

void write_branch(BinaryWriter& w, const BranchFeatures& b) {
    w.matrix(b.embedding);
    w.matrix(b.adjacency);
    w.matrix(b.activity);
    w.u64(b.valid_users);
}

BranchFeatures read_branch(BinaryReader& r) {
    BranchFeatures b;
    b.embedding = r.matrix();
    b.adjacency = r.matrix();
    b.activity = r.matrix();
    b.valid_users = r.u64();
    return b;
}

template <typename T>
T open_and_read(const std::filesystem::path& path, T (*reader)(std::istream&, const std::string&)) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path.string() + "'");
    return reader(in, path.string());
}

template <typename T>
void open_and_write(const std::filesystem::path& path, const T& value, void (*writer)(const T&, std::ostream&)) {
    std::ostringstream buffer;
    writer(value, buffer);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    const auto bytes = buffer.str();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("failed writing '" + path.string() + "'");
}

} // namespace

void write_feature_cache(const FeatureCache& cache, std::ostream& out) {
    BinaryWriter w(out);
    w.magic(kFeatureMagic, kFeatureFormatVersion);
    w.str(cache.config_echo);
    w.f64(cache.split_spec.train_frac);
    w.f64(cache.split_spec.val_frac);
    w.f64(cache.split_spec.test_frac);
    w.u64(cache.split_spec.seed);
    w.strings(cache.splits.train);
    w.strings(cache.splits.val);
    w.strings(cache.splits.test);

    const auto& set = cache.features;
    w.u64(set.embedding_dim);
    write_optional(w, set.cutoff_hours);
    const auto& stats = set.stats;
    w.u64(stats.sizing.k_tweet);
    w.u64(stats.sizing.k_retweet);
    w.u64(stats.sizing.seq_len);
    w.strings(stats.encoders.tags.categories());
    w.strings(stats.encoders.publishers.categories());
    w.u64(stats.encoders.ratings.mean_by_publisher.size());
    for (const auto& [publisher, rating] : stats.encoders.ratings.mean_by_publisher) {
        w.str(publisher);
        w.f64(rating);
    }
    w.f64(stats.encoders.ratings.global_mean);
    write_standardizer(w, stats.tweet_activity);
    write_standardizer(w, stats.retweet_activity);
    write_standardizer(w, stats.pns);

    w.u64(set.articles.size());
    for (const auto& a : set.articles) {
        w.str(a.news_id);
        w.u8(static_cast<std::uint8_t>(to_int(a.label)));
        write_branch(w, a.tweet);
        write_branch(w, a.retweet);
        w.vector(a.pns);
    }
    w.strings(set.ineligible);
}

void save_feature_cache(const FeatureCache& cache, const std::filesystem::path& path) {
    open_and_write(path, cache, &write_feature_cache);
}

FeatureCache read_feature_cache(std::istream& in, const std::string& source) {
    BinaryReader r(in, source);
    const auto version = r.magic(kFeatureMagic);
    if (version != kFeatureFormatVersion) {
        throw ParseError(source + ": unsupported feature cache version " + std::to_string(version));
    }
    FeatureCache cache;
    cache.config_echo = r.str();
    cache.split_spec.train_frac = r.f64();
    cache.split_spec.val_frac = r.f64();
    cache.split_spec.test_frac = r.f64();
    cache.split_spec.seed = r.u64();
    cache.splits.train = r.strings();
    cache.splits.val = r.strings();
    cache.splits.test = r.strings();

    auto& set = cache.features;
    set.embedding_dim = r.u64();
    set.cutoff_hours = read_optional(r);
    auto& stats = set.stats;
    stats.sizing.k_tweet = r.u64();
    stats.sizing.k_retweet = r.u64();
    stats.sizing.seq_len = r.u64();
    stats.encoders.tags.restore(r.strings());
    stats.encoders.publishers.restore(r.strings());
    const auto n_publishers = r.u64();
    for (std::uint64_t i = 0; i < n_publishers; ++i) {
        auto publisher = r.str();
        stats.encoders.ratings.mean_by_publisher[std::move(publisher)] = r.f64();
    }
    stats.encoders.ratings.global_mean = r.f64();
    stats.encoders.ratings.fitted = true;
    stats.tweet_activity = read_standardizer(r);
    stats.retweet_activity = read_standardizer(r);
    stats.pns = read_standardizer(r);

    const auto n_articles = r.u64();
    set.articles.reserve(n_articles);
    for (std::uint64_t i = 0; i < n_articles; ++i) {
        ArticleFeatures a;
        a.news_id = r.str();
        const auto label = r.u8();
        if (label > 1) throw ParseError(source + ": bad label in article '" + a.news_id + "'");
        a.label = static_cast<Label>(label);
        a.tweet = read_branch(r);
        a.retweet = read_branch(r);
        a.pns = r.vector();
        set.articles.push_back(std::move(a));
    }
    set.ineligible = r.strings();
    return cache;
}

FeatureCache load_feature_cache(const std::filesystem::path& path) {
    return open_and_read(path, &read_feature_cache);
}

void write_checkpoint(const Checkpoint& checkpoint, std::ostream& out) {
    BinaryWriter w(out);
    w.magic(kCheckpointMagic, kCheckpointFormatVersion);
    w.str(checkpoint.config_echo);
    w.u8(static_cast<std::uint8_t>(checkpoint.variant));
    const auto& c = checkpoint.config;
    for (auto v : {c.gcn_layers, c.gcn_output_dim, c.bilstm_hidden, c.attention_heads, c.head_dim_qk, c.head_dim_v,
                   c.attention_output_dim, c.pns_hidden}) {
        w.u64(v);
    }
    w.f64(c.dropout);
    w.f64(c.learning_rate);
    w.f64(c.momentum);
    w.u64(c.seed);
    const auto& d = checkpoint.dims;
    for (auto v : {d.embedding_dim, d.tweet_activity_dim, d.retweet_activity_dim, d.pns_dim}) w.u64(v);
    w.u64(checkpoint.best_epoch);

    std::uint64_t count = 0;
    checkpoint.params.for_each([&count](const std::string&, const Eigen::MatrixXd&) { ++count; });
    w.u64(count);
    checkpoint.params.for_each([&w](const std::string& name, const Eigen::MatrixXd& m) {
        w.str(name);
        w.matrix(m);
    });
}

void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path) {
    open_and_write(path, checkpoint, &write_checkpoint);
}

Checkpoint read_checkpoint(std::istream& in, const std::string& source) {
    BinaryReader r(in, source);
    const auto version = r.magic(kCheckpointMagic);
    if (version != kCheckpointFormatVersion) {
        throw ParseError(source + ": unsupported checkpoint version " + std::to_string(version));
    }
    Checkpoint ck;
    ck.config_echo = r.str();
    const auto variant = r.u8();
    if (variant > 2) throw ParseError(source + ": bad variant tag");
    ck.variant = static_cast<ModelVariant>(variant);
    auto& c = ck.config;
    for (auto* v : {&c.gcn_layers, &c.gcn_output_dim, &c.bilstm_hidden, &c.attention_heads, &c.head_dim_qk,
                    &c.head_dim_v, &c.attention_output_dim, &c.pns_hidden}) {
        *v = r.u64();
    }
    c.dropout = r.f64();
    c.learning_rate = r.f64();
    c.momentum = r.f64();
    c.seed = r.u64();
    try {
        c.validate();
    } catch (const ArgumentError& e) {
        throw ParseError(source + ": invalid model config: " + e.what());
    }
    auto& d = ck.dims;
    for (auto* v : {&d.embedding_dim, &d.tweet_activity_dim, &d.retweet_activity_dim, &d.pns_dim}) *v = r.u64();
    ck.best_epoch = r.u64();

    ck.params = ModelParams::zeros(c, d);
    std::uint64_t expected = 0;
    ck.params.for_each([&expected](const std::string&, const Eigen::MatrixXd&) { ++expected; });
    if (r.u64() != expected) throw ParseError(source + ": tensor count does not match the stored config");
    ck.params.for_each([&r, &source](const std::string& name, Eigen::MatrixXd& m) {
        const auto stored = r.str();
        if (stored != name) throw ParseError(source + ": expected tensor '" + name + "', found '" + stored + "'");
        auto value = r.matrix();
        if (value.rows() != m.rows() || value.cols() != m.cols()) {
            throw ParseError(source + ": tensor '" + name + "' has the wrong shape");
        }
        m = std::move(value);
    });
    return ck;
}

Checkpoint load_checkpoint(const std::filesystem::path& path) { return open_and_read(path, &read_checkpoint); }

} // namespace somps
