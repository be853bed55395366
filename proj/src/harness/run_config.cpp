#include "somps/harness/run_config.hpp"

#include "somps/error.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace somps {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::size_t parse_size(const std::string& v) {
    std::size_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) throw ArgumentError("expected a non-negative integer, got '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& v) {
    std::uint64_t out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size()) throw ArgumentError("expected a non-negative integer, got '" + v + "'");
    return out;
}

double parse_double(const std::string& v) {
    double out = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out)) {
        throw ArgumentError("expected a number, got '" + v + "'");
    }
    return out;
}

std::optional<std::size_t> parse_auto_size(const std::string& v) {
    if (v == "auto") return std::nullopt;
    return parse_size(v);
}

std::optional<double> parse_cutoff(const std::string& v) {
    if (v == "none") return std::nullopt;
    return parse_double(v);
}

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string format_auto(const std::optional<std::size_t>& v) { return v ? std::to_string(*v) : "auto"; }

struct Field {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
};

#define SIZE_FIELD(key, member) \
    {key, {[](RunConfig& c, const std::string& v) { c.member = parse_size(v); }, \
           [](const RunConfig& c) { return std::to_string(c.member); }}}
#define DOUBLE_FIELD(key, member) \
    {key, {[](RunConfig& c, const std::string& v) { c.member = parse_double(v); }, \
           [](const RunConfig& c) { return format_double(c.member); }}}
#define AUTO_FIELD(key, member) \
    {key, {[](RunConfig& c, const std::string& v) { c.member = parse_auto_size(v); }, \
           [](const RunConfig& c) { return format_auto(c.member); }}}

// Ordered list; the echo follows this order.
const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table{
        {"variant", {[](RunConfig& c, const std::string& v) {
                         const auto parsed = parse_variant(v);
                         if (!parsed) throw ArgumentError("unknown variant '" + v + "' (somps, sig, pns)");
                         c.variant = *parsed;
                     },
                     [](const RunConfig& c) { return std::string(to_string(c.variant)); }}},
        {"seed", {[](RunConfig& c, const std::string& v) { c.model.seed = parse_u64(v); },
                  [](const RunConfig& c) { return std::to_string(c.model.seed); }}},
        SIZE_FIELD("gcn_layers", model.gcn_layers),
        SIZE_FIELD("gcn_output_dim", model.gcn_output_dim),
        SIZE_FIELD("bilstm_hidden", model.bilstm_hidden),
        SIZE_FIELD("attention_heads", model.attention_heads),
        SIZE_FIELD("head_dim_qk", model.head_dim_qk),
        SIZE_FIELD("head_dim_v", model.head_dim_v),
        SIZE_FIELD("attention_output_dim", model.attention_output_dim),
        SIZE_FIELD("pns_hidden", model.pns_hidden),
        DOUBLE_FIELD("dropout", model.dropout),
        DOUBLE_FIELD("learning_rate", model.learning_rate),
        DOUBLE_FIELD("momentum", model.momentum),
        SIZE_FIELD("max_epochs", training.max_epochs),
        SIZE_FIELD("patience", training.patience),
        SIZE_FIELD("batch_size", training.batch_size),
        DOUBLE_FIELD("train_frac", split.train_frac),
        DOUBLE_FIELD("val_frac", split.val_frac),
        DOUBLE_FIELD("test_frac", split.test_frac),
        {"split_seed", {[](RunConfig& c, const std::string& v) { c.split.seed = parse_u64(v); },
                        [](const RunConfig& c) { return std::to_string(c.split.seed); }}},
        SIZE_FIELD("top_k_tags", featurize.top_k_tags),
        SIZE_FIELD("top_k_publishers", featurize.top_k_publishers),
        AUTO_FIELD("k_tweet", featurize.k_tweet),
        AUTO_FIELD("k_retweet", featurize.k_retweet),
        AUTO_FIELD("seq_len", featurize.seq_len),
        {"cutoff_hours", {[](RunConfig& c, const std::string& v) { c.featurize.cutoff_hours = parse_cutoff(v); },
                          [](const RunConfig& c) {
                              return c.featurize.cutoff_hours ? format_double(*c.featurize.cutoff_hours)
                                                              : std::string("none");
                          }}},
    };
    return table;
}

#undef SIZE_FIELD
#undef DOUBLE_FIELD
#undef AUTO_FIELD

const Field* find_field(const std::string& key) {
    for (const auto& [name, field] : fields()) {
        if (name == key) return &field;
    }
    return nullptr;
}

} // namespace

void RunConfig::validate() const {
    model.validate();
    training.validate();
    for (const auto& k : {featurize.k_tweet, featurize.k_retweet, featurize.seq_len}) {
        if (k && *k == 0) throw ArgumentError("sizing overrides must be >= 1");
    }
    if (featurize.cutoff_hours && *featurize.cutoff_hours < 0.0) throw ArgumentError("cutoff_hours must be >= 0");
    const double sum = split.train_frac + split.val_frac + split.test_frac;
    if (split.train_frac < 0 || split.val_frac < 0 || split.test_frac < 0 || std::abs(sum - 1.0) > 1e-9) {
        throw ArgumentError("split fractions must be non-negative and sum to 1");
    }
}

RunConfig parse_run_config(std::string_view text, const std::string& source) {
    RunConfig config;
    std::set<std::string> seen;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        const auto body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw ParseError(source, line_no, body, "expected 'key = value'");
        const auto key = trim(std::string_view(body).substr(0, eq));
        const auto value = trim(std::string_view(body).substr(eq + 1));
        const auto* field = find_field(key);
        if (!field) throw ParseError(source, line_no, key, "unknown config key");
        if (!seen.insert(key).second) throw ParseError(source, line_no, key, "duplicate config key");
        try {
            field->set(config, value);
        } catch (const ArgumentError& e) {
            throw ParseError(source, line_no, key, e.what());
        }
    }
    return config;
}

RunConfig load_run_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    return parse_run_config(text.str(), path.string());
}

void apply_override(RunConfig& config, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos) throw ArgumentError("override '" + std::string(assignment) + "' is not key=value");
    const auto key = trim(assignment.substr(0, eq));
    const auto* field = find_field(key);
    if (!field) throw ArgumentError("unknown config key '" + key + "'");
    try {
        field->set(config, trim(assignment.substr(eq + 1)));
    } catch (const ArgumentError& e) {
        throw ArgumentError("config key '" + key + "': " + e.what());
    }
}

std::string config_echo(const RunConfig& config) {
    std::string out;
    for (const auto& [name, field] : fields()) out += name + " = " + field.get(config) + "\n";
    return out;
}

std::vector<std::string> run_config_keys() {
    std::vector<std::string> keys;
    for (const auto& [name, field] : fields()) keys.push_back(name);
    return keys;
}

} // namespace somps
