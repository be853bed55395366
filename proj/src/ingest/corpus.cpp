#include "somps/ingest/corpus.hpp"

#include "somps/binary_io.hpp"
#include "somps/error.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace somps {

using nlohmann::json;

namespace {

constexpr std::string_view kCorpusMagic = "SOMPSCRP";

constexpr std::size_t kMaxTextCodePoints = 280;

/// One parsed JSON Lines record plus enough context for precise diagnostics.
class Record {
public:
    Record(const json& obj, const std::string& file, std::size_t line, DataQualityReport* quality)
        : obj_(obj), file_(file), line_(line), quality_(quality) {}

    [[noreturn]] void fail(const std::string& field, const std::string& what) const {
        throw ParseError(file_, line_, field, what);
    }

    const json* find(const std::string& field) const {
        const auto it = obj_.find(field);
        if (it == obj_.end() || it->is_null()) return nullptr;
        return &*it;
    }

    const json& require(const std::string& field) const {
        const auto* v = find(field);
        if (v == nullptr) fail(field, "missing required field");
        return *v;
    }

    void note_default(const std::string& field) const {
        if (quality_ != nullptr) ++quality_->defaulted_fields[field];
    }

    std::string string(const std::string& field) const {
        const auto& v = require(field);
        if (!v.is_string()) fail(field, "expected a string");
        return v.get<std::string>();
    }

    /// Accepts either a JSON string or a number (ids are often numeric upstream).
    std::string id(const std::string& field) const { return as_id(require(field), field); }

    std::string as_id(const json& v, const std::string& field) const {
        if (v.is_string()) return v.get<std::string>();
        if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
        if (v.is_number_unsigned()) return std::to_string(v.get<std::uint64_t>());
        fail(field, "expected a string or integer id");
    }

    std::string string_or(const std::string& field, std::string fallback) const {
        const auto* v = find(field);
        if (v == nullptr) {
            note_default(field);
            return fallback;
        }
        if (!v->is_string()) fail(field, "expected a string");
        return v->get<std::string>();
    }

    std::int64_t integer(const std::string& field) const {
        const auto& v = require(field);
        if (!v.is_number_integer()) fail(field, "expected an integer");
        return v.get<std::int64_t>();
    }

    std::int64_t count_or_zero(const std::string& field) const {
        const auto* v = find(field);
        if (v == nullptr) {
            note_default(field);
            return 0;
        }
        if (!v->is_number_integer()) fail(field, "expected an integer");
        const auto n = v->get<std::int64_t>();
        if (n < 0) fail(field, "expected a non-negative integer");
        return n;
    }

    bool flag_or_false(const std::string& field) const {
        const auto* v = find(field);
        if (v == nullptr) {
            note_default(field);
            return false;
        }
        if (!v->is_boolean()) fail(field, "expected a boolean");
        return v->get<bool>();
    }

    std::vector<std::string> id_list_or_empty(const std::string& field) const {
        const auto* v = find(field);
        if (v == nullptr) {
            note_default(field);
            return {};
        }
        if (!v->is_array()) fail(field, "expected an array");
        std::vector<std::string> out;
        out.reserve(v->size());
        for (const auto& item : *v) out.push_back(as_id(item, field));
        return out;
    }

    Timestamp time(const std::string& field) const { return as_time(require(field), field); }

    std::optional<Timestamp> time_or_none(const std::string& field) const {
        const auto* v = find(field);
        if (v == nullptr) {
            note_default(field);
            return std::nullopt;
        }
        return as_time(*v, field);
    }

    std::vector<Timestamp> time_list_or_empty(const std::string& field) const {
        const auto* v = find(field);
        if (v == nullptr) {
            note_default(field);
            return {};
        }
        if (!v->is_array()) fail(field, "expected an array");
        std::vector<Timestamp> out;
        out.reserve(v->size());
        for (const auto& item : *v) out.push_back(as_time(item, field));
        return out;
    }

private:
    Timestamp as_time(const json& v, const std::string& field) const {
        if (!v.is_string()) fail(field, "expected an ISO-8601 UTC timestamp string");
        try {
            return parse_iso8601(v.get<std::string>());
        } catch (const ArgumentError& e) {
            fail(field, e.what());
        }
    }

    const json& obj_;
    const std::string& file_;
    std::size_t line_;
    DataQualityReport* quality_;
};

template <typename OnRecord>
void for_each_line(const std::filesystem::path& path, DataQualityReport* quality, OnRecord&& on_record) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    const std::string file = path.string();
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(file, line_no, "<record>", std::string("invalid JSON: ") + e.what());
        }
        if (!obj.is_object()) throw ParseError(file, line_no, "<record>", "expected a JSON object");
        on_record(Record(obj, file, line_no, quality));
    }
}

std::size_t utf8_length(std::string_view s) {
    std::size_t n = 0;
    for (const char c : s) {
        if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
    }
    return n;
}

} // namespace

std::int64_t count_words(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string w;
    std::int64_t n = 0;
    while (in >> w) ++n;
    return n;
}

Corpus load_corpus(const std::filesystem::path& news_path, const std::filesystem::path& engagements_path,
                   const std::filesystem::path& users_path) {
    DataQualityReport quality;

    std::vector<NewsRecord> news;
    for_each_line(news_path, &quality, [&](const Record& r) {
        NewsRecord n;
        n.news_id = r.id("news_id");
        n.publisher = r.string_or("publisher", "");
        n.tags = r.id_list_or_empty("tags");
        const auto rating = r.integer("review_rating");
        if (rating < 0 || rating > 5) r.fail("review_rating", "expected an integer in 0-5");
        n.review_rating = static_cast<int>(rating);
        n.label = label_from_rating(n.review_rating);
        news.push_back(std::move(n));
    });

    std::vector<Engagement> engagements;
    for_each_line(engagements_path, &quality, [&](const Record& r) {
        Engagement e;
        e.engagement_id = r.id("engagement_id");
        e.news_id = r.id("news_id");
        const auto kind = parse_engagement_kind(r.string("kind"));
        if (!kind) r.fail("kind", "expected one of tweet, retweet, reply");
        e.kind = *kind;
        e.user_id = r.id("user_id");
        e.text = r.string_or("text", "");
        if (utf8_length(e.text) > kMaxTextCodePoints) r.fail("text", "longer than 280 characters");
        e.created_at = r.time("created_at");
        e.like_count = r.count_or_zero("like_count");
        e.hashtags = r.id_list_or_empty("hashtags");
        e.mentioned_user_ids = r.id_list_or_empty("mentions");
        engagements.push_back(std::move(e));
    });

    std::map<std::string, UserRecord> users;
    for_each_line(users_path, &quality, [&](const Record& r) {
        UserRecord u;
        u.user_id = r.id("user_id");
        u.is_protected = r.flag_or_false("protected");
        u.verified = r.flag_or_false("verified");
        u.geo_enabled = r.flag_or_false("geo_enabled");
        u.default_profile_image = r.flag_or_false("default_profile_image");
        u.default_profile_ui = r.flag_or_false("default_profile_ui");
        u.description_word_count = count_words(r.string_or("description", ""));
        u.username_word_count = count_words(r.string_or("username", ""));
        u.favourites_count = r.count_or_zero("favourites_count");
        u.friends_count = r.count_or_zero("friends_count");
        u.followers_count = r.count_or_zero("followers_count");
        u.listed_count = r.count_or_zero("listed_count");
        u.account_created_at = r.time_or_none("account_created_at");
        u.follower_ids = r.id_list_or_empty("followers");
        u.following_ids = r.id_list_or_empty("following");
        u.post_timestamps = r.time_list_or_empty("post_timestamps");
        const auto id = u.user_id;
        if (!users.emplace(id, std::move(u)).second) {
            r.fail("user_id", "duplicate user_id '" + id + "'");
        }
    });

    return make_corpus(std::move(news), std::move(engagements), std::move(users), std::move(quality));
}

Corpus filter_eligible(const Corpus& corpus) {
    std::vector<NewsRecord> news;
    std::vector<Engagement> engagements;
    std::set<std::string> referenced;
    for (const auto& n : corpus.news()) {
        const auto list = corpus.engagements_of(n.news_id);
        bool has_tweet = false;
        bool has_retweet = false;
        for (const auto& e : list) {
            has_tweet |= e.kind == EngagementKind::tweet;
            has_retweet |= e.kind == EngagementKind::retweet;
        }
        if (!has_tweet || !has_retweet) continue;
        news.push_back(n);
        for (const auto& e : list) {
            engagements.push_back(e);
            referenced.insert(e.user_id);
        }
    }
    std::map<std::string, UserRecord> users;
    for (const auto& id : referenced) users.emplace(id, corpus.user(id));
    return make_corpus(std::move(news), std::move(engagements), std::move(users), corpus.quality());
}

namespace {

std::string placeholder_words(std::int64_t n) {
    std::string s;
    for (std::int64_t i = 0; i < n; ++i) {
        if (i > 0) s += ' ';
        s += "word";
    }
    return s;
}

json time_list(const std::vector<Timestamp>& ts) {
    json arr = json::array();
    for (const auto t : ts) arr.push_back(format_iso8601(t));
    return arr;
}

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
    return out;
}

} // namespace

void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    {
        auto out = open_out(dir / "news.jsonl");
        for (const auto& n : corpus.news()) {
            json j;
            j["news_id"] = n.news_id;
            j["publisher"] = n.publisher;
            j["tags"] = n.tags;
            j["review_rating"] = n.review_rating;
            out << j.dump() << '\n';
        }
    }
    {
        auto out = open_out(dir / "engagements.jsonl");
        for (const auto& n : corpus.news()) {
            for (const auto& e : corpus.engagements_of(n.news_id)) {
                json j;
                j["engagement_id"] = e.engagement_id;
                j["news_id"] = e.news_id;
                j["kind"] = std::string(to_string(e.kind));
                j["user_id"] = e.user_id;
                j["text"] = e.text;
                j["created_at"] = format_iso8601(e.created_at);
                j["like_count"] = e.like_count;
                j["hashtags"] = e.hashtags;
                j["mentions"] = e.mentioned_user_ids;
                out << j.dump() << '\n';
            }
        }
    }
    {
        auto out = open_out(dir / "users.jsonl");
        for (const auto& [id, u] : corpus.users()) {
            json j;
            j["user_id"] = u.user_id;
            j["protected"] = u.is_protected;
            j["verified"] = u.verified;
            j["geo_enabled"] = u.geo_enabled;
            j["default_profile_image"] = u.default_profile_image;
            j["default_profile_ui"] = u.default_profile_ui;
            j["description"] = placeholder_words(u.description_word_count);
            j["username"] = placeholder_words(u.username_word_count);
            j["favourites_count"] = u.favourites_count;
            j["friends_count"] = u.friends_count;
            j["followers_count"] = u.followers_count;
            j["listed_count"] = u.listed_count;
            if (u.account_created_at) j["account_created_at"] = format_iso8601(*u.account_created_at);
            j["followers"] = u.follower_ids;
            j["following"] = u.following_ids;
            j["post_timestamps"] = time_list(u.post_timestamps);
            out << j.dump() << '\n';
        }
    }
}

void save_corpus(const Corpus& corpus, std::ostream& out) {
    BinaryWriter w(out);
    w.magic(kCorpusMagic, kCorpusFormatVersion);

    const auto& q = corpus.quality();
    w.u64(q.defaulted_fields.size());
    for (const auto& [field, count] : q.defaulted_fields) {
        w.str(field);
        w.u64(count);
    }
    w.u64(q.duplicate_network_ids_removed);
    w.u64(q.self_references_removed);

    w.u64(corpus.news().size());
    for (const auto& n : corpus.news()) {
        w.str(n.news_id);
        w.str(n.publisher);
        w.strings(n.tags);
        w.i64(n.review_rating);
    }

    std::size_t total = 0;
    for (const auto& [nid, list] : corpus.engagements()) total += list.size();
    w.u64(total);
    for (const auto& n : corpus.news()) {
        for (const auto& e : corpus.engagements_of(n.news_id)) {
            w.str(e.engagement_id);
            w.str(e.news_id);
            w.u8(static_cast<std::uint8_t>(e.kind));
            w.str(e.user_id);
            w.str(e.text);
            w.i64(e.created_at.time_since_epoch().count());
            w.i64(e.like_count);
            w.strings(e.hashtags);
            w.strings(e.mentioned_user_ids);
        }
    }

    w.u64(corpus.users().size());
    for (const auto& [id, u] : corpus.users()) {
        w.str(u.user_id);
        w.u8(static_cast<std::uint8_t>((u.is_protected ? 1 : 0) | (u.verified ? 2 : 0) | (u.geo_enabled ? 4 : 0) |
                                       (u.default_profile_image ? 8 : 0) | (u.default_profile_ui ? 16 : 0)));
        w.i64(u.description_word_count);
        w.i64(u.username_word_count);
        w.i64(u.favourites_count);
        w.i64(u.friends_count);
        w.i64(u.followers_count);
        w.i64(u.listed_count);
        w.u8(u.account_created_at ? 1 : 0);
        w.i64(u.account_created_at ? u.account_created_at->time_since_epoch().count() : 0);
        w.strings(u.follower_ids);
        w.strings(u.following_ids);
        w.u64(u.post_timestamps.size());
        for (const auto t : u.post_timestamps) w.i64(t.time_since_epoch().count());
    }
}

Corpus read_corpus(std::istream& in, const std::string& source) {
    BinaryReader r(in, source);
    const auto version = r.magic(kCorpusMagic);
    if (version != kCorpusFormatVersion) {
        throw ParseError(source + ": unsupported corpus format version " + std::to_string(version));
    }
    DataQualityReport q;
    for (auto n = r.u64(); n > 0; --n) {
        auto field = r.str();
        q.defaulted_fields[field] = r.u64();
    }
    q.duplicate_network_ids_removed = r.u64();
    q.self_references_removed = r.u64();

    std::vector<NewsRecord> news(r.u64());
    for (auto& n : news) {
        n.news_id = r.str();
        n.publisher = r.str();
        n.tags = r.strings();
        n.review_rating = static_cast<int>(r.i64());
    }

    std::vector<Engagement> engagements(r.u64());
    for (auto& e : engagements) {
        e.engagement_id = r.str();
        e.news_id = r.str();
        const auto kind = r.u8();
        if (kind > 2) throw ParseError(source + ": bad engagement kind");
        e.kind = static_cast<EngagementKind>(kind);
        e.user_id = r.str();
        e.text = r.str();
        e.created_at = Timestamp{std::chrono::seconds{r.i64()}};
        e.like_count = r.i64();
        e.hashtags = r.strings();
        e.mentioned_user_ids = r.strings();
    }

    std::map<std::string, UserRecord> users;
    for (auto n = r.u64(); n > 0; --n) {
        UserRecord u;
        u.user_id = r.str();
        const auto flags = r.u8();
        u.is_protected = flags & 1;
        u.verified = flags & 2;
        u.geo_enabled = flags & 4;
        u.default_profile_image = flags & 8;
        u.default_profile_ui = flags & 16;
        u.description_word_count = r.i64();
        u.username_word_count = r.i64();
        u.favourites_count = r.i64();
        u.friends_count = r.i64();
        u.followers_count = r.i64();
        u.listed_count = r.i64();
        const bool has_created = r.u8() != 0;
        const auto created = r.i64();
        if (has_created) u.account_created_at = Timestamp{std::chrono::seconds{created}};
        u.follower_ids = r.strings();
        u.following_ids = r.strings();
        u.post_timestamps.resize(r.u64());
        for (auto& t : u.post_timestamps) t = Timestamp{std::chrono::seconds{r.i64()}};
        const auto id = u.user_id;
        users.emplace(id, std::move(u));
    }
    return make_corpus(std::move(news), std::move(engagements), std::move(users), std::move(q));
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
    auto out = open_out(path);
    save_corpus(corpus, out);
}

Corpus read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'");
    return read_corpus(in, path.string());
}

} // namespace somps
