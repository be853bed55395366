#pragma once

#include "somps/ingest/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

namespace somps {

inline constexpr std::uint32_t kCorpusFormatVersion = 1;

/// Loads a corpus from three JSON Lines files (news, engagements, users).
///
/// Labels are derived from review ratings and engagement lists are sorted by
/// time. Missing optional user/engagement fields take defaults (flags false,
/// counts 0, empty sets) and are tallied in Corpus::quality().
///
/// Throws ParseError (naming file, line and field) on schema violations and
/// ValidationError for duplicate article ids or dangling user ids.
Corpus load_corpus(const std::filesystem::path& news_path,
                   const std::filesystem::path& engagements_path,
                   const std::filesystem::path& users_path);

/// Keeps only articles with at least one tweet and one retweet; prunes users
/// that no retained engagement references.
Corpus filter_eligible(const Corpus& corpus);

/// Writes the three JSON Lines files into `dir` (news.jsonl, engagements.jsonl,
/// users.jsonl). Description and username are emitted as placeholder words so
/// their word counts survive a reload.
void write_corpus_jsonl(const Corpus& corpus, const std::filesystem::path& dir);

/// Binary snapshot (`corpus.bin`) used by the CLI between stages.
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);
Corpus read_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, std::ostream& out);
Corpus read_corpus(std::istream& in, const std::string& source);

/// Number of whitespace-separated words.
std::int64_t count_words(std::string_view text);

} // namespace somps
