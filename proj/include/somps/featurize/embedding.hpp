#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace somps {

/// Lowercases ASCII, drops URL tokens, strips ASCII punctuation and splits on
/// whitespace. Empty tokens are discarded.
std::vector<std::string> tokenize(std::string_view text);

/// Token -> dense vector lookup. Unknown tokens and padding map to the zero vector.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::vector<std::string> tokens, Eigen::MatrixXd vectors);

    /// Reads `token v1 ... ve` lines. Every line must carry the same dimension.
    static EmbeddingTable load(const std::filesystem::path& path);

    /// Gaussian vectors (stddev 0.5) for each token; used with synthetic corpora.
    static EmbeddingTable random(const std::vector<std::string>& tokens, std::size_t dim, std::uint64_t seed);

    void save(const std::filesystem::path& path) const;

    std::size_t dim() const { return static_cast<std::size_t>(vectors_.cols()); }
    std::size_t size() const { return tokens_.size(); }
    bool contains(std::string_view token) const { return index_.contains(std::string(token)); }

    /// Row for `token`, or the zero vector when absent.
    Eigen::RowVectorXd lookup(std::string_view token) const;

    const std::vector<std::string>& tokens() const { return tokens_; }
    const Eigen::MatrixXd& vectors() const { return vectors_; }

private:
    std::vector<std::string> tokens_;
    Eigen::MatrixXd vectors_;
    std::unordered_map<std::string, Eigen::Index> index_;
};

/// Averaged engagement embedding: each text is tokenized, truncated or
/// zero-padded to `m` tokens and embedded, then the [p x m x e] stack is
/// averaged over texts. An empty text list yields the all-padding matrix.
Eigen::MatrixXd embed_engagements(std::span<const std::string> texts, const EmbeddingTable& table, std::size_t m);

} // namespace somps
