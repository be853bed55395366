#include "somps/featurize/embedding.hpp"

#include "somps/error.hpp"
#include "somps/rng.hpp"

#include <charconv>
#include <cctype>
#include <fstream>
#include <sstream>

namespace somps {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::size_t pos = 0;
    while (pos < text.size()) {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        const auto start = pos;
        while (pos < text.size() && !std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        if (start == pos) break;

        std::string raw;
        raw.reserve(pos - start);
        for (auto i = start; i < pos; ++i) {
            raw.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[i]))));
        }
        if (raw.starts_with("http://") || raw.starts_with("https://") || raw.starts_with("www.")) continue;

        std::string token;
        token.reserve(raw.size());
        for (const char c : raw) {
            const auto uc = static_cast<unsigned char>(c);
            if (uc < 0x80 && std::ispunct(uc)) continue;
            token.push_back(c);
        }
        if (!token.empty()) tokens.push_back(std::move(token));
    }
    return tokens;
}

EmbeddingTable::EmbeddingTable(std::vector<std::string> tokens, Eigen::MatrixXd vectors)
    : tokens_(std::move(tokens)), vectors_(std::move(vectors)) {
    if (static_cast<Eigen::Index>(tokens_.size()) != vectors_.rows()) {
        throw ArgumentError("embedding table: token count does not match vector rows");
    }
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        if (!index_.emplace(tokens_[i], static_cast<Eigen::Index>(i)).second) {
            throw ArgumentError("embedding table: duplicate token '" + tokens_[i] + "'");
        }
    }
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open embedding file '" + path.string() + "'");

    std::vector<std::string> tokens;
    std::vector<double> values;
    std::size_t dim = 0;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::string token;
        if (!(fields >> token)) continue;
        std::size_t n = 0;
        std::string num;
        while (fields >> num) {
            double v = 0.0;
            const auto [ptr, ec] = std::from_chars(num.data(), num.data() + num.size(), v);
            if (ec != std::errc{} || ptr != num.data() + num.size()) {
                throw ParseError(path.string(), line_no, token, "bad number '" + num + "'");
            }
            values.push_back(v);
            ++n;
        }
        if (n == 0) throw ParseError(path.string(), line_no, token, "no vector components");
        if (dim == 0) dim = n;
        if (n != dim) {
            throw ParseError(path.string(), line_no, token,
                             "dimension " + std::to_string(n) + " differs from " + std::to_string(dim));
        }
        tokens.push_back(std::move(token));
    }
    Eigen::MatrixXd vectors(static_cast<Eigen::Index>(tokens.size()), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
        for (Eigen::Index c = 0; c < vectors.cols(); ++c) vectors(r, c) = values[static_cast<std::size_t>(r) * dim + c];
    }
    try {
        return EmbeddingTable(std::move(tokens), std::move(vectors));
    } catch (const ArgumentError& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

EmbeddingTable EmbeddingTable::random(const std::vector<std::string>& tokens, std::size_t dim, std::uint64_t seed) {
    Rng rng(seed);
    Eigen::MatrixXd vectors(static_cast<Eigen::Index>(tokens.size()), static_cast<Eigen::Index>(dim));
    for (Eigen::Index r = 0; r < vectors.rows(); ++r) {
        for (Eigen::Index c = 0; c < vectors.cols(); ++c) vectors(r, c) = rng.normal(0.0, 0.5);
    }
    return EmbeddingTable(tokens, std::move(vectors));
}

void EmbeddingTable::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write '" + path.string() + "'");
    char buf[64];
    for (std::size_t i = 0; i < tokens_.size(); ++i) {
        out << tokens_[i];
        for (Eigen::Index c = 0; c < vectors_.cols(); ++c) {
            const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, vectors_(static_cast<Eigen::Index>(i), c));
            out << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
        }
        out << '\n';
    }
}

Eigen::RowVectorXd EmbeddingTable::lookup(std::string_view token) const {
    const auto it = index_.find(std::string(token));
    if (it == index_.end()) return Eigen::RowVectorXd::Zero(vectors_.cols());
    return vectors_.row(it->second);
}

Eigen::MatrixXd embed_engagements(std::span<const std::string> texts, const EmbeddingTable& table, std::size_t m) {
    const auto e = static_cast<Eigen::Index>(table.dim());
    Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), e);
    if (texts.empty()) return sum;
    for (const auto& text : texts) {
        const auto tokens = tokenize(text);
        const auto n = std::min(tokens.size(), m);
        for (std::size_t i = 0; i < n; ++i) sum.row(static_cast<Eigen::Index>(i)) += table.lookup(tokens[i]);
    }
    return sum / static_cast<double>(texts.size());
}

} // namespace somps
