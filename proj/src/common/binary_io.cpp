#include "somps/binary_io.hpp"

#include "somps/error.hpp"

#include <bit>
#include <cstring>

namespace somps {

static_assert(std::endian::native == std::endian::little, "binary artifacts assume a little-endian host");

namespace {
constexpr std::uint64_t kMaxElements = 1ULL << 32;
}

void BinaryWriter::raw(const void* data, std::size_t n) {
    out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void BinaryWriter::magic(std::string_view tag, std::uint32_t version) {
    raw(tag.data(), tag.size());
    u32(version);
}

void BinaryWriter::u8(std::uint8_t v) { raw(&v, 1); }
void BinaryWriter::u32(std::uint32_t v) { raw(&v, sizeof v); }
void BinaryWriter::u64(std::uint64_t v) { raw(&v, sizeof v); }
void BinaryWriter::i64(std::int64_t v) { raw(&v, sizeof v); }
void BinaryWriter::f64(double v) { raw(&v, sizeof v); }

void BinaryWriter::str(std::string_view s) {
    u64(s.size());
    raw(s.data(), s.size());
}

void BinaryWriter::strings(const std::vector<std::string>& v) {
    u64(v.size());
    for (const auto& s : v) str(s);
}

void BinaryWriter::matrix(const Eigen::MatrixXd& m) {
    u64(static_cast<std::uint64_t>(m.rows()));
    u64(static_cast<std::uint64_t>(m.cols()));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) f64(m(r, c));
    }
}

void BinaryWriter::vector(const Eigen::VectorXd& v) {
    u64(static_cast<std::uint64_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) f64(v[i]);
}

void BinaryReader::raw(void* data, std::size_t n) {
    in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
    if (static_cast<std::size_t>(in_.gcount()) != n) {
        throw ParseError(source_ + ": unexpected end of file");
    }
}

std::uint64_t BinaryReader::count(std::uint64_t limit) {
    const auto n = u64();
    if (n > limit) throw ParseError(source_ + ": implausible element count " + std::to_string(n));
    return n;
}

std::uint32_t BinaryReader::magic(std::string_view tag) {
    std::string got(tag.size(), '\0');
    raw(got.data(), got.size());
    if (got != tag) {
        throw ParseError(source_ + ": not a " + std::string(tag) + " file");
    }
    return u32();
}

std::uint8_t BinaryReader::u8() {
    std::uint8_t v;
    raw(&v, 1);
    return v;
}
std::uint32_t BinaryReader::u32() {
    std::uint32_t v;
    raw(&v, sizeof v);
    return v;
}
std::uint64_t BinaryReader::u64() {
    std::uint64_t v;
    raw(&v, sizeof v);
    return v;
}
std::int64_t BinaryReader::i64() {
    std::int64_t v;
    raw(&v, sizeof v);
    return v;
}
double BinaryReader::f64() {
    double v;
    raw(&v, sizeof v);
    return v;
}

std::string BinaryReader::str() {
    std::string s(count(kMaxElements), '\0');
    raw(s.data(), s.size());
    return s;
}

std::vector<std::string> BinaryReader::strings() {
    std::vector<std::string> v(count(kMaxElements));
    for (auto& s : v) s = str();
    return v;
}

Eigen::MatrixXd BinaryReader::matrix() {
    const auto rows = count(kMaxElements);
    const auto cols = count(kMaxElements);
    if (rows * cols > kMaxElements) throw ParseError(source_ + ": matrix too large");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = f64();
    }
    return m;
}

Eigen::VectorXd BinaryReader::vector() {
    Eigen::VectorXd v(static_cast<Eigen::Index>(count(kMaxElements)));
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = f64();
    return v;
}

} // namespace somps
