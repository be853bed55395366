#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace somps {

/// Little-endian length-prefixed binary writer used by every on-disk artifact.
///
/// Layout primitives: integers are fixed-width little-endian, doubles are IEEE-754
/// binary64, strings are a u64 byte length followed by the bytes, matrices are
/// u64 rows, u64 cols, then rows*cols doubles in row-major order.
class BinaryWriter {
public:
    explicit BinaryWriter(std::ostream& out) : out_(out) {}

    void magic(std::string_view tag, std::uint32_t version);
    void u8(std::uint8_t v);
    void u32(std::uint32_t v);
    void u64(std::uint64_t v);
    void i64(std::int64_t v);
    void f64(double v);
    void str(std::string_view s);
    void strings(const std::vector<std::string>& v);
    void matrix(const Eigen::MatrixXd& m);
    void vector(const Eigen::VectorXd& v);

private:
    void raw(const void* data, std::size_t n);
    std::ostream& out_;
};

/// Reader counterpart; throws ParseError on truncation or a bad header.
class BinaryReader {
public:
    BinaryReader(std::istream& in, std::string source) : in_(in), source_(std::move(source)) {}

    /// Checks the tag and returns the stored version.
    std::uint32_t magic(std::string_view tag);
    std::uint8_t u8();
    std::uint32_t u32();
    std::uint64_t u64();
    std::int64_t i64();
    double f64();
    std::string str();
    std::vector<std::string> strings();
    Eigen::MatrixXd matrix();
    Eigen::VectorXd vector();

    const std::string& source() const { return source_; }

private:
    void raw(void* data, std::size_t n);
    std::uint64_t count(std::uint64_t limit);
    std::istream& in_;
    std::string source_;
};

} // namespace somps
