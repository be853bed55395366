#include "somps/time.hpp"

#include "somps/error.hpp"

#include <cctype>
#include <cstdio>

namespace somps {

namespace {

int read_digits(std::string_view text, std::size_t& pos, std::size_t count) {
    if (pos + count > text.size()) {
        throw ArgumentError("truncated timestamp '" + std::string(text) + "'");
    }
    int value = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const char c = text[pos + i];
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ArgumentError("malformed timestamp '" + std::string(text) + "'");
        }
        value = value * 10 + (c - '0');
    }
    pos += count;
    return value;
}

void expect(std::string_view text, std::size_t& pos, char c) {
    if (pos >= text.size() || (text[pos] != c && !(c == 'T' && text[pos] == ' '))) {
        throw ArgumentError("malformed timestamp '" + std::string(text) + "'");
    }
    ++pos;
}

} // namespace

Timestamp parse_iso8601(std::string_view text) {
    using namespace std::chrono;
    std::size_t pos = 0;
    const int y = read_digits(text, pos, 4);
    expect(text, pos, '-');
    const int mo = read_digits(text, pos, 2);
    expect(text, pos, '-');
    const int d = read_digits(text, pos, 2);
    expect(text, pos, 'T');
    const int hh = read_digits(text, pos, 2);
    expect(text, pos, ':');
    const int mm = read_digits(text, pos, 2);
    expect(text, pos, ':');
    const int ss = read_digits(text, pos, 2);

    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    int offset_seconds = 0;
    if (pos < text.size()) {
        const char z = text[pos];
        if (z == 'Z' || z == 'z') {
            ++pos;
        } else if (z == '+' || z == '-') {
            ++pos;
            const int oh = read_digits(text, pos, 2);
            if (pos < text.size() && text[pos] == ':') ++pos;
            const int om = read_digits(text, pos, 2);
            offset_seconds = (oh * 3600 + om * 60) * (z == '+' ? 1 : -1);
        }
    }
    if (pos != text.size()) {
        throw ArgumentError("trailing characters in timestamp '" + std::string(text) + "'");
    }

    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok() || hh > 23 || mm > 59 || ss > 60) {
        throw ArgumentError("out-of-range timestamp '" + std::string(text) + "'");
    }
    const auto t = sys_days{ymd} + hours{hh} + minutes{mm} + seconds{ss} - seconds{offset_seconds};
    return time_point_cast<seconds>(t);
}

std::string format_iso8601(Timestamp t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss hms{t - day_point};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<int>(hms.hours().count()), static_cast<int>(hms.minutes().count()),
                  static_cast<int>(hms.seconds().count()));
    return buf;
}

} // namespace somps
