#include "depwatch/time.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>

namespace depwatch {

namespace {

int read_int(std::string_view text, std::size_t pos, std::size_t width) {
    if (pos + width > text.size()) throw TimeParseError(fmt::format("truncated timestamp '{}'", text));
    int value = 0;
    auto first = text.data() + pos;
    auto [ptr, ec] = std::from_chars(first, first + width, value);
    if (ec != std::errc{} || ptr != first + width) {
        throw TimeParseError(fmt::format("invalid digits at offset {} in '{}'", pos, text));
    }
    return value;
}

void expect(std::string_view text, std::size_t pos, char c) {
    if (pos >= text.size() || text[pos] != c) {
        throw TimeParseError(fmt::format("expected '{}' at offset {} in '{}'", c, pos, text));
    }
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
    using namespace std::chrono;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);

    const int y = read_int(text, 0, 4);
    expect(text, 4, '-');
    const int mo = read_int(text, 5, 2);
    expect(text, 7, '-');
    const int d = read_int(text, 8, 2);
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw TimeParseError(fmt::format("invalid calendar date in '{}'", text));
    if (text.size() == 10) return Timestamp{sys_days{ymd}};

    const char sep = text.size() > 10 ? text[10] : '\0';
    if (sep != 'T' && sep != 't' && sep != ' ') throw TimeParseError(fmt::format("expected 'T' at offset 10 in '{}'", text));
    const int hh = read_int(text, 11, 2);
    expect(text, 13, ':');
    const int mm = read_int(text, 14, 2);
    expect(text, 16, ':');
    const int ss = read_int(text, 17, 2);
    if (hh > 23 || mm > 59 || ss > 60) throw TimeParseError(fmt::format("time of day out of range in '{}'", text));

    std::size_t pos = 19;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const auto start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) throw TimeParseError(fmt::format("empty fraction in '{}'", text));
    }

    seconds offset{0};
    if (pos < text.size() && (text[pos] == 'Z' || text[pos] == 'z')) {
        ++pos;
    } else if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) {
        const int sign = text[pos] == '-' ? -1 : 1;
        const int oh = read_int(text, pos + 1, 2);
        expect(text, pos + 3, ':');
        const int om = read_int(text, pos + 4, 2);
        offset = seconds{sign * (oh * 3600 + om * 60)};
        pos += 6;
    } else {
        throw TimeParseError(fmt::format("missing UTC offset in '{}'", text));
    }
    if (pos != text.size()) throw TimeParseError(fmt::format("trailing characters in '{}'", text));

    return Timestamp{sys_days{ymd}} + hours{hh} + minutes{mm} + seconds{ss} - offset;
}

std::string format_timestamp(Timestamp t) {
    using namespace std::chrono;
    const auto day_point = floor<days>(t);
    const year_month_day ymd{day_point};
    const hh_mm_ss tod{t - day_point};
    return fmt::format("{:04}-{:02}-{:02}T{:02}:{:02}:{:02}Z", static_cast<int>(ymd.year()),
                       static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()), tod.hours().count(),
                       tod.minutes().count(), tod.seconds().count());
}

double days_between(Timestamp from, Timestamp to) {
    return static_cast<double>((to - from).count()) / static_cast<double>(kSecondsPerDay.count());
}

}  // namespace depwatch
