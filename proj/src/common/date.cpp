#include "alphaforge/common/date.h"

#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace alphaforge {

namespace {

int parse_digits(std::string_view text, std::size_t pos, std::size_t len) {
    int value = 0;
    const char* first = text.data() + pos;
    const char* last = first + len;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw std::invalid_argument("malformed date '" + std::string(text) + "'");
    }
    return value;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                    std::chrono::day{day}};
    if (!ymd.ok()) {
        throw std::invalid_argument("invalid calendar date " + std::to_string(year) + "-" +
                                    std::to_string(month) + "-" + std::to_string(day));
    }
    return Date(static_cast<std::int32_t>(std::chrono::sys_days{ymd}.time_since_epoch().count()));
}

Date Date::parse(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw std::invalid_argument("malformed date '" + std::string(text) + "', expected YYYY-MM-DD");
    }
    int y = parse_digits(text, 0, 4);
    int m = parse_digits(text, 5, 2);
    int d = parse_digits(text, 8, 2);
    return from_ymd(y, static_cast<unsigned>(m), static_cast<unsigned>(d));
}

std::chrono::year_month_day Date::ymd() const {
    return std::chrono::year_month_day{std::chrono::sys_days{std::chrono::days{days_}}};
}

std::string Date::to_string() const {
    auto d = ymd();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(d.year()),
                  static_cast<unsigned>(d.month()), static_cast<unsigned>(d.day()));
    return buf;
}

bool Date::is_weekday() const {
    std::chrono::weekday wd{std::chrono::sys_days{std::chrono::days{days_}}};
    return wd != std::chrono::Saturday && wd != std::chrono::Sunday;
}

}  // namespace alphaforge
