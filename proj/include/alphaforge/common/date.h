#pragma once

#include <chrono>
#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace alphaforge {

/// Calendar date stored as days since 1970-01-01.
class Date {
public:
    constexpr Date() = default;
    constexpr explicit Date(std::int32_t days_since_epoch) : days_(days_since_epoch) {}

    static Date from_ymd(int year, unsigned month, unsigned day);

    /// Parses strict ISO-8601 `YYYY-MM-DD`. Throws std::invalid_argument on malformed or impossible dates.
    static Date parse(std::string_view text);

    std::string to_string() const;
    std::chrono::year_month_day ymd() const;
    bool is_weekday() const;

    constexpr std::int32_t days() const { return days_; }
    constexpr Date plus_days(std::int32_t n) const { return Date(days_ + n); }

    friend constexpr auto operator<=>(const Date&, const Date&) = default;

private:
    std::int32_t days_ = 0;
};

}  // namespace alphaforge
