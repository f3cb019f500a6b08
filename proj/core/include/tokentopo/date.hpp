#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>

namespace tokentopo {

/// A UTC calendar day, stored as days since 1970-01-01.
///
/// All day bucketing in the pipeline uses this type: transaction timestamps
/// are floored to their UTC day, price series are keyed by it, and horizon
/// arithmetic (t+1 .. t+h) is plain integer arithmetic on the day count.
class Date {
public:
    Date() = default;
    explicit constexpr Date(std::int64_t days_since_epoch) : days_(days_since_epoch) {}

    /// Parse "YYYY-MM-DD". Returns nullopt on malformed input or an
    /// impossible calendar date (e.g. 2021-02-30).
    static std::optional<Date> from_iso(const std::string& text);

    /// UTC day containing the given unix timestamp (seconds).
    static constexpr Date from_timestamp(std::int64_t unix_seconds) {
        std::int64_t d = unix_seconds / 86400;
        if (unix_seconds < 0 && unix_seconds % 86400 != 0) --d;
        return Date(d);
    }

    [[nodiscard]] std::string to_iso() const;

    constexpr std::int64_t days_since_epoch() const { return days_; }

    constexpr Date operator+(std::int64_t days) const { return Date(days_ + days); }
    constexpr Date operator-(std::int64_t days) const { return Date(days_ - days); }
    constexpr std::int64_t operator-(Date other) const { return days_ - other.days_; }
    Date& operator++() { ++days_; return *this; }

    auto operator<=>(const Date&) const = default;

private:
    std::int64_t days_ = 0;
};

}  // namespace tokentopo
