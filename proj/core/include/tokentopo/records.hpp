#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tokentopo/date.hpp"

namespace tokentopo {

/// One token transfer between two addresses.
struct TokenTransaction {
    std::string token;
    std::string from;
    std::string to;
    double amount = 0.0;        // transferred token units, >= 0
    std::int64_t timestamp = 0; // unix seconds, UTC

    [[nodiscard]] Date day() const { return Date::from_timestamp(timestamp); }
};

/// Daily open prices for one token, strictly increasing by date, all > 0.
class PriceSeries {
public:
    PriceSeries() = default;
    PriceSeries(std::string token, std::vector<std::pair<Date, double>> entries);

    const std::string& token() const { return token_; }
    const std::vector<std::pair<Date, double>>& entries() const { return entries_; }

    bool empty() const { return entries_.empty(); }
    std::size_t size() const { return entries_.size(); }
    Date first_date() const { return entries_.front().first; }
    Date last_date() const { return entries_.back().first; }

    /// Open price on `day`, if recorded.
    [[nodiscard]] std::optional<double> price_at(Date day) const;

    /// Maximum price over the full series (0 if empty).
    [[nodiscard]] double max_price() const { return max_price_; }

    void append(Date day, double price);

private:
    std::string token_;
    std::vector<std::pair<Date, double>> entries_;
    double max_price_ = 0.0;
};

}  // namespace tokentopo
