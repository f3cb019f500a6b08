#include "tokentopo/records.hpp"

#include <algorithm>
#include <stdexcept>

namespace tokentopo {

PriceSeries::PriceSeries(std::string token, std::vector<std::pair<Date, double>> entries)
    : token_(std::move(token)), entries_(std::move(entries)) {
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].second <= 0.0)
            throw std::invalid_argument("price series " + token_ + ": non-positive price");
        if (i > 0 && entries_[i].first <= entries_[i - 1].first)
            throw std::invalid_argument("price series " + token_ +
                                        ": dates not strictly increasing");
        max_price_ = std::max(max_price_, entries_[i].second);
    }
}

std::optional<double> PriceSeries::price_at(Date day) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), day,
                               [](const auto& e, Date d) { return e.first < d; });
    if (it == entries_.end() || it->first != day) return std::nullopt;
    return it->second;
}

void PriceSeries::append(Date day, double price) {
    if (price <= 0.0) throw std::invalid_argument("price must be positive");
    if (!entries_.empty() && day <= entries_.back().first)
        throw std::invalid_argument("price dates must be strictly increasing");
    entries_.emplace_back(day, price);
    max_price_ = std::max(max_price_, price);
}

}  // namespace tokentopo
