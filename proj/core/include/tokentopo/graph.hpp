#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tokentopo/date.hpp"

namespace tokentopo {

/// Undirected weighted transaction graph for one token-day.
///
/// Vertices are addresses, stored sorted so that vertex ids are stable under
/// permutations of the input transactions. Each edge aggregates every
/// transfer between its endpoint pair (both directions) into one amount, and
/// carries the dissimilarity weight derived from that amount. Pairs without
/// an edge are implicitly at infinite dissimilarity.
class DailyGraph {
public:
    struct Edge {
        std::int32_t u = 0;   // vertex ids with u < v
        std::int32_t v = 0;
        double amount = 0.0;  // aggregated transfer amount
        double weight = 0.0;  // dissimilarity in (0, 1]
    };

    DailyGraph() = default;
    DailyGraph(std::string token, Date date, std::vector<std::string> sorted_addresses,
               std::vector<Edge> sorted_edges);

    const std::string& token() const { return token_; }
    Date date() const { return date_; }

    std::size_t num_nodes() const { return addresses_.size(); }
    std::size_t num_edges() const { return edges_.size(); }
    bool empty() const { return addresses_.empty(); }

    const std::vector<std::string>& addresses() const { return addresses_; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Number of incident edges for vertex `v`.
    int degree(std::int32_t v) const { return degrees_[static_cast<std::size_t>(v)]; }

    /// Neighbor ids of `v`, sorted ascending.
    const std::vector<std::int32_t>& neighbors(std::int32_t v) const {
        return adjacency_[static_cast<std::size_t>(v)];
    }

    /// True if vertices a and b share an edge.
    bool has_edge(std::int32_t a, std::int32_t b) const;

    /// Sum of incident edge amounts for vertex `v`.
    double incident_amount(std::int32_t v) const {
        return incident_amount_[static_cast<std::size_t>(v)];
    }

    /// Connected component count (singleton vertices included).
    [[nodiscard]] int connected_components() const;

private:
    std::string token_;
    Date date_;
    std::vector<std::string> addresses_;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::int32_t>> adjacency_;
    std::vector<int> degrees_;
    std::vector<double> incident_amount_;
};

}  // namespace tokentopo
