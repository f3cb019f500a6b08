#include "tokentopo/graph.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace tokentopo {

DailyGraph::DailyGraph(std::string token, Date date, std::vector<std::string> sorted_addresses,
                       std::vector<Edge> sorted_edges)
    : token_(std::move(token)),
      date_(date),
      addresses_(std::move(sorted_addresses)),
      edges_(std::move(sorted_edges)) {
    const auto n = addresses_.size();
    adjacency_.resize(n);
    degrees_.assign(n, 0);
    incident_amount_.assign(n, 0.0);
    for (const Edge& e : edges_) {
        if (e.u == e.v) throw std::invalid_argument("self-loop in daily graph");
        if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= n ||
            static_cast<std::size_t>(e.v) >= n || e.u >= e.v)
            throw std::invalid_argument("edge endpoints out of order or out of range");
        adjacency_[static_cast<std::size_t>(e.u)].push_back(e.v);
        adjacency_[static_cast<std::size_t>(e.v)].push_back(e.u);
        ++degrees_[static_cast<std::size_t>(e.u)];
        ++degrees_[static_cast<std::size_t>(e.v)];
        incident_amount_[static_cast<std::size_t>(e.u)] += e.amount;
        incident_amount_[static_cast<std::size_t>(e.v)] += e.amount;
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
}

bool DailyGraph::has_edge(std::int32_t a, std::int32_t b) const {
    if (a == b) return false;
    const auto& adj = adjacency_[static_cast<std::size_t>(a)];
    return std::binary_search(adj.begin(), adj.end(), b);
}

int DailyGraph::connected_components() const {
    const std::size_t n = addresses_.size();
    std::vector<std::int32_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::int32_t x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    int components = static_cast<int>(n);
    for (const Edge& e : edges_) {
        auto ru = find(e.u), rv = find(e.v);
        if (ru != rv) {
            parent[static_cast<std::size_t>(ru)] = rv;
            --components;
        }
    }
    return components;
}

}  // namespace tokentopo
