#include "support/gen.hpp"

#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace tokentopo::testsupport {

namespace {

std::string addr(int i) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "a%02d", i);
    return buf;
}

}  // namespace

DailyGraph random_graph(Rng& rng, int max_nodes, double edge_prob) {
    const int n = static_cast<int>(rng.range(1, max_nodes));
    std::vector<std::string> addresses;
    addresses.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) addresses.push_back(addr(i));
    std::vector<DailyGraph::Edge> edges;
    for (int u = 0; u < n; ++u) {
        for (int v = u + 1; v < n; ++v) {
            if (!rng.bernoulli(edge_prob)) continue;
            DailyGraph::Edge e;
            e.u = u;
            e.v = v;
            e.amount = rng.uniform(0.5, 100.0);
            e.weight = rng.uniform(0.1, 1.0);
            edges.push_back(e);
        }
    }
    return DailyGraph("test", Date(18628), std::move(addresses), std::move(edges));
}

DailyGraph make_graph(int n, std::vector<WeightedEdge> spec) {
    std::vector<std::string> addresses;
    addresses.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) addresses.push_back(addr(i));
    std::vector<DailyGraph::Edge> edges;
    edges.reserve(spec.size());
    for (const auto& e : spec) {
        DailyGraph::Edge edge;
        edge.u = std::min(e.u, e.v);
        edge.v = std::max(e.u, e.v);
        edge.amount = e.amount;
        edge.weight = e.weight;
        edges.push_back(edge);
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    return DailyGraph("test", Date(18628), std::move(addresses), std::move(edges));
}

DailyGraph relabel(const DailyGraph& g, Rng& rng) {
    const auto n = static_cast<int>(g.num_nodes());
    // Random new names; the rebuilt graph sorts them, permuting vertex ids.
    std::vector<int> perm(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
    for (int i = n - 1; i > 0; --i)
        std::swap(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);

    std::vector<std::string> new_name(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) new_name[static_cast<std::size_t>(i)] = addr(perm[static_cast<std::size_t>(i)]);

    std::vector<std::string> sorted = new_name;
    std::sort(sorted.begin(), sorted.end());
    auto new_id = [&](std::int32_t old) {
        const auto& name = new_name[static_cast<std::size_t>(old)];
        return static_cast<std::int32_t>(
            std::lower_bound(sorted.begin(), sorted.end(), name) - sorted.begin());
    };

    std::vector<DailyGraph::Edge> edges;
    edges.reserve(g.num_edges());
    for (const auto& e : g.edges()) {
        DailyGraph::Edge ne = e;
        ne.u = new_id(e.u);
        ne.v = new_id(e.v);
        if (ne.u > ne.v) std::swap(ne.u, ne.v);
        edges.push_back(ne);
    }
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    return DailyGraph(g.token(), g.date(), std::move(sorted), std::move(edges));
}

homology::BettiCurve random_step_curve(Rng& rng, int max_breaks, int max_value,
                                       double domain_end) {
    homology::BettiCurve c;
    c.dim = 0;
    std::vector<double> breaks{0.0};
    const int k = static_cast<int>(rng.range(0, max_breaks));
    for (int i = 0; i < k; ++i) breaks.push_back(rng.uniform(0.0, domain_end));
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    c.breakpoints = breaks;
    c.values.reserve(breaks.size());
    for (std::size_t i = 0; i < breaks.size(); ++i)
        c.values.push_back(static_cast<int>(rng.range(0, max_value)));
    return c;
}

homology::BettiCurve const_curve(int value, double at) {
    homology::BettiCurve c;
    c.dim = 0;
    c.breakpoints = {at};
    c.values = {value};
    return c;
}

PriceSeries random_prices(Rng& rng, const std::string& token, Date start, int days, double vol,
                          double gap_prob) {
    PriceSeries s(token, {});
    double price = rng.uniform(1.0, 100.0);
    for (int d = 0; d < days; ++d) {
        price *= std::exp(rng.normal(0.0, vol));
        if (d > 0 && rng.bernoulli(gap_prob)) continue;
        s.append(start + d, price);
    }
    return s;
}

TempDir::TempDir() {
    static std::uint64_t counter = 0;
    auto base = std::filesystem::temp_directory_path();
    path_ = base / ("tokentopo_test_" + std::to_string(::getpid()) + "_" +
                    std::to_string(counter++));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

std::string TempDir::file(const std::string& name, const std::string& contents) const {
    const auto p = path_ / name;
    std::ofstream out(p, std::ios::binary);
    out << contents;
    if (!out) throw std::runtime_error("cannot write " + p.string());
    return p.string();
}

std::string read_file(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

bool same_graph(const DailyGraph& a, const DailyGraph& b) {
    if (a.addresses() != b.addresses()) return false;
    if (a.num_edges() != b.num_edges()) return false;
    for (std::size_t i = 0; i < a.num_edges(); ++i) {
        const auto& ea = a.edges()[i];
        const auto& eb = b.edges()[i];
        if (ea.u != eb.u || ea.v != eb.v) return false;
        if (ea.amount != eb.amount || ea.weight != eb.weight) return false;
    }
    return true;
}

}  // namespace tokentopo::testsupport
