#include "tokentopo/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "csv.hpp"

namespace tokentopo::ingest {

using detail::for_each_row;
using detail::parse_double;
using detail::parse_int64;

ParseError::ParseError(std::string file, std::size_t line, const std::string& what)
    : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
      file_(std::move(file)),
      line_(line) {}

namespace {

constexpr const char* kTransactionsHeader = "token,from,to,amount,timestamp";
constexpr const char* kPricesHeader = "token,date,open";

TokenTransaction parse_transaction_row(const std::string& path, std::size_t line_no,
                                       const std::vector<std::string>& fields) {
    if (fields.size() != 5)
        throw ParseError(path, line_no, "expected 5 fields, got " + std::to_string(fields.size()));
    TokenTransaction tx;
    tx.token = fields[0];
    tx.from = fields[1];
    tx.to = fields[2];
    if (tx.token.empty()) throw ParseError(path, line_no, "empty token");
    if (tx.from.empty() || tx.to.empty()) throw ParseError(path, line_no, "empty address");
    if (!parse_double(fields[3], tx.amount) || !std::isfinite(tx.amount))
        throw ParseError(path, line_no, "malformed amount '" + fields[3] + "'");
    if (tx.amount < 0.0) throw ParseError(path, line_no, "negative amount");
    if (!parse_int64(fields[4], tx.timestamp))
        throw ParseError(path, line_no, "malformed timestamp '" + fields[4] + "'");
    return tx;
}

void sort_by_timestamp(std::vector<TokenTransaction>& txs) {
    std::stable_sort(txs.begin(), txs.end(), [](const auto& a, const auto& b) {
        return a.timestamp < b.timestamp;
    });
}

double edge_weight(double amount, double a_min, double a_max, double alpha) {
    if (a_max <= a_min) return 1.0;  // single distinct amount carries no information
    return 1.0 / (1.0 + alpha * (amount - a_min) / (a_max - a_min));
}

}  // namespace

std::vector<TokenTransaction> load_transactions(const std::string& path,
                                                const std::string& token) {
    std::vector<TokenTransaction> txs;
    for_each_row(path, kTransactionsHeader,
                 [&](std::size_t line_no, const std::vector<std::string>& fields) {
                     TokenTransaction tx = parse_transaction_row(path, line_no, fields);
                     if (tx.token != token) return;
                     if (tx.from == tx.to) return;  // self-loop
                     txs.push_back(std::move(tx));
                 });
    sort_by_timestamp(txs);
    return txs;
}

std::map<std::string, std::vector<TokenTransaction>> load_all_transactions(
    const std::string& path) {
    std::map<std::string, std::vector<TokenTransaction>> by_token;
    for_each_row(path, kTransactionsHeader,
                 [&](std::size_t line_no, const std::vector<std::string>& fields) {
                     TokenTransaction tx = parse_transaction_row(path, line_no, fields);
                     if (tx.from == tx.to) return;
                     by_token[tx.token].push_back(std::move(tx));
                 });
    for (auto& [token, txs] : by_token) sort_by_timestamp(txs);
    return by_token;
}

std::map<std::string, PriceSeries> load_prices(const std::string& path) {
    std::map<std::string, std::vector<std::pair<Date, double>>> raw;
    for_each_row(path, kPricesHeader,
                 [&](std::size_t line_no, const std::vector<std::string>& fields) {
                     if (fields.size() != 3)
                         throw ParseError(path, line_no,
                                          "expected 3 fields, got " + std::to_string(fields.size()));
                     if (fields[0].empty()) throw ParseError(path, line_no, "empty token");
                     auto date = Date::from_iso(fields[1]);
                     if (!date) throw ParseError(path, line_no, "malformed date '" + fields[1] + "'");
                     double open = 0.0;
                     if (!parse_double(fields[2], open) || !std::isfinite(open))
                         throw ParseError(path, line_no, "malformed price '" + fields[2] + "'");
                     if (open <= 0.0) throw ParseError(path, line_no, "non-positive price");
                     auto& entries = raw[fields[0]];
                     if (!entries.empty() && *date <= entries.back().first)
                         throw ParseError(path, line_no, "dates not strictly increasing for token '" +
                                                             fields[0] + "'");
                     entries.emplace_back(*date, open);
                 });
    std::map<std::string, PriceSeries> out;
    for (auto& [token, entries] : raw) out.emplace(token, PriceSeries(token, std::move(entries)));
    return out;
}

std::map<Date, std::vector<TokenTransaction>> group_by_day(
    const std::vector<TokenTransaction>& txs) {
    std::map<Date, std::vector<TokenTransaction>> by_day;
    for (const auto& tx : txs) by_day[tx.day()].push_back(tx);
    return by_day;
}

DailyGraph build_daily_graph(const std::vector<TokenTransaction>& txs, Date date, double alpha) {
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");

    std::vector<std::string> addresses;
    addresses.reserve(txs.size() * 2);
    for (const auto& tx : txs) {
        if (tx.day() != date)
            throw std::invalid_argument("transaction on " + tx.day().to_iso() +
                                        " passed to graph for " + date.to_iso());
        if (tx.from == tx.to) continue;
        addresses.push_back(tx.from);
        addresses.push_back(tx.to);
    }
    std::sort(addresses.begin(), addresses.end());
    addresses.erase(std::unique(addresses.begin(), addresses.end()), addresses.end());

    auto vertex_id = [&](const std::string& addr) {
        return static_cast<std::int32_t>(
            std::lower_bound(addresses.begin(), addresses.end(), addr) - addresses.begin());
    };

    // Aggregate both directions into one unordered pair.
    std::map<std::pair<std::int32_t, std::int32_t>, double> amounts;
    for (const auto& tx : txs) {
        if (tx.from == tx.to) continue;
        std::int32_t a = vertex_id(tx.from), b = vertex_id(tx.to);
        if (a > b) std::swap(a, b);
        amounts[{a, b}] += tx.amount;
    }

    double a_min = 0.0, a_max = 0.0;
    bool first = true;
    for (const auto& [pair, amount] : amounts) {
        if (first) {
            a_min = a_max = amount;
            first = false;
        } else {
            a_min = std::min(a_min, amount);
            a_max = std::max(a_max, amount);
        }
    }

    std::vector<DailyGraph::Edge> edges;
    edges.reserve(amounts.size());
    for (const auto& [pair, amount] : amounts)
        edges.push_back({pair.first, pair.second, amount, edge_weight(amount, a_min, a_max, alpha)});

    std::string token = txs.empty() ? std::string() : txs.front().token;
    return DailyGraph(std::move(token), date, std::move(addresses), std::move(edges));
}

DailyGraph top_k_filter(const DailyGraph& g, std::size_t k, double alpha,
                        AmountNormalization norm) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (g.num_nodes() <= k) return g;

    std::vector<std::int32_t> order(g.num_nodes());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<std::int32_t>(i);
    std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
        if (g.degree(a) != g.degree(b)) return g.degree(a) > g.degree(b);
        if (g.incident_amount(a) != g.incident_amount(b))
            return g.incident_amount(a) > g.incident_amount(b);
        return g.addresses()[static_cast<std::size_t>(a)] <
               g.addresses()[static_cast<std::size_t>(b)];
    });
    order.resize(k);

    std::vector<bool> keep(g.num_nodes(), false);
    for (auto v : order) keep[static_cast<std::size_t>(v)] = true;

    std::vector<std::string> addresses;
    addresses.reserve(k);
    std::vector<std::int32_t> new_id(g.num_nodes(), -1);
    for (std::size_t i = 0; i < g.num_nodes(); ++i) {
        if (keep[i]) {
            new_id[i] = static_cast<std::int32_t>(addresses.size());
            addresses.push_back(g.addresses()[i]);
        }
    }

    std::vector<DailyGraph::Edge> edges;
    double a_min = 0.0, a_max = 0.0;
    bool first = true;
    for (const auto& e : g.edges()) {
        if (!keep[static_cast<std::size_t>(e.u)] || !keep[static_cast<std::size_t>(e.v)]) continue;
        edges.push_back({new_id[static_cast<std::size_t>(e.u)],
                         new_id[static_cast<std::size_t>(e.v)], e.amount, e.weight});
        if (first) {
            a_min = a_max = e.amount;
            first = false;
        } else {
            a_min = std::min(a_min, e.amount);
            a_max = std::max(a_max, e.amount);
        }
    }

    if (norm == AmountNormalization::PostFilter) {
        for (auto& e : edges) e.weight = edge_weight(e.amount, a_min, a_max, alpha);
    }

    return DailyGraph(g.token(), g.date(), std::move(addresses), std::move(edges));
}

}  // namespace tokentopo::ingest
