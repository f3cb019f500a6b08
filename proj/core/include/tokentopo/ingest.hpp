#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "tokentopo/graph.hpp"
#include "tokentopo/records.hpp"

namespace tokentopo::ingest {

/// Thrown for malformed input rows; carries the 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, std::size_t line, const std::string& what);
    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

/// How edge weights are normalized after top-K filtering.
///
/// PostFilter recomputes A_min/A_max over the induced subgraph so each day's
/// surviving edges span the full weight range; PreFilter keeps the weights
/// computed on the unfiltered graph.
enum class AmountNormalization { PostFilter, PreFilter };

/// Parse a transactions CSV (header `token,from,to,amount,timestamp`) and
/// return the rows for `token`, self-loops dropped, sorted by timestamp.
/// A token absent from the file yields an empty result.
[[nodiscard]] std::vector<TokenTransaction> load_transactions(const std::string& path,
                                                              const std::string& token);

/// Same parse, grouped by token; avoids re-reading the file per token.
[[nodiscard]] std::map<std::string, std::vector<TokenTransaction>> load_all_transactions(
    const std::string& path);

/// Parse a prices CSV (header `token,date,open`, ISO dates). Validates that
/// every series has strictly increasing dates and positive prices.
[[nodiscard]] std::map<std::string, PriceSeries> load_prices(const std::string& path);

/// Transactions grouped by UTC calendar day, days sorted ascending.
[[nodiscard]] std::map<Date, std::vector<TokenTransaction>> group_by_day(
    const std::vector<TokenTransaction>& txs);

/// Build the undirected weighted graph for one day.
///
/// Transfers between the same unordered address pair are summed into one
/// edge amount A_uv, and the weight is
///   w_uv = 1 / (1 + alpha * (A_uv - A_min) / (A_max - A_min))
/// with A_min/A_max the extreme aggregated amounts of this graph. When all
/// amounts coincide (A_min == A_max) every weight is 1. All transactions
/// must fall on `date`; an empty list yields an empty graph.
[[nodiscard]] DailyGraph build_daily_graph(const std::vector<TokenTransaction>& txs, Date date,
                                           double alpha);

/// Induced subgraph on the k highest-degree vertices. Ties are broken by
/// larger total incident amount, then lexicographically smaller address.
/// Graphs with at most k vertices are returned unchanged. With PostFilter
/// normalization the surviving edges get weights recomputed from the induced
/// graph's A_min/A_max.
[[nodiscard]] DailyGraph top_k_filter(const DailyGraph& g, std::size_t k, double alpha,
                                      AmountNormalization norm = AmountNormalization::PostFilter);

}  // namespace tokentopo::ingest
