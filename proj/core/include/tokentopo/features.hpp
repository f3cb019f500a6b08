#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tokentopo/date.hpp"
#include "tokentopo/graph.hpp"
#include "tokentopo/homology.hpp"
#include "tokentopo/ingest.hpp"
#include "tokentopo/records.hpp"

namespace tokentopo::features {

struct FeatureParams {
    int k = 150;
    double alpha = 9.0;
    double delta = 0.25;
    int horizon = 2;
    int window = 7;
    int max_dim = 2;
    ingest::AmountNormalization normalization = ingest::AmountNormalization::PostFilter;
    bool include_tx_count = false;
    bool depth_self_pairs = false;

    void validate() const;
};

// Node count, edge count and mean local clustering coefficient of a daily
// graph. Nodes of degree < 2 contribute 0 to the mean; an empty graph has
// clustering 0.
struct GraphSummary {
    std::size_t num_nodes = 0;
    std::size_t num_edges = 0;
    double clustering = 0.0;
};

[[nodiscard]] GraphSummary summarize_graph(const DailyGraph& g);

// Simple return (cur - prev) / prev.
[[nodiscard]] double price_return(double prev, double cur);

// Whether any of the next `horizon` daily returns after `t` moves by at
// least `delta` in magnitude. Undefined (nullopt) unless the series has a
// price on every calendar day t .. t+horizon.
[[nodiscard]] std::optional<bool> anomaly_label(const PriceSeries& prices, Date t, double delta,
                                                int horizon);

// Per-day topological state for one token: the filtered graph's summary
// statistics and its Betti curves for dimensions 0..max_dim.
struct DailyTopology {
    Date date;
    std::size_t num_nodes = 0;
    std::size_t num_edges = 0;
    std::size_t tx_count = 0;
    double clustering = 0.0;
    std::vector<homology::BettiCurve> curves;
};

struct TokenFeatures {
    std::string token;
    std::vector<DailyTopology> days;            // chronological, one per trading day
    std::vector<std::vector<double>> rolling;   // rolling[dim][day index]
    std::vector<std::size_t> pivots;            // deepest-curve day index per dimension
    std::vector<double> normalized_price;       // aligned with days; NaN when no price
};

// A complete model row: every feature and the label are defined.
struct FeatureRow {
    Date date;
    double pn = 0.0;
    double ne = 0.0;
    double nv = 0.0;
    double gc = 0.0;
    std::vector<double> rd;   // rd0..rd_maxdim
    double ntx = 0.0;         // only meaningful when include_tx_count is set
    bool label = false;
};

// Builds the full per-token state: daily graphs (top-k filtered), Betti
// curves, rolling depths, pivots, and normalized prices.
[[nodiscard]] TokenFeatures build_token_features(const std::string& token,
                                                 const std::vector<TokenTransaction>& txs,
                                                 const PriceSeries& prices,
                                                 const FeatureParams& params);

// Rows for a given label horizon, keeping only days where the price,
// the graph, and the horizon label are all available.
[[nodiscard]] std::vector<FeatureRow> feature_rows(const TokenFeatures& tf,
                                                   const PriceSeries& prices, double delta,
                                                   int horizon);

}  // namespace tokentopo::features
