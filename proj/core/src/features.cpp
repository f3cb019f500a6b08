#include "tokentopo/features.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "tokentopo/depth.hpp"

namespace tokentopo::features {

void FeatureParams::validate() const {
    if (k < 1) throw std::invalid_argument("k must be at least 1");
    if (alpha <= 0.0) throw std::invalid_argument("alpha must be positive");
    if (delta <= 0.0) throw std::invalid_argument("delta must be positive");
    if (horizon < 1) throw std::invalid_argument("horizon must be at least 1");
    if (window < 1) throw std::invalid_argument("window must be at least 1");
    if (max_dim < 0 || max_dim > 2) throw std::invalid_argument("max_dim must be in [0, 2]");
}

GraphSummary summarize_graph(const DailyGraph& g) {
    GraphSummary s;
    s.num_nodes = g.num_nodes();
    s.num_edges = g.num_edges();
    if (g.num_nodes() == 0) return s;

    double sum = 0.0;
    for (std::int32_t v = 0; v < static_cast<std::int32_t>(g.num_nodes()); ++v) {
        const auto& nbrs = g.neighbors(v);
        const std::size_t deg = nbrs.size();
        if (deg < 2) continue;
        std::size_t closed = 0;
        for (std::size_t i = 0; i < deg; ++i)
            for (std::size_t j = i + 1; j < deg; ++j)
                if (g.has_edge(nbrs[i], nbrs[j])) ++closed;
        sum += 2.0 * static_cast<double>(closed) /
               (static_cast<double>(deg) * static_cast<double>(deg - 1));
    }
    s.clustering = sum / static_cast<double>(g.num_nodes());
    return s;
}

double price_return(double prev, double cur) {
    if (prev <= 0.0) throw std::invalid_argument("previous price must be positive");
    return (cur - prev) / prev;
}

std::optional<bool> anomaly_label(const PriceSeries& prices, Date t, double delta, int horizon) {
    std::vector<double> window;
    window.reserve(static_cast<std::size_t>(horizon) + 1);
    for (int s = 0; s <= horizon; ++s) {
        const auto p = prices.price_at(t + s);
        if (!p) return std::nullopt;
        window.push_back(*p);
    }
    for (int s = 1; s <= horizon; ++s)
        if (std::abs(price_return(window[static_cast<std::size_t>(s - 1)],
                                  window[static_cast<std::size_t>(s)])) >= delta)
            return true;
    return false;
}

TokenFeatures build_token_features(const std::string& token,
                                   const std::vector<TokenTransaction>& txs,
                                   const PriceSeries& prices, const FeatureParams& params) {
    params.validate();

    TokenFeatures tf;
    tf.token = token;

    const auto by_day = ingest::group_by_day(txs);
    const homology::FiltrationSpec spec{params.max_dim, 1.0};
    for (const auto& [date, day_txs] : by_day) {
        try {
            const DailyGraph raw = ingest::build_daily_graph(day_txs, date, params.alpha);
            const DailyGraph g = ingest::top_k_filter(raw, static_cast<std::size_t>(params.k),
                                                      params.alpha, params.normalization);
            const GraphSummary summary = summarize_graph(g);

            DailyTopology day;
            day.date = date;
            day.num_nodes = summary.num_nodes;
            day.num_edges = summary.num_edges;
            day.tx_count = day_txs.size();
            day.clustering = summary.clustering;
            day.curves = homology::betti_curves(homology::build_filtration(g, spec), spec);
            tf.days.push_back(std::move(day));
        } catch (const std::exception& e) {
            throw std::runtime_error("day " + date.to_iso() + ": " + e.what());
        }
    }

    std::vector<Date> dates;
    dates.reserve(tf.days.size());
    for (const auto& d : tf.days) dates.push_back(d.date);

    const depth::DepthParams depth_params{1.0, params.depth_self_pairs};
    tf.rolling.resize(static_cast<std::size_t>(params.max_dim) + 1);
    tf.pivots.resize(static_cast<std::size_t>(params.max_dim) + 1, 0);
    for (int dim = 0; dim <= params.max_dim; ++dim) {
        std::vector<homology::BettiCurve> curves;
        curves.reserve(tf.days.size());
        for (const auto& d : tf.days) curves.push_back(d.curves[static_cast<std::size_t>(dim)]);
        tf.rolling[static_cast<std::size_t>(dim)] =
            depth::rolling_depth(dates, curves, params.window, depth_params);
        if (curves.size() >= 2) {
            tf.pivots[static_cast<std::size_t>(dim)] = depth::betti_pivot(curves, depth_params);
        }
    }

    tf.normalized_price.reserve(tf.days.size());
    const double max_price = prices.max_price();
    for (const auto& d : tf.days) {
        const auto p = prices.price_at(d.date);
        tf.normalized_price.push_back(
            p && max_price > 0.0 ? *p / max_price : std::numeric_limits<double>::quiet_NaN());
    }

    return tf;
}

std::vector<FeatureRow> feature_rows(const TokenFeatures& tf, const PriceSeries& prices,
                                     double delta, int horizon) {
    std::vector<FeatureRow> rows;
    for (std::size_t i = 0; i < tf.days.size(); ++i) {
        if (std::isnan(tf.normalized_price[i])) continue;
        const auto label = anomaly_label(prices, tf.days[i].date, delta, horizon);
        if (!label) continue;

        FeatureRow row;
        row.date = tf.days[i].date;
        row.pn = tf.normalized_price[i];
        row.ne = static_cast<double>(tf.days[i].num_edges);
        row.nv = static_cast<double>(tf.days[i].num_nodes);
        row.gc = tf.days[i].clustering;
        row.rd.reserve(tf.rolling.size());
        for (const auto& series : tf.rolling) row.rd.push_back(series[i]);
        row.ntx = static_cast<double>(tf.days[i].tx_count);
        row.label = *label;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace tokentopo::features
