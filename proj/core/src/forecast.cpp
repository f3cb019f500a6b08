#include "tokentopo/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "tokentopo/rng.hpp"

namespace tokentopo::forecast {

std::string model_name(ModelId id) { return "M" + std::to_string(static_cast<int>(id)); }

int model_feature_count(ModelId id) { return 3 + static_cast<int>(id); }

std::vector<std::string> model_feature_names(ModelId id) {
    std::vector<std::string> names{"pn", "ne", "nv", "gc"};
    for (int d = 0; d < static_cast<int>(id) - 1; ++d) names.push_back("rd" + std::to_string(d));
    return names;
}

MtrySpec MtrySpec::parse(const std::string& text) {
    if (text == "auto" || text == "sqrt") return {Mode::Sqrt, 0};
    if (text == "all") return {Mode::All, 0};
    try {
        std::size_t consumed = 0;
        const int v = std::stoi(text, &consumed);
        if (consumed == text.size() && v >= 1) return {Mode::Fixed, v};
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("mtry must be 'auto', 'all', or a positive integer");
}

int MtrySpec::resolve(int num_features) const {
    switch (mode) {
        case Mode::Sqrt:
            return std::max(1, static_cast<int>(std::sqrt(static_cast<double>(num_features))));
        case Mode::All:
            return num_features;
        case Mode::Fixed:
            return std::clamp(value, 1, num_features);
    }
    return 1;
}

void ForestParams::validate() const {
    if (num_trees < 1) throw std::invalid_argument("num_trees must be at least 1");
    if (min_leaf < 1) throw std::invalid_argument("min_leaf must be at least 1");
    if (jobs < 1) throw std::invalid_argument("jobs must be at least 1");
}

Dataset to_dataset(const std::vector<features::FeatureRow>& rows) {
    Dataset d;
    d.x.reserve(rows.size());
    d.y.reserve(rows.size());
    d.dates.reserve(rows.size());
    for (const auto& row : rows) {
        std::vector<double> cols{row.pn, row.ne, row.nv, row.gc};
        cols.insert(cols.end(), row.rd.begin(), row.rd.end());
        d.x.push_back(std::move(cols));
        d.y.push_back(row.label ? 1 : 0);
        d.dates.push_back(row.date);
    }
    return d;
}

TrainTestSplit chronological_split(const Dataset& d, double train_frac) {
    if (d.size() < 3) throw std::invalid_argument("need at least 3 rows to split");
    if (train_frac <= 0.0 || train_frac >= 1.0)
        throw std::invalid_argument("train_frac must lie strictly between 0 and 1");
    const double n = static_cast<double>(d.size());
    auto train_size = static_cast<std::size_t>(std::floor(n * train_frac + 1e-9));
    train_size = std::clamp<std::size_t>(train_size, 1, d.size() - 1);

    TrainTestSplit split;
    for (std::size_t i = 0; i < d.size(); ++i) {
        Dataset& side = i < train_size ? split.train : split.test;
        side.x.push_back(d.x[i]);
        side.y.push_back(d.y[i]);
        side.dates.push_back(d.dates[i]);
    }
    return split;
}

bool Tree::predict(const std::vector<double>& row) const {
    std::int32_t at = 0;
    while (nodes[static_cast<std::size_t>(at)].feature >= 0) {
        const TreeNode& n = nodes[static_cast<std::size_t>(at)];
        at = row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right;
    }
    return nodes[static_cast<std::size_t>(at)].prediction;
}

namespace {

struct TreeGrower {
    const Dataset& data;
    int num_features;
    int mtry;
    int min_leaf;
    double w_pos;
    double w_neg;
    Rng rng;
    std::vector<TreeNode> nodes;

    double label_weight(std::size_t row) const { return data.y[row] ? w_pos : w_neg; }

    std::int32_t make_leaf(const std::vector<std::int32_t>& idx) {
        double pos = 0.0;
        double neg = 0.0;
        for (std::int32_t i : idx) (data.y[static_cast<std::size_t>(i)] ? pos : neg) +=
            label_weight(static_cast<std::size_t>(i));
        TreeNode leaf;
        leaf.prediction = pos > neg;  // tie keeps the negative class
        nodes.push_back(leaf);
        return static_cast<std::int32_t>(nodes.size() - 1);
    }

    std::int32_t grow(std::vector<std::int32_t>& idx) {
        bool pure = true;
        for (std::size_t i = 1; i < idx.size(); ++i) {
            if (data.y[static_cast<std::size_t>(idx[i])] !=
                data.y[static_cast<std::size_t>(idx[0])]) {
                pure = false;
                break;
            }
        }
        if (pure || static_cast<int>(idx.size()) < 2 * min_leaf) return make_leaf(idx);

        // Sample mtry candidate features without replacement.
        std::vector<int> feat(static_cast<std::size_t>(num_features));
        std::iota(feat.begin(), feat.end(), 0);
        for (int i = 0; i < mtry; ++i) {
            const auto j =
                static_cast<std::size_t>(i) +
                static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(num_features - i)));
            std::swap(feat[static_cast<std::size_t>(i)], feat[j]);
        }

        double total_pos = 0.0;
        double total_neg = 0.0;
        for (std::int32_t i : idx) (data.y[static_cast<std::size_t>(i)] ? total_pos : total_neg) +=
            label_weight(static_cast<std::size_t>(i));

        int best_feature = -1;
        double best_threshold = 0.0;
        double best_score = std::numeric_limits<double>::infinity();

        std::vector<std::pair<double, std::int32_t>> order;
        order.reserve(idx.size());
        for (int fi = 0; fi < mtry; ++fi) {
            const int f = feat[static_cast<std::size_t>(fi)];
            order.clear();
            for (std::int32_t i : idx)
                order.emplace_back(data.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(f)],
                                   i);
            std::sort(order.begin(), order.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });

            double left_pos = 0.0;
            double left_neg = 0.0;
            for (std::size_t i = 1; i < order.size(); ++i) {
                const auto row = static_cast<std::size_t>(order[i - 1].second);
                (data.y[row] ? left_pos : left_neg) += label_weight(row);
                if (order[i].first == order[i - 1].first) continue;
                if (static_cast<int>(i) < min_leaf ||
                    static_cast<int>(order.size() - i) < min_leaf)
                    continue;

                const double right_pos = total_pos - left_pos;
                const double right_neg = total_neg - left_neg;
                const double wl = left_pos + left_neg;
                const double wr = right_pos + right_neg;
                const double gini_l = 1.0 - (left_pos * left_pos + left_neg * left_neg) / (wl * wl);
                const double gini_r =
                    1.0 - (right_pos * right_pos + right_neg * right_neg) / (wr * wr);
                const double score = wl * gini_l + wr * gini_r;
                if (score < best_score) {
                    best_score = score;
                    best_feature = f;
                    double threshold = 0.5 * (order[i - 1].first + order[i].first);
                    // Adjacent representable values can round the midpoint
                    // onto the right value; fall back to the left one.
                    if (threshold >= order[i].first) threshold = order[i - 1].first;
                    best_threshold = threshold;
                }
            }
        }

        if (best_feature < 0) return make_leaf(idx);  // candidates were all constant

        std::vector<std::int32_t> left;
        std::vector<std::int32_t> right;
        for (std::int32_t i : idx) {
            const double v =
                data.x[static_cast<std::size_t>(i)][static_cast<std::size_t>(best_feature)];
            (v <= best_threshold ? left : right).push_back(i);
        }
        idx.clear();
        idx.shrink_to_fit();

        nodes.emplace_back();
        const auto at = static_cast<std::int32_t>(nodes.size() - 1);
        nodes[static_cast<std::size_t>(at)].feature = best_feature;
        nodes[static_cast<std::size_t>(at)].threshold = best_threshold;
        const std::int32_t l = grow(left);
        nodes[static_cast<std::size_t>(at)].left = l;
        const std::int32_t r = grow(right);
        nodes[static_cast<std::size_t>(at)].right = r;
        return at;
    }
};

Tree grow_tree(const Dataset& train, int num_features, const ForestParams& params,
               double w_pos, double w_neg, std::uint64_t tree_seed) {
    TreeGrower grower{train,
                      num_features,
                      params.mtry.resolve(num_features),
                      params.min_leaf,
                      w_pos,
                      w_neg,
                      Rng(tree_seed),
                      {}};
    const std::size_t n = train.size();
    std::vector<std::int32_t> sample;
    sample.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        sample.push_back(static_cast<std::int32_t>(grower.rng.below(n)));
    grower.grow(sample);
    return Tree{std::move(grower.nodes)};
}

}  // namespace

ForestModel train_forest(const Dataset& train, ModelId id, int num_features,
                         const ForestParams& params) {
    params.validate();
    if (train.size() == 0) throw std::invalid_argument("training set must not be empty");
    if (num_features < 1 || static_cast<std::size_t>(num_features) > train.x.front().size())
        throw std::invalid_argument("num_features out of range");

    double w_pos = 1.0;
    double w_neg = 1.0;
    if (params.class_balanced) {
        std::size_t pos = 0;
        for (auto label : train.y) pos += label;
        const std::size_t neg = train.size() - pos;
        if (pos > 0 && neg > 0) {
            w_pos = static_cast<double>(train.size()) / (2.0 * static_cast<double>(pos));
            w_neg = static_cast<double>(train.size()) / (2.0 * static_cast<double>(neg));
        }
    }

    ForestModel model;
    model.id = id;
    model.num_features = num_features;
    model.trees.resize(static_cast<std::size_t>(params.num_trees));

    auto train_range = [&](std::size_t begin, std::size_t end) {
        for (std::size_t t = begin; t < end; ++t)
            model.trees[t] = grow_tree(train, num_features, params, w_pos, w_neg,
                                       derive_seed(params.seed, t));
    };

    const auto total = static_cast<std::size_t>(params.num_trees);
    const auto workers = std::min<std::size_t>(static_cast<std::size_t>(params.jobs), total);
    if (workers <= 1) {
        train_range(0, total);
    } else {
        // Per-tree seeds make the partitioning irrelevant to the result.
        std::vector<std::thread> threads;
        threads.reserve(workers);
        const std::size_t chunk = (total + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(total, begin + chunk);
            if (begin < end) threads.emplace_back(train_range, begin, end);
        }
        for (auto& th : threads) th.join();
    }
    return model;
}

std::vector<Prediction> predict(const ForestModel& model, const Dataset& rows) {
    for (const auto& row : rows.x)
        if (row.size() < static_cast<std::size_t>(model.num_features))
            throw std::invalid_argument("row is missing model features");

    std::vector<Prediction> out;
    out.reserve(rows.size());
    for (const auto& row : rows.x) {
        std::size_t votes = 0;
        for (const auto& tree : model.trees) votes += tree.predict(row) ? 1 : 0;
        const double fraction = static_cast<double>(votes) / static_cast<double>(model.trees.size());
        out.push_back({fraction > 0.5, fraction});
    }
    return out;
}

double Metrics::accuracy() const {
    const std::size_t total = tp + fp + tn + fn;
    return total == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(total);
}

std::optional<double> Metrics::precision() const {
    if (tp + fp == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fp);
}

std::optional<double> Metrics::recall() const {
    if (tp + fn == 0) return std::nullopt;
    return static_cast<double>(tp) / static_cast<double>(tp + fn);
}

Metrics evaluate(const std::vector<Prediction>& predictions, const Dataset& rows) {
    if (rows.size() == 0) throw std::invalid_argument("cannot evaluate an empty test set");
    if (predictions.size() != rows.size())
        throw std::invalid_argument("predictions and rows must be aligned");

    Metrics m;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const bool predicted = predictions[i].anomaly;
        const bool actual = rows.y[i] != 0;
        if (predicted && actual) ++m.tp;
        if (predicted && !actual) ++m.fp;
        if (!predicted && !actual) ++m.tn;
        if (!predicted && actual) ++m.fn;
        if (predicted) m.positive_days.push_back(rows.dates[i]);
    }
    return m;
}

std::map<std::string, std::size_t> agreement_counts(
    const std::map<ModelId, std::vector<Date>>& positives) {
    std::vector<ModelId> ids;
    std::vector<std::vector<Date>> sets;
    for (const auto& [id, days] : positives) {
        ids.push_back(id);
        auto sorted = days;
        std::sort(sorted.begin(), sorted.end());
        sets.push_back(std::move(sorted));
    }

    std::map<std::string, std::size_t> counts;
    const auto n = ids.size();
    for (std::size_t mask = 1; mask < (std::size_t{1} << n); ++mask) {
        std::string key;
        std::vector<Date> common;
        bool first = true;
        for (std::size_t i = 0; i < n; ++i) {
            if (!(mask & (std::size_t{1} << i))) continue;
            if (first) {
                common = sets[i];
                key = model_name(ids[i]);
                first = false;
            } else {
                std::vector<Date> next;
                std::set_intersection(common.begin(), common.end(), sets[i].begin(),
                                      sets[i].end(), std::back_inserter(next));
                common = std::move(next);
                key += "&" + model_name(ids[i]);
            }
        }
        counts[key] = common.size();
    }
    return counts;
}

std::optional<int> max_reliable_horizon(const std::vector<double>& accuracy_by_h, double rho) {
    std::optional<int> best;
    for (std::size_t i = 0; i < accuracy_by_h.size(); ++i) {
        if (accuracy_by_h[i] >= rho) {
            best = static_cast<int>(i) + 1;
        } else {
            break;
        }
    }
    return best;
}

}  // namespace tokentopo::forecast
