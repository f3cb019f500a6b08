#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tokentopo/date.hpp"
#include "tokentopo/features.hpp"

namespace tokentopo::forecast {

// The four nested feature sets. Column order is fixed as
// pn, ne, nv, gc, rd0, rd1, rd2, so model k uses the first 3+k columns.
enum class ModelId { M1 = 1, M2 = 2, M3 = 3, M4 = 4 };

[[nodiscard]] std::string model_name(ModelId id);
[[nodiscard]] int model_feature_count(ModelId id);
[[nodiscard]] std::vector<std::string> model_feature_names(ModelId id);

// Number of variables drawn at each split: the square-root default, every
// feature (which degrades the forest to bagging), or an explicit count.
struct MtrySpec {
    enum class Mode { Sqrt, All, Fixed };
    Mode mode = Mode::Sqrt;
    int value = 0;

    static MtrySpec parse(const std::string& text);
    [[nodiscard]] int resolve(int num_features) const;
};

struct ForestParams {
    int num_trees = 500;
    MtrySpec mtry{};
    int min_leaf = 1;
    bool class_balanced = false;
    std::uint64_t seed = 0;
    // Worker threads for tree growing. Per-tree seed streams make the
    // schedule irrelevant: any jobs value produces the same forest.
    int jobs = 1;

    void validate() const;
};

// Row-major design matrix with aligned labels and dates, chronological.
struct Dataset {
    std::vector<std::vector<double>> x;
    std::vector<std::uint8_t> y;
    std::vector<Date> dates;

    [[nodiscard]] std::size_t size() const { return x.size(); }
};

// Full-width dataset (all seven columns when max_dim is 2); models select a
// prefix of the columns at training time.
[[nodiscard]] Dataset to_dataset(const std::vector<features::FeatureRow>& rows);

struct TrainTestSplit {
    Dataset train;
    Dataset test;
};

// First floor(n * train_frac) rows train, the rest test, no shuffling. The
// floor is taken with a small guard so an exactly rational fraction like 2/3
// is not pushed below the intended boundary by floating-point rounding.
[[nodiscard]] TrainTestSplit chronological_split(const Dataset& d, double train_frac);

struct TreeNode {
    std::int32_t feature = -1;  // -1 marks a leaf
    double threshold = 0.0;     // left branch takes x[feature] <= threshold
    std::int32_t left = -1;
    std::int32_t right = -1;
    bool prediction = false;
};

struct Tree {
    std::vector<TreeNode> nodes;

    [[nodiscard]] bool predict(const std::vector<double>& row) const;
};

struct ForestModel {
    ModelId id = ModelId::M1;
    int num_features = 0;
    std::vector<Tree> trees;
};

// Grows `params.num_trees` classification trees on bootstrap samples of the
// training rows, restricted to the first `num_features` columns. Each tree
// draws from its own generator seeded from (params.seed, tree index), so
// training order never affects the result. Splits minimize Gini impurity
// over `mtry` features sampled without replacement; nodes grow until pure,
// out of usable splits, or blocked by min_leaf.
[[nodiscard]] ForestModel train_forest(const Dataset& train, ModelId id, int num_features,
                                       const ForestParams& params);

struct Prediction {
    bool anomaly = false;
    double vote_fraction = 0.0;  // share of trees voting anomaly
};

// Majority vote across trees; an exact tie predicts non-anomalous.
[[nodiscard]] std::vector<Prediction> predict(const ForestModel& model, const Dataset& rows);

struct Metrics {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;
    std::vector<Date> positive_days;  // days predicted anomalous

    [[nodiscard]] double accuracy() const;
    [[nodiscard]] std::optional<double> precision() const;  // missing when tp+fp == 0
    [[nodiscard]] std::optional<double> recall() const;     // missing when tp+fn == 0
};

[[nodiscard]] Metrics evaluate(const std::vector<Prediction>& predictions, const Dataset& rows);

// Intersection sizes of the positive-prediction day sets for every nonempty
// subset of {M1..M4}, keyed like "M2&M3&M4". Models the run did not evaluate
// pass an empty entry and are excluded from the keys.
[[nodiscard]] std::map<std::string, std::size_t> agreement_counts(
    const std::map<ModelId, std::vector<Date>>& positives);

// Largest h such that accuracy_by_h[0..h-1] (h = 1-based horizon) all reach
// rho; nullopt when h = 1 already falls short.
[[nodiscard]] std::optional<int> max_reliable_horizon(const std::vector<double>& accuracy_by_h,
                                                      double rho);

}  // namespace tokentopo::forecast
