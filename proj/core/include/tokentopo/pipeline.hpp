#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tokentopo/forecast.hpp"
#include "tokentopo/ingest.hpp"

namespace tokentopo::pipeline {

struct PipelineConfig {
    std::string transactions_path;
    std::string prices_path;
    std::string out_dir;
    std::vector<std::string> tokens;  // empty = every token in the input

    int k = 150;
    double alpha = 9.0;
    double delta = 0.25;
    int horizon = 2;      // headline horizon: features.csv labels, predictions.csv
    int horizon_max = 7;  // metrics are evaluated for every horizon 1..horizon_max
    int window = 7;
    int max_dim = 2;
    int trees = 500;
    forecast::MtrySpec mtry{};
    int min_leaf = 1;
    std::uint64_t seed = 0;
    double train_frac = 2.0 / 3.0;
    double rho = 0.9;
    int coint_dim = 1;  // Betti dimension whose rolling depth feeds cointegration
    int jobs = 1;
    ingest::AmountNormalization normalization = ingest::AmountNormalization::PostFilter;
    bool include_tx_count = false;
    bool depth_self_pairs = false;
    bool class_balanced = false;

    void validate() const;
};

// A per-token failure. Other tokens keep their results; the run exits
// nonzero but with complete outputs for everything that worked.
struct TokenError {
    std::string token;
    std::string stage;
    std::string message;
};

struct RunReport {
    std::vector<std::string> processed;
    std::vector<TokenError> failures;
    bool empty_result = false;  // token filter matched nothing

    [[nodiscard]] bool ok() const { return failures.empty(); }
};

// Thrown when inputs are unreadable or malformed; nothing is written.
class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Full run: ingest both input files, process every selected token (graphs,
// Betti curves, depths, features, forests over all horizons), run the
// pairwise cointegration protocol, and write features.csv, betti_curves.csv,
// predictions.csv, metrics.json, cointegration.json and manifest.json into
// out_dir. Files are written atomically (temp file + rename) after all
// processing finishes. Tokens are processed in parallel up to `jobs`; the
// outputs do not depend on the schedule.
RunReport run_pipeline(const PipelineConfig& config);

}  // namespace tokentopo::pipeline
