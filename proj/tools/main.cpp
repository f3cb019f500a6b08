#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "tokentopo/forecast.hpp"
#include "tokentopo/pipeline.hpp"

namespace {

int parse_channel(const std::string& text) {
    if (text.size() == 3 && text[0] == 'r' && text[1] == 'd' && text[2] >= '0' && text[2] <= '2')
        return text[2] - '0';
    throw CLI::ValidationError("--coint-channel", "expected rd0, rd1 or rd2");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "tokentopo: multi-resolution topological descriptors of daily token transaction\n"
        "graphs, price-anomaly forecasting, and pairwise cointegration analysis."};

    tokentopo::pipeline::PipelineConfig cfg;
    std::string mtry = "auto";
    std::string channel = "rd1";
    std::string normalization = "post-filter";

    app.add_option("--transactions", cfg.transactions_path,
                   "Transactions CSV (token,from,to,amount,timestamp)")
        ->required();
    app.add_option("--prices", cfg.prices_path, "Prices CSV (token,date,open)")->required();
    app.add_option("--out", cfg.out_dir, "Output directory")->required();
    app.add_option("--token", cfg.tokens, "Restrict the run to these tokens (repeatable)");
    app.add_option("--k", cfg.k, "Keep the k highest-degree addresses per day")->capture_default_str();
    app.add_option("--alpha", cfg.alpha, "Weight steepness")->capture_default_str();
    app.add_option("--delta", cfg.delta, "Anomaly threshold on absolute daily returns")->capture_default_str();
    app.add_option("--horizon", cfg.horizon, "Headline prediction horizon in days")->capture_default_str();
    app.add_option("--horizon-max", cfg.horizon_max, "Largest horizon scanned for metrics")->capture_default_str();
    app.add_option("--window", cfg.window, "Rolling depth window in calendar days")->capture_default_str();
    app.add_option("--max-dim", cfg.max_dim, "Highest Betti dimension (0..2)")->capture_default_str();
    app.add_option("--trees", cfg.trees, "Trees per forest")->capture_default_str();
    app.add_option("--mtry", mtry, "Variables per split: auto, all, or a count")->capture_default_str();
    app.add_option("--min-leaf", cfg.min_leaf, "Minimum samples per leaf")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Master PRNG seed")->capture_default_str();
    app.add_option("--train-frac", cfg.train_frac, "Chronological training fraction")->capture_default_str();
    app.add_option("--rho", cfg.rho, "Accuracy floor for the reliable-horizon scan")->capture_default_str();
    app.add_option("--coint-channel", channel, "Descriptor series for cointegration")->capture_default_str();
    app.add_option("--jobs", cfg.jobs, "Parallel token workers")->capture_default_str();
    app.add_option("--amount-normalization", normalization,
                   "Edge weight normalization: post-filter or pre-filter")->capture_default_str();
    app.add_flag("--ntx", cfg.include_tx_count, "Add a raw transaction count column");
    app.add_flag("--depth-self-pairs", cfg.depth_self_pairs,
                 "Include single-curve bands in the depth normalizer");
    app.add_flag("--class-balanced", cfg.class_balanced,
                 "Weight classes inversely to frequency when growing trees");

    try {
        app.parse(argc, argv);
        cfg.mtry = tokentopo::forecast::MtrySpec::parse(mtry);
        cfg.coint_dim = parse_channel(channel);
        if (normalization == "post-filter") {
            cfg.normalization = tokentopo::ingest::AmountNormalization::PostFilter;
        } else if (normalization == "pre-filter") {
            cfg.normalization = tokentopo::ingest::AmountNormalization::PreFilter;
        } else {
            throw CLI::ValidationError("--amount-normalization",
                                       "expected post-filter or pre-filter");
        }
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    }

    try {
        const auto report = tokentopo::pipeline::run_pipeline(cfg);
        if (report.empty_result)
            std::fprintf(stderr, "warning: token filter matched no tokens; outputs are empty\n");
        for (const auto& f : report.failures)
            std::fprintf(stderr, "error: token=%s stage=%s: %s\n", f.token.c_str(),
                         f.stage.c_str(), f.message.c_str());
        std::fprintf(stdout, "processed %zu token(s); outputs in %s\n", report.processed.size(),
                     cfg.out_dir.c_str());
        return report.ok() ? 0 : 1;
    } catch (const tokentopo::pipeline::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const tokentopo::ingest::ParseError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
