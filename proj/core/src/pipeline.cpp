#include "tokentopo/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <thread>

#include "json.hpp"
#include "tokentopo/cointegration.hpp"
#include "tokentopo/features.hpp"
#include "tokentopo/rng.hpp"

#ifndef TOKENTOPO_VERSION
#define TOKENTOPO_VERSION "0.0.0"
#endif

namespace tokentopo::pipeline {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

void PipelineConfig::validate() const {
    const auto fail = [](const std::string& what) { throw InputError("config: " + what); };
    if (transactions_path.empty()) fail("transactions path is required");
    if (prices_path.empty()) fail("prices path is required");
    if (out_dir.empty()) fail("output directory is required");
    if (k < 1) fail("k must be at least 1");
    if (alpha <= 0.0) fail("alpha must be positive");
    if (delta <= 0.0) fail("delta must be positive");
    if (horizon < 1) fail("horizon must be at least 1");
    if (horizon_max < horizon) fail("horizon-max must be at least the headline horizon");
    if (window < 1) fail("window must be at least 1");
    if (max_dim < 0 || max_dim > 2) fail("max-dim must be in [0, 2]");
    if (trees < 1) fail("trees must be at least 1");
    if (min_leaf < 1) fail("min-leaf must be at least 1");
    if (train_frac <= 0.0 || train_frac >= 1.0) fail("train-frac must lie in (0, 1)");
    if (rho <= 0.0 || rho >= 1.0) fail("rho must lie in (0, 1)");
    if (coint_dim < 0 || coint_dim > max_dim) fail("coint channel dimension exceeds max-dim");
    if (jobs < 1) fail("jobs must be at least 1");
}

namespace {

class StageFailure : public std::runtime_error {
public:
    StageFailure(std::string stage, const std::string& msg)
        : std::runtime_error(msg), stage_(std::move(stage)) {}
    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

struct ModelHorizonResult {
    bool available = false;
    std::string reason;
    forecast::Metrics metrics;
};

struct PredictionLine {
    Date date;
    forecast::ModelId model;
    double vote_fraction = 0.0;
    bool prediction = false;
    bool label = false;
};

struct TokenResult {
    std::string token;
    features::TokenFeatures tf;
    std::vector<forecast::ModelId> models;
    std::vector<std::size_t> rows_by_h;                      // index h-1
    std::vector<std::vector<ModelHorizonResult>> by_model;   // [model][h-1]
    std::vector<std::optional<int>> reliable_horizon;        // per model
    std::map<std::string, std::size_t> agreement;            // headline horizon
    std::vector<PredictionLine> predictions;                 // headline horizon
    std::vector<features::FeatureRow> headline_rows;
};

std::vector<forecast::ModelId> models_for(int max_dim) {
    std::vector<forecast::ModelId> out{forecast::ModelId::M1, forecast::ModelId::M2};
    if (max_dim >= 1) out.push_back(forecast::ModelId::M3);
    if (max_dim >= 2) out.push_back(forecast::ModelId::M4);
    return out;
}

TokenResult process_token(const std::string& token, const std::vector<TokenTransaction>& txs,
                          const PriceSeries& prices, const PipelineConfig& config,
                          int forest_jobs) {
    std::string stage = "features";
    try {
        TokenResult result;
        result.token = token;

        features::FeatureParams fparams;
        fparams.k = config.k;
        fparams.alpha = config.alpha;
        fparams.delta = config.delta;
        fparams.horizon = config.horizon;
        fparams.window = config.window;
        fparams.max_dim = config.max_dim;
        fparams.normalization = config.normalization;
        fparams.include_tx_count = config.include_tx_count;
        fparams.depth_self_pairs = config.depth_self_pairs;
        result.tf = features::build_token_features(token, txs, prices, fparams);

        stage = "forecast";
        result.models = models_for(config.max_dim);
        const std::uint64_t token_seed = derive_seed(config.seed, hash_name(token));

        std::vector<forecast::Dataset> dataset_by_h;
        dataset_by_h.reserve(static_cast<std::size_t>(config.horizon_max));
        for (int h = 1; h <= config.horizon_max; ++h) {
            const auto rows = features::feature_rows(result.tf, prices, config.delta, h);
            result.rows_by_h.push_back(rows.size());
            dataset_by_h.push_back(forecast::to_dataset(rows));
            if (h == config.horizon) result.headline_rows = rows;
        }

        result.by_model.resize(result.models.size());
        result.reliable_horizon.resize(result.models.size());
        std::map<forecast::ModelId, std::vector<Date>> positives;

        for (std::size_t mi = 0; mi < result.models.size(); ++mi) {
            const auto id = result.models[mi];
            auto& per_h = result.by_model[mi];
            per_h.resize(static_cast<std::size_t>(config.horizon_max));

            for (int h = 1; h <= config.horizon_max; ++h) {
                auto& slot = per_h[static_cast<std::size_t>(h - 1)];
                const auto& ds = dataset_by_h[static_cast<std::size_t>(h - 1)];
                if (ds.size() < 3) {
                    slot.reason = "fewer than 3 usable rows";
                    if (h == config.horizon)
                        throw StageFailure("split", "horizon " + std::to_string(h) + ": " +
                                                        slot.reason);
                    continue;
                }
                const auto split = forecast::chronological_split(ds, config.train_frac);

                forecast::ForestParams fp;
                fp.num_trees = config.trees;
                fp.mtry = config.mtry;
                fp.min_leaf = config.min_leaf;
                fp.class_balanced = config.class_balanced;
                fp.seed = derive_seed(token_seed,
                                      static_cast<std::uint64_t>(static_cast<int>(id)) * 64 +
                                          static_cast<std::uint64_t>(h));
                fp.jobs = forest_jobs;

                const auto model = forecast::train_forest(
                    split.train, id, forecast::model_feature_count(id), fp);
                const auto preds = forecast::predict(model, split.test);
                slot.metrics = forecast::evaluate(preds, split.test);
                slot.available = true;

                if (h == config.horizon) {
                    positives[id] = slot.metrics.positive_days;
                    for (std::size_t i = 0; i < preds.size(); ++i)
                        result.predictions.push_back({split.test.dates[i], id,
                                                      preds[i].vote_fraction, preds[i].anomaly,
                                                      split.test.y[i] != 0});
                }
            }

            std::vector<double> accuracy;
            for (const auto& slot : per_h) {
                if (!slot.available) break;
                accuracy.push_back(slot.metrics.accuracy());
            }
            result.reliable_horizon[mi] = forecast::max_reliable_horizon(accuracy, config.rho);
        }

        result.agreement = forecast::agreement_counts(positives);
        return result;
    } catch (const StageFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw StageFailure(stage, e.what());
    }
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

void atomic_write(const fs::path& dir, const std::string& name, const std::string& content) {
    const fs::path tmp = dir / (name + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw InputError("cannot write " + tmp.string());
        out << content;
        if (!out.flush()) throw InputError("failed writing " + tmp.string());
    }
    fs::rename(tmp, dir / name);
}

json metrics_json(const forecast::Metrics& m) {
    json j;
    j["tp"] = m.tp;
    j["fp"] = m.fp;
    j["tn"] = m.tn;
    j["fn"] = m.fn;
    j["accuracy"] = m.accuracy();
    const auto prec = m.precision();
    const auto rec = m.recall();
    j["precision"] = prec ? json(*prec) : json(nullptr);
    j["recall"] = rec ? json(*rec) : json(nullptr);
    j["positive_predictions"] = m.positive_days.size();
    return j;
}

json adf_json(const cointegration::AdfResult& r) {
    json j;
    j["statistic"] = std::isnan(r.statistic) ? json(nullptr) : json(r.statistic);
    j["lag"] = r.lag;
    j["critical_value_5"] =
        std::isnan(r.critical_value_5) ? json(nullptr) : json(r.critical_value_5);
    j["stationary"] = r.stationary;
    j["degenerate"] = r.degenerate;
    return j;
}

json eg_json(const cointegration::EngleGrangerResult& r) {
    json j;
    j["cointegrated"] = r.cointegrated;
    j["forward"] = {{"slope", r.forward.slope},
                    {"intercept", r.forward.intercept},
                    {"adf", adf_json(r.forward.residual_test)}};
    j["backward"] = {{"slope", r.backward.slope},
                     {"intercept", r.backward.intercept},
                     {"adf", adf_json(r.backward.residual_test)}};
    return j;
}

json hidden_json(const cointegration::HiddenResult& r) {
    json j;
    j["cointegrated"] = r.cointegrated;
    json plus;
    plus["tested"] = r.plus.tested;
    if (r.plus.tested) plus["engle_granger"] = eg_json(r.plus.result);
    json minus;
    minus["tested"] = r.minus.tested;
    if (r.minus.tested) minus["engle_granger"] = eg_json(r.minus.result);
    j["positive_components"] = std::move(plus);
    j["negative_components"] = std::move(minus);
    return j;
}

json cell_json(const cointegration::PairCell& cell) {
    json j;
    j["tested"] = cell.tested;
    j["points"] = cell.length;
    if (!cell.tested) {
        j["skip_reason"] = cell.skip_reason;
        return j;
    }
    j["engle_granger"] = eg_json(cell.plain);
    j["hidden"] = hidden_json(cell.hidden);
    return j;
}

}  // namespace

RunReport run_pipeline(const PipelineConfig& config) {
    config.validate();

    // Ingest everything up front: input problems must surface before any
    // output file is touched.
    std::map<std::string, std::vector<TokenTransaction>> all_txs;
    std::map<std::string, PriceSeries> all_prices;
    try {
        all_txs = ingest::load_all_transactions(config.transactions_path);
        all_prices = ingest::load_prices(config.prices_path);
    } catch (const std::exception& e) {
        throw InputError(e.what());
    }

    RunReport report;
    std::vector<std::string> selected;
    if (config.tokens.empty()) {
        for (const auto& [token, txs] : all_txs) selected.push_back(token);
    } else {
        std::set<std::string> requested(config.tokens.begin(), config.tokens.end());
        for (const auto& token : requested) {
            if (all_txs.count(token)) selected.push_back(token);
        }
        if (selected.empty()) report.empty_result = true;
    }
    std::sort(selected.begin(), selected.end());

    // Per-token work, parallel up to `jobs`. Results land in slots keyed by
    // token index, so the schedule cannot affect the outputs.
    std::vector<std::optional<TokenResult>> results(selected.size());
    std::vector<std::optional<TokenError>> errors(selected.size());
    const int forest_jobs = selected.size() <= 1 ? config.jobs : 1;

    const auto worker_body = [&](std::size_t i) {
        const auto& token = selected[i];
        const auto price_it = all_prices.find(token);
        if (price_it == all_prices.end()) {
            errors[i] = TokenError{token, "prices", "no price series for token"};
            return;
        }
        try {
            results[i] =
                process_token(token, all_txs.at(token), price_it->second, config, forest_jobs);
        } catch (const StageFailure& e) {
            errors[i] = TokenError{token, e.stage(), e.what()};
        } catch (const std::exception& e) {
            errors[i] = TokenError{token, "unknown", e.what()};
        }
    };

    const auto workers =
        std::min<std::size_t>(static_cast<std::size_t>(config.jobs), selected.size());
    if (workers <= 1) {
        for (std::size_t i = 0; i < selected.size(); ++i) worker_body(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            threads.emplace_back([&] {
                for (std::size_t i = next.fetch_add(1); i < selected.size();
                     i = next.fetch_add(1))
                    worker_body(i);
            });
        }
        for (auto& th : threads) th.join();
    }

    for (std::size_t i = 0; i < selected.size(); ++i) {
        if (results[i]) report.processed.push_back(selected[i]);
        if (errors[i]) report.failures.push_back(*errors[i]);
    }

    // Cross-token cointegration on whatever processed successfully.
    std::vector<cointegration::TokenChannels> channels;
    for (const auto& slot : results) {
        if (!slot) continue;
        cointegration::TokenChannels ch;
        ch.token = slot->token;
        ch.price = all_prices.at(slot->token).entries();
        const auto& rolling = slot->tf.rolling[static_cast<std::size_t>(config.coint_dim)];
        for (std::size_t d = 0; d < slot->tf.days.size(); ++d)
            ch.descriptor.emplace_back(slot->tf.days[d].date, rolling[d]);
        channels.push_back(std::move(ch));
    }
    const auto protocol = cointegration::pairwise_protocol(channels);

    // All processing done; emit the artifact files.
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec) throw InputError("cannot create output directory " + config.out_dir);
    const fs::path out = config.out_dir;
    const std::string channel_name = "rd" + std::to_string(config.coint_dim);

    {
        std::string csv = "token,date,pn,ne,nv,gc";
        for (int d = 0; d <= config.max_dim; ++d) csv += ",rd" + std::to_string(d);
        if (config.include_tx_count) csv += ",ntx";
        csv += ",label\n";
        for (const auto& slot : results) {
            if (!slot) continue;
            for (const auto& row : slot->headline_rows) {
                csv += slot->token + "," + row.date.to_iso() + "," + fmt(row.pn) + "," +
                       fmt(row.ne) + "," + fmt(row.nv) + "," + fmt(row.gc);
                for (double rd : row.rd) csv += "," + fmt(rd);
                if (config.include_tx_count) csv += "," + fmt(row.ntx);
                csv += row.label ? ",1\n" : ",0\n";
            }
        }
        atomic_write(out, "features.csv", csv);
    }

    {
        std::string csv = "token,date,dim,breakpoint,value\n";
        for (const auto& slot : results) {
            if (!slot) continue;
            for (const auto& day : slot->tf.days) {
                for (const auto& curve : day.curves) {
                    for (std::size_t b = 0; b < curve.breakpoints.size(); ++b) {
                        csv += slot->token + "," + day.date.to_iso() + "," +
                               std::to_string(curve.dim) + "," + fmt(curve.breakpoints[b]) + "," +
                               std::to_string(curve.values[b]) + "\n";
                    }
                }
            }
        }
        atomic_write(out, "betti_curves.csv", csv);
    }

    {
        std::string csv = "token,date,model,vote_fraction,prediction,label\n";
        for (const auto& slot : results) {
            if (!slot) continue;
            auto lines = slot->predictions;
            std::stable_sort(lines.begin(), lines.end(), [](const auto& a, const auto& b) {
                if (a.model != b.model) return a.model < b.model;
                return a.date < b.date;
            });
            for (const auto& line : lines) {
                csv += slot->token + "," + line.date.to_iso() + "," +
                       forecast::model_name(line.model) + "," + fmt(line.vote_fraction) + "," +
                       (line.prediction ? "1" : "0") + "," + (line.label ? "1" : "0") + "\n";
            }
        }
        atomic_write(out, "predictions.csv", csv);
    }

    {
        json root;
        root["headline_horizon"] = config.horizon;
        root["horizon_max"] = config.horizon_max;
        root["rho"] = config.rho;

        json tokens = json::object();
        std::map<std::string, std::map<int, forecast::Metrics>> pooled;  // model -> h -> sum
        for (const auto& slot : results) {
            if (!slot) continue;
            json tok;
            json rows = json::object();
            for (int h = 1; h <= config.horizon_max; ++h)
                rows[std::to_string(h)] = slot->rows_by_h[static_cast<std::size_t>(h - 1)];
            tok["rows_by_horizon"] = std::move(rows);

            json models = json::object();
            for (std::size_t mi = 0; mi < slot->models.size(); ++mi) {
                const std::string name = forecast::model_name(slot->models[mi]);
                json jm;
                json by_h = json::object();
                for (int h = 1; h <= config.horizon_max; ++h) {
                    const auto& cell = slot->by_model[mi][static_cast<std::size_t>(h - 1)];
                    if (cell.available) {
                        by_h[std::to_string(h)] = metrics_json(cell.metrics);
                        auto& agg = pooled[name][h];
                        agg.tp += cell.metrics.tp;
                        agg.fp += cell.metrics.fp;
                        agg.tn += cell.metrics.tn;
                        agg.fn += cell.metrics.fn;
                    } else {
                        by_h[std::to_string(h)] = {{"available", false}, {"reason", cell.reason}};
                    }
                }
                jm["by_horizon"] = std::move(by_h);
                const auto& mrh = slot->reliable_horizon[mi];
                jm["max_reliable_horizon"] = mrh ? json(*mrh) : json(nullptr);
                models[name] = std::move(jm);
            }
            tok["models"] = std::move(models);

            json agreement = json::object();
            for (const auto& [key, count] : slot->agreement) agreement[key] = count;
            tok["agreement"] = std::move(agreement);
            tokens[slot->token] = std::move(tok);
        }
        root["tokens"] = std::move(tokens);

        json overall = json::object();
        for (const auto& [name, by_h] : pooled) {
            json jm = json::object();
            for (const auto& [h, m] : by_h) jm[std::to_string(h)] = metrics_json(m);
            overall[name] = std::move(jm);
        }
        root["overall"] = std::move(overall);
        atomic_write(out, "metrics.json", root.dump(2) + "\n");
    }

    {
        json root;
        root["channel"] = channel_name;
        root["min_overlap_days"] = 40;
        json pairs = json::array();
        json edges;
        for (const auto& kind : {std::string("price"), channel_name})
            for (const auto& period : {"period1", "period2"}) edges[kind][period] = json::array();

        for (const auto& pair : protocol.pairs) {
            json jp;
            jp["tokens"] = {pair.token_a, pair.token_b};
            jp["overlap_days"] = pair.overlap_days;
            jp["skipped"] = pair.skipped;
            if (pair.skipped) {
                jp["reason"] = pair.skip_reason;
                pairs.push_back(std::move(jp));
                continue;
            }
            jp["price"] = {cell_json(pair.price[0]), cell_json(pair.price[1])};
            jp[channel_name] = {cell_json(pair.descriptor[0]), cell_json(pair.descriptor[1])};
            for (int p = 0; p < 2; ++p) {
                const char* period = p == 0 ? "period1" : "period2";
                if (pair.price[p].tested && pair.price[p].hidden.cointegrated)
                    edges["price"][period].push_back({pair.token_a, pair.token_b});
                if (pair.descriptor[p].tested && pair.descriptor[p].hidden.cointegrated)
                    edges[channel_name][period].push_back({pair.token_a, pair.token_b});
            }
            pairs.push_back(std::move(jp));
        }
        root["pairs"] = std::move(pairs);
        root["edges"] = std::move(edges);
        root["summary"] = {{"pairs_tested", protocol.summary.pairs_tested},
                           {"price_in_both_periods", protocol.summary.price_both_periods},
                           {channel_name + "_then_price", protocol.summary.descriptor_then_price}};
        atomic_write(out, "cointegration.json", root.dump(2) + "\n");
    }

    {
        json root;
        root["artifact"] = "tokentopo";
        root["version"] = TOKENTOPO_VERSION;
        root["seed"] = config.seed;
        json cfg;
        cfg["transactions"] = config.transactions_path;
        cfg["prices"] = config.prices_path;
        cfg["out"] = config.out_dir;
        cfg["tokens"] = config.tokens;
        cfg["k"] = config.k;
        cfg["alpha"] = config.alpha;
        cfg["delta"] = config.delta;
        cfg["horizon"] = config.horizon;
        cfg["horizon_max"] = config.horizon_max;
        cfg["window"] = config.window;
        cfg["max_dim"] = config.max_dim;
        cfg["trees"] = config.trees;
        switch (config.mtry.mode) {
            case forecast::MtrySpec::Mode::Sqrt:
                cfg["mtry"] = "auto";
                break;
            case forecast::MtrySpec::Mode::All:
                cfg["mtry"] = "all";
                break;
            case forecast::MtrySpec::Mode::Fixed:
                cfg["mtry"] = config.mtry.value;
                break;
        }
        cfg["min_leaf"] = config.min_leaf;
        cfg["train_frac"] = config.train_frac;
        cfg["rho"] = config.rho;
        cfg["coint_channel"] = channel_name;
        cfg["jobs"] = config.jobs;
        cfg["amount_normalization"] =
            config.normalization == ingest::AmountNormalization::PostFilter ? "post-filter"
                                                                            : "pre-filter";
        cfg["include_tx_count"] = config.include_tx_count;
        cfg["depth_self_pairs"] = config.depth_self_pairs;
        cfg["class_balanced"] = config.class_balanced;
        root["config"] = std::move(cfg);
        atomic_write(out, "manifest.json", root.dump(2) + "\n");
    }

    return report;
}

}  // namespace tokentopo::pipeline
