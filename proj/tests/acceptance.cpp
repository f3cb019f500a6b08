// End-to-end verification gates. Each gate prints exactly one PASS/FAIL
// line; the process exits nonzero if any gate fails. Checks that need a
// reference implementation use the independent oracles from tests/support.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"
#include "tokentopo/cointegration.hpp"
#include "tokentopo/depth.hpp"
#include "tokentopo/features.hpp"
#include "tokentopo/forecast.hpp"
#include "tokentopo/homology.hpp"
#include "tokentopo/pipeline.hpp"
#include "tokentopo/rng.hpp"
#include "tokentopo/synthetic.hpp"

using namespace tokentopo;
using namespace tokentopo::testsupport;
namespace fs = std::filesystem;

namespace {

struct GateRunner {
    int failures = 0;

    void run(const std::string& name, const std::function<std::string()>& body) {
        const auto start = std::chrono::steady_clock::now();
        std::string detail;
        bool ok = true;
        try {
            detail = body();
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        if (!detail.empty() && detail.rfind("FAIL:", 0) == 0) {
            ok = false;
            detail = detail.substr(5);
        }
        const auto secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start);
        std::printf("%s  %-28s %s[%.1fs]\n", ok ? "PASS" : "FAIL", name.c_str(),
                    detail.empty() ? "" : (detail + " ").c_str(), secs.count());
        std::fflush(stdout);
        if (!ok) ++failures;
    }
};

std::string fail(const std::string& why) { return "FAIL:" + why; }

// ---- gate 1: production curves equal the dense GF(2) oracle -----------

std::string homology_oracle_gate() {
    const auto start = std::chrono::steady_clock::now();
    Rng rng(811);
    homology::FiltrationSpec spec;
    std::size_t checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto g = random_graph(rng, 8, rng.uniform(0.15, 0.9));
        const auto complex = homology::build_filtration(g, spec);
        const auto curves = homology::betti_curves(complex, spec);
        for (double eps : probe_scales(complex, spec.scale_cap)) {
            const auto expect = betti_at(complex, eps, 2);
            for (int p = 0; p <= 2; ++p) {
                if (curves[static_cast<std::size_t>(p)].value_at(eps) !=
                    expect[static_cast<std::size_t>(p)])
                    return fail("trial " + std::to_string(trial) + " dim " + std::to_string(p) +
                                " at eps " + std::to_string(eps));
                ++checked;
            }
        }
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 60.0) return fail("took " + std::to_string(secs) + "s, budget 60s");
    return "200 graphs, " + std::to_string(checked) + " values";
}

// ---- gate 2: Euler characteristic at every breakpoint ------------------

std::string euler_gate() {
    Rng rng(812);
    std::size_t checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const auto g = random_graph(rng, 7, rng.uniform(0.3, 0.95));
        const auto complex = homology::build_filtration(g, -1);
        const auto pairs = homology::persistence_pairs(complex, complex.max_dim);
        const auto curves = homology::curves_from_pairs(pairs, complex.max_dim);
        for (double eps : probe_scales(complex, 1.0)) {
            long lhs = 0;
            for (const auto& s : complex.simplices)
                if (s.value <= eps) lhs += s.dim() % 2 == 0 ? 1 : -1;
            long rhs = 0;
            for (const auto& c : curves) rhs += (c.dim % 2 == 0 ? 1 : -1) * c.value_at(eps);
            if (lhs != rhs)
                return fail("trial " + std::to_string(trial) + ": chi " + std::to_string(lhs) +
                            " vs betti sum " + std::to_string(rhs));
            ++checked;
        }
    }
    return "50 complexes, " + std::to_string(checked) + " scales";
}

// ---- gate 3: canonical shapes ------------------------------------------

std::string canonical_gate() {
    const auto cycle = make_graph(4, {{0, 1, 0.5}, {1, 2, 0.5}, {2, 3, 0.5}, {0, 3, 0.5}});
    homology::FiltrationSpec spec;
    const auto cc = homology::betti_curves(homology::build_filtration(cycle, spec), spec);
    const bool cycle_ok = cc[0].breakpoints == std::vector<double>{0.0, 0.5} &&
                          cc[0].values == std::vector<int>{4, 1} &&
                          cc[1].breakpoints == std::vector<double>{0.0, 0.5} &&
                          cc[1].values == std::vector<int>{0, 1} &&
                          cc[2].values == std::vector<int>{0};
    if (!cycle_ok) return fail("four-cycle curves are wrong");

    std::vector<WeightedEdge> edges;
    const int anti[6] = {1, 0, 3, 2, 5, 4};
    for (int u = 0; u < 6; ++u)
        for (int v = u + 1; v < 6; ++v)
            if (anti[u] != v) edges.push_back({u, v, 0.5});
    const auto octa = make_graph(6, edges);
    const auto oc = homology::betti_curves(homology::build_filtration(octa, spec), spec);
    const bool octa_ok = oc[2].breakpoints == std::vector<double>{0.0, 0.5} &&
                         oc[2].values == std::vector<int>{0, 1} && oc[0].value_at(0.5) == 1 &&
                         oc[1].value_at(0.5) == 0;
    if (!octa_ok) return fail("octahedron curves are wrong");
    return "four-cycle and octahedron exact";
}

// ---- gate 4: band depth vs the dense grid oracle ------------------------

std::string mbd_gate() {
    std::vector<homology::BettiCurve> family{const_curve(1), const_curve(2), const_curve(3)};
    if (depth::mbd(family, 0) != 2.0 / 3.0 || depth::mbd(family, 1) != 1.0 ||
        depth::mbd(family, 2) != 2.0 / 3.0)
        return fail("constant family {1,2,3} depths are not (2/3, 1, 2/3)");

    Rng rng(814);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<homology::BettiCurve> curves;
        for (int i = 0; i < 3; ++i) curves.push_back(random_step_curve(rng, 8, 6));
        const auto subject = rng.below(3);
        const double exact = depth::mbd(curves, subject);
        const double grid = grid_mbd(curves, subject, 1.0, 1e-4);
        worst = std::max(worst, std::abs(exact - grid));
        if (worst > 1e-3)
            return fail("trial " + std::to_string(trial) + " grid gap " + std::to_string(worst));
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "100 triples, max gap %.2e", worst);
    return buf;
}

// ---- gate 5: label horizon monotonicity ---------------------------------

std::string label_gate() {
    Rng rng(815);
    const Date d0(18628);
    std::size_t defined = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        const int days = static_cast<int>(rng.range(10, 40));
        const auto prices = random_prices(rng, "t", d0, days, rng.uniform(0.05, 0.4), 0.1);
        for (int t = 0; t < days; ++t) {
            bool prev = false;
            bool prev_defined = false;
            for (int h = 1; h <= 8; ++h) {
                const auto flag = features::anomaly_label(prices, d0 + t, 0.25, h);
                if (flag.has_value()) ++defined;
                if (prev_defined && prev && flag.has_value() && !*flag)
                    return fail("trial " + std::to_string(trial) + " day " + std::to_string(t) +
                                ": flag dropped from horizon " + std::to_string(h - 1) + " to " +
                                std::to_string(h));
                if (flag.has_value()) {
                    prev = *flag;
                    prev_defined = true;
                } else {
                    prev_defined = false;
                }
            }
        }
    }
    return "1000 series, " + std::to_string(defined) + " labels, zero violations";
}

// ---- gate 6: cointegration power, size, and scale invariance ------------

std::string cointegration_gate() {
    int power = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(derive_seed(816, static_cast<std::uint64_t>(seed)));
        std::vector<double> x(500), y(500);
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += rng.normal();
            x[i] = s;
            y[i] = 2.0 * s + 1.0 + rng.normal(0.0, 0.5);
        }
        if (cointegration::engle_granger(y, x).cointegrated) ++power;
    }
    if (power < 90) return fail("power " + std::to_string(power) + "/100, need 90");

    int size = 0;
    for (int seed = 0; seed < 100; ++seed) {
        Rng rng(derive_seed(817, static_cast<std::uint64_t>(seed)));
        std::vector<double> x(500), y(500);
        double sx = 0.0, sy = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            sx += rng.normal();
            sy += rng.normal();
            x[i] = sx;
            y[i] = sy;
        }
        if (cointegration::engle_granger(y, x).cointegrated) ++size;
    }
    if (size > 10) return fail("size " + std::to_string(size) + "/100, cap 10");

    Rng rng(818);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x(300), y(300);
        double s = 0.0, w = 0.0;
        const bool tied = trial % 2 == 0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            s += rng.normal();
            w += rng.normal();
            x[i] = s;
            y[i] = tied ? 1.5 * s + rng.normal(0.0, 0.4) : w;
        }
        const bool base = cointegration::engle_granger(y, x).cointegrated;
        const double c = rng.uniform(0.02, 40.0);
        const double d = rng.uniform(-50.0, 50.0);
        std::vector<double> scaled(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) scaled[i] = c * y[i] + d;
        if (cointegration::engle_granger(scaled, x).cointegrated != base)
            return fail("verdict changed under rescaling, trial " + std::to_string(trial));
    }
    return "power " + std::to_string(power) + "/100, size " + std::to_string(size) +
           "/100, 50 rescalings invariant";
}

// ---- gate 7: planted regime shifts are recovered end to end -------------

std::string signal_gate() {
    const auto start = std::chrono::steady_clock::now();
    std::size_t tp1 = 0, fp1 = 0, tp4 = 0, fp4 = 0;
    for (int seed = 0; seed < 20; ++seed) {
        synth::SynthParams sp;
        sp.days = 300;
        sp.seed = static_cast<std::uint64_t>(seed) + 1;
        const auto data = synth::generate(sp);
        features::FeatureParams fparams;
        const auto tf =
            features::build_token_features(sp.token, data.transactions, data.prices, fparams);
        const auto rows = features::feature_rows(tf, data.prices, fparams.delta, 2);
        const auto split = forecast::chronological_split(forecast::to_dataset(rows), 2.0 / 3.0);

        forecast::ForestParams params;
        params.num_trees = 500;
        params.jobs = 4;
        params.seed = derive_seed(819, static_cast<std::uint64_t>(seed));
        const auto m1 = forecast::train_forest(split.train, forecast::ModelId::M1, 4, params);
        const auto m4 = forecast::train_forest(split.train, forecast::ModelId::M4, 7, params);
        const auto e1 = forecast::evaluate(forecast::predict(m1, split.test), split.test);
        const auto e4 = forecast::evaluate(forecast::predict(m4, split.test), split.test);
        tp1 += e1.tp;
        fp1 += e1.fp;
        tp4 += e4.tp;
        fp4 += e4.fp;
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs >= 600.0) return fail("took " + std::to_string(secs) + "s, budget 600s");
    if (tp4 + fp4 < 20) return fail("wide model made too few predictions to compare");
    const double p1 = tp1 + fp1 > 0 ? static_cast<double>(tp1) / static_cast<double>(tp1 + fp1) : 0.0;
    const double p4 = static_cast<double>(tp4) / static_cast<double>(tp4 + fp4);
    char buf[128];
    std::snprintf(buf, sizeof buf, "pooled precision M1 %.3f (n=%zu) M4 %.3f (n=%zu)", p1,
                  tp1 + fp1, p4, tp4 + fp4);
    if (p4 - p1 < 0.10) return fail(std::string(buf) + ", gap below 10pp");
    return buf;
}

// ---- gate 8: byte-identical reruns --------------------------------------

std::string determinism_gate() {
    TempDir scratch;
    synth::SynthParams sp;
    sp.days = 90;
    sp.seed = 4;
    const auto data = synth::generate(sp);
    std::string tx = "token,from,to,amount,timestamp\n";
    std::string px = "token,date,open\n";
    char buf[64];
    for (const auto& t : data.transactions) {
        std::snprintf(buf, sizeof buf, "%.17g", t.amount);
        tx += t.token + "," + t.from + "," + t.to + "," + buf + "," +
              std::to_string(t.timestamp) + "\n";
    }
    for (const auto& [day, price] : data.prices.entries()) {
        std::snprintf(buf, sizeof buf, "%.17g", price);
        px += sp.token + "," + day.to_iso() + "," + buf + "\n";
    }
    const auto tx_path = scratch.file("transactions.csv", tx);
    const auto px_path = scratch.file("prices.csv", px);

    auto run = [&](const std::string& out, int jobs) {
        pipeline::PipelineConfig cfg;
        cfg.transactions_path = tx_path;
        cfg.prices_path = px_path;
        cfg.out_dir = (scratch.path() / out).string();
        cfg.trees = 60;
        cfg.horizon_max = 4;
        cfg.seed = 12345;
        cfg.jobs = jobs;
        const auto report = pipeline::run_pipeline(cfg);
        if (!report.ok()) throw std::runtime_error("pipeline run failed");
        return read_file(scratch.path() / out / "metrics.json");
    };
    const auto a = run("a", 1);
    const auto b = run("b", 1);
    const auto c = run("c", 4);
    if (a != b) return fail("reruns differ byte for byte");
    if (a != c) return fail("worker count changed the output bytes");
    return "three runs, metrics.json byte-identical";
}

// ---- gate 9: published dataset, when provided ----------------------------

std::string dataset_gate() {
    const char* dir = std::getenv("TOKEN_DATASET_DIR");
    if (dir == nullptr) return "skipped: TOKEN_DATASET_DIR not set";
    const fs::path root(dir);
    const auto tx = root / "transactions.csv";
    const auto px = root / "prices.csv";
    if (!fs::exists(tx) || !fs::exists(px))
        return fail("TOKEN_DATASET_DIR lacks transactions.csv or prices.csv");

    TempDir scratch;
    pipeline::PipelineConfig cfg;
    cfg.transactions_path = tx.string();
    cfg.prices_path = px.string();
    cfg.out_dir = (scratch.path() / "out").string();
    cfg.jobs = 4;
    cfg.seed = 1;
    const auto report = pipeline::run_pipeline(cfg);
    if (!report.ok()) {
        std::string msg = "token failures:";
        for (const auto& f : report.failures) msg += " " + f.token;
        return fail(msg);
    }

    const auto metrics =
        nlohmann::json::parse(read_file(scratch.path() / "out" / "metrics.json"));
    std::ostringstream summary;
    summary << report.processed.size() << " tokens;";
    for (const auto& [token, body] : metrics.at("tokens").items()) {
        summary << " " << token << "[";
        for (const char* model : {"M1", "M2", "M3", "M4"}) {
            const auto& cell = body.at("models").at(model).at("by_horizon").at("2");
            if (cell.contains("accuracy"))
                summary << cell.at("accuracy").get<double>();
            else
                summary << "-";
            summary << (std::string(model) == "M4" ? "" : "/");
        }
        summary << "]";
    }
    // informative comparison, not a gate: the known reference point
    if (metrics.at("tokens").contains("tronix")) {
        const auto& cell =
            metrics.at("tokens").at("tronix").at("models").at("M4").at("by_horizon").at("2");
        if (cell.contains("accuracy")) {
            const double acc = cell.at("accuracy").get<double>();
            summary << " tronix M4 h2 accuracy " << acc << " (reference 0.975 +/- 0.05)";
        }
    }
    return summary.str();
}

}  // namespace

int main() {
    GateRunner gates;
    gates.run("homology-oracle-equivalence", homology_oracle_gate);
    gates.run("euler-characteristic", euler_gate);
    gates.run("canonical-shapes", canonical_gate);
    gates.run("band-depth-exactness", mbd_gate);
    gates.run("label-monotonicity", label_gate);
    gates.run("cointegration-power-size", cointegration_gate);
    gates.run("synthetic-signal-recovery", signal_gate);
    gates.run("determinism", determinism_gate);
    gates.run("dataset-accuracy", dataset_gate);
    if (gates.failures > 0) {
        std::printf("%d gate(s) failed\n", gates.failures);
        return 1;
    }
    std::printf("all gates passed\n");
    return 0;
}
